#ifndef FTB_EVAL_ARTSEL_HPP
#define FTB_EVAL_ARTSEL_HPP

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "core/json.hpp"
#include "core/providers.hpp"
#include "ingest/artifact.hpp"
#include "tree/tree.hpp"

namespace ftb {

struct ArtSelSample {
    std::string requirement;
    std::vector<std::string> gold;  // distinct artifact ids, file order
};

// Parses {"samples":[{"requirement": text, "gold": [ids...]}]}. Raises
// errc::schema for shape problems and errc::unresolved_gold_id naming the
// first gold id missing from valid_ids.
std::vector<ArtSelSample> load_artsel(const std::string& path,
                                      const std::set<std::string>& valid_ids);

enum class GuideKind { embedding_mock, remote_llm };
enum class GuideMode { traverse, whole_tree };

struct RecommendOptions {
    GuideKind guide = GuideKind::embedding_mock;
    GuideMode mode = GuideMode::traverse;
    int beam = 3;    // internal paths kept per level during traversal
    int top_n = 0;   // flat ranking cutoff; 0 keeps every artifact
    ProviderConfig provider;            // remote_llm only
    std::shared_ptr<ChatProvider> chat; // injected for tests; built from provider otherwise
};

// Beam descent from the top nodes: children are scored against the
// requirement (cosine for embedding_mock, a choose-one prompt for
// remote_llm), the best `beam` internal paths by cumulative score survive,
// and every reached leaf is collected. Reached leaves are returned as
// artifact ids ranked by the leaf's own score (ties by ascending id).
std::vector<std::string> recommend_with_tree(const std::string& requirement,
                                             const FeatureTree& tree,
                                             const RecommendOptions& opts);

// No-tree control: every artifact scored directly against the requirement.
std::vector<std::string> recommend_flat(const std::string& requirement,
                                        const ArtifactLibrary& library,
                                        const RecommendOptions& opts);

struct SampleResult {
    std::string requirement;
    std::vector<std::string> gold;
    std::vector<std::string> recommended;  // top-|gold| slice actually scored
    double precision = 0.0;
};

struct EvalReport {
    std::vector<SampleResult> samples;
    double mean_precision = 0.0;
    double wall_time_s = 0.0;  // console-only; never serialized
};

// Per-sample precision at k = |gold|; mean over the dataset.
EvalReport evaluate(const std::vector<ArtSelSample>& dataset, const FeatureTree& tree,
                    const RecommendOptions& opts);

json eval_report_json(const EvalReport& report);

}  // namespace ftb

#endif
