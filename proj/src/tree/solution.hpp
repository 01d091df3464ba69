#ifndef FTB_TREE_SOLUTION_HPP
#define FTB_TREE_SOLUTION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cluster/select_k.hpp"
#include "core/embedding.hpp"
#include "core/json.hpp"
#include "summarize/summarize.hpp"

namespace ftb {

struct StopCriteria {
    int min_top_count = 4;  // never create a level with fewer nodes
    int max_depth = 6;      // highest level index a build may reach
};

// One (embedding technique, cluster algorithm, cluster-number method)
// combination plus everything a build needs around it.
struct SolutionConfig {
    EmbedderConfig embedder;
    ClusterAlgo algo = ClusterAlgo::kmeans;
    CnMethod cn;
    double cut_fraction = 0.5;  // hierarchical only
    SummarizerConfig summarizer;
    StopCriteria stop;
    std::uint64_t seed = 42;
    std::size_t jobs = 1;
};

// Raises errc::incompatible naming the valid pairs, or errc::invalid_argument
// for out-of-range fields. Valid pairs: kmeans+{elbow,silhouette},
// gmm+{elbow,silhouette,bic}, hierarchical+none — 6 pairs, 24 solutions
// across the four embedders.
void validate_solution(const SolutionConfig& config);

// "TF-IDF" or the remote model name; the ET column label.
std::string embedder_label(const EmbedderConfig& embedder);

// The canonical four embedders in presentation order: TF-IDF first, then the
// three remote models. Remote ones inherit endpoint/cache settings from
// `like`.
std::vector<EmbedderConfig> canonical_embedders(const EmbedderConfig& like);

// All 24 valid solutions derived from `base` (seed, stop, summarizer,
// endpoint, and cache settings are kept), ordered embedder-major with the six
// (algorithm, count-method) pairs per embedder.
std::vector<SolutionConfig> enumerate_solutions(const SolutionConfig& base);

// Stable one-line description of everything that shapes a build's output;
// stamped into exported trees as config_fingerprint.
std::string solution_fingerprint(const SolutionConfig& config);

// Strict parsers for the JSON configuration surface. Absent fields keep
// their defaults; unknown keys raise errc::schema so typos never silently
// fall back to defaults.
EmbedderConfig embedder_config_from_json(const json& doc);
SolutionConfig solution_config_from_json(const json& doc);

}  // namespace ftb

#endif
