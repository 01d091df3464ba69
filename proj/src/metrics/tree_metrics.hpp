#ifndef FTB_METRICS_TREE_METRICS_HPP
#define FTB_METRICS_TREE_METRICS_HPP

#include <set>
#include <string>
#include <vector>

#include "core/embedding.hpp"
#include "core/json.hpp"
#include "tree/tree.hpp"

namespace ftb {

struct LevelSilhouette {
    int level = 0;       // the level whose nodes were scored
    int node_count = 0;  // weight in the tree-wide mean
    double score = 0.0;
};

struct TreeSilhouette {
    double score = 0.0;                    // node-count-weighted mean, 0 if degenerate
    std::vector<LevelSilhouette> levels;   // qualifying levels, ascending
    bool no_qualifying_level = false;      // no level had >= 2 parents
};

// Grouping quality per level: nodes of level L labeled by their parent,
// scored with silhouette over embeddings of their descriptions. Levels with
// fewer than 2 parents contribute nothing.
TreeSilhouette tree_silhouette(const FeatureTree& tree, const EmbedderConfig& embed);

// Parent-coverage surrogate in [0,1]: mean over internal nodes of
// max(0, coverage - redundancy) where coverage = mean cosine(parent, child)
// and redundancy = mean pairwise cosine among the children (0 for < 2
// children). All node descriptions are embedded in one shared fit.
double gvalue_surrogate(const FeatureTree& tree, const EmbedderConfig& embed);

extern const char* const kGvalueFormulaNote;

// |recommended ∩ gold| / |recommended|; empty recommendation scores 0.
double precision(const std::set<std::string>& recommended,
                 const std::set<std::string>& gold);

struct TreeScore {
    double silhouette = 0.0;
    double gvalue = 0.0;
    std::vector<LevelSilhouette> per_level;
    bool no_qualifying_level = false;
};

TreeScore score_tree(const FeatureTree& tree, const EmbedderConfig& embed);
json metric_report_json(const TreeScore& score);

}  // namespace ftb

#endif
