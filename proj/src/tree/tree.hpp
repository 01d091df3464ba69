#ifndef FTB_TREE_TREE_HPP
#define FTB_TREE_TREE_HPP

#include <map>
#include <string>
#include <vector>

#include "core/json.hpp"
#include "ingest/artifact.hpp"
#include "tree/solution.hpp"

namespace ftb {

struct FeatureNode {
    std::string id;
    std::string name;
    std::string description;
    int level = 0;                      // 0 = leaf
    std::vector<std::string> children;  // empty iff leaf
    std::string artifact_id;            // set iff leaf
};

// Bottom-up feature tree: leaves are the library's artifacts, every internal
// node summarizes its children, all top nodes share the maximum level.
struct FeatureTree {
    std::vector<FeatureNode> nodes;  // creation order: leaves, then per level
    std::vector<std::string> top_ids;
    std::string config_fingerprint;

    const FeatureNode* by_id(const std::string& id) const;
    std::size_t leaf_count() const;
    int max_level() const;

    void rebuild_index();

private:
    std::map<std::string, std::size_t> index_;
};

struct TreeStats {
    int layers_with_leaves = 0;   // max level + 1
    int feature_layers = 0;       // levels above the leaves
    int node_count = 0;           // including leaves
    int feature_node_count = 0;   // internal only
};

// Recursive embed → cluster → summarize. Stops rather than create a level
// smaller than stop.min_top_count, deeper than stop.max_depth, or not smaller
// than the level below it. Library must hold at least 2 artifacts.
FeatureTree build_tree(const ArtifactLibrary& library, const SolutionConfig& config);

TreeStats tree_stats(const FeatureTree& tree);

enum class TreeExportFormat { json, dot, markdown };

json tree_to_json(const FeatureTree& tree);
// Validates structure; raises errc::schema naming the first violated
// invariant ("single parent", "leaf bijection", ...).
FeatureTree tree_from_json(const json& doc);

void export_tree(const FeatureTree& tree, TreeExportFormat format, const std::string& path);
FeatureTree import_tree(const std::string& path);

std::string tree_to_dot(const FeatureTree& tree);
std::string tree_to_markdown(const FeatureTree& tree);

}  // namespace ftb

#endif
