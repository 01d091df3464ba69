#include "metrics/tree_metrics.hpp"

#include <algorithm>
#include <map>

#include "cluster/silhouette.hpp"
#include "core/log.hpp"

namespace ftb {

TreeSilhouette tree_silhouette(const FeatureTree& tree, const EmbedderConfig& embed) {
    const int top_level = tree.max_level();

    // Positions per level in insertion order, and each node's parent position.
    std::map<int, std::vector<std::size_t>> by_level;
    std::map<std::string, std::size_t> parent_of;  // child id -> parent position
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        by_level[tree.nodes[i].level].push_back(i);
        for (const std::string& child : tree.nodes[i].children) parent_of[child] = i;
    }

    TreeSilhouette out;
    double weighted_sum = 0.0;
    std::size_t total_nodes = 0;
    for (int level = 0; level < top_level; ++level) {
        const std::vector<std::size_t>& members = by_level[level];
        const std::vector<std::size_t>& parents = by_level[level + 1];
        if (parents.size() < 2 || members.size() < 2) continue;

        std::map<std::size_t, int> parent_label;
        for (std::size_t p = 0; p < parents.size(); ++p)
            parent_label[parents[p]] = static_cast<int>(p);

        std::vector<std::string> texts;
        texts.reserve(members.size());
        ClusterAssignment assignment;
        assignment.k = static_cast<int>(parents.size());
        for (std::size_t pos : members) {
            texts.push_back(tree.nodes[pos].description);
            assignment.labels.push_back(parent_label.at(parent_of.at(tree.nodes[pos].id)));
        }

        EmbeddingMatrix X = embed_texts(texts, embed);
        const double level_score = silhouette_score(X, assignment);

        LevelSilhouette entry;
        entry.level = level;
        entry.node_count = static_cast<int>(members.size());
        entry.score = level_score;
        out.levels.push_back(entry);
        weighted_sum += level_score * static_cast<double>(members.size());
        total_nodes += members.size();
    }

    if (total_nodes == 0) {
        out.no_qualifying_level = true;
        out.score = 0.0;
        log_warn("tree silhouette: no level has two or more parents; score fixed at 0");
        return out;
    }
    out.score = weighted_sum / static_cast<double>(total_nodes);
    return out;
}

const char* const kGvalueFormulaNote =
    "surrogate, not the externally defined GValue: mean over internal nodes of "
    "max(0, coverage - redundancy); coverage = mean cosine(parent, child), "
    "redundancy = mean pairwise cosine among children (0 when a node has fewer "
    "than 2 children); all node descriptions embedded in one shared fit";

double gvalue_surrogate(const FeatureTree& tree, const EmbedderConfig& embed) {
    std::vector<std::size_t> internal;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i)
        if (tree.nodes[i].level > 0) internal.push_back(i);
    if (internal.empty()) return 0.0;

    std::vector<std::string> texts;
    texts.reserve(tree.nodes.size());
    std::map<std::string, std::size_t> row_of;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        row_of[tree.nodes[i].id] = i;
        texts.push_back(tree.nodes[i].description);
    }
    EmbeddingMatrix X = embed_texts(texts, embed);

    double sum = 0.0;
    for (std::size_t pos : internal) {
        const FeatureNode& parent = tree.nodes[pos];

        double coverage = 0.0;
        for (const std::string& child : parent.children)
            coverage += cosine_similarity(X.row(pos), X.row(row_of.at(child)));
        coverage /= static_cast<double>(parent.children.size());

        double redundancy = 0.0;
        if (parent.children.size() >= 2) {
            std::size_t pairs = 0;
            for (std::size_t a = 0; a < parent.children.size(); ++a)
                for (std::size_t b = a + 1; b < parent.children.size(); ++b) {
                    redundancy += cosine_similarity(X.row(row_of.at(parent.children[a])),
                                                    X.row(row_of.at(parent.children[b])));
                    ++pairs;
                }
            redundancy /= static_cast<double>(pairs);
        }

        sum += std::clamp(coverage - redundancy, 0.0, 1.0);
    }
    return sum / static_cast<double>(internal.size());
}

double precision(const std::set<std::string>& recommended,
                 const std::set<std::string>& gold) {
    if (recommended.empty()) return 0.0;
    std::size_t hits = 0;
    for (const std::string& id : recommended)
        if (gold.count(id)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(recommended.size());
}

TreeScore score_tree(const FeatureTree& tree, const EmbedderConfig& embed) {
    TreeScore score;
    TreeSilhouette sil = tree_silhouette(tree, embed);
    score.silhouette = sil.score;
    score.per_level = std::move(sil.levels);
    score.no_qualifying_level = sil.no_qualifying_level;
    score.gvalue = gvalue_surrogate(tree, embed);
    return score;
}

json metric_report_json(const TreeScore& score) {
    json doc;
    doc["silhouette"] = score.silhouette;
    json levels = json::array();
    for (const LevelSilhouette& level : score.per_level) levels.push_back(level.score);
    doc["per_level_silhouette"] = std::move(levels);
    doc["gvalue_surrogate"] = score.gvalue;
    doc["gvalue_formula_note"] = kGvalueFormulaNote;
    return doc;
}

}  // namespace ftb
