#include "tree/tree.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "cluster/select_k.hpp"
#include "core/embedding.hpp"
#include "core/errors.hpp"
#include "core/log.hpp"
#include "core/parallel.hpp"
#include "core/seed.hpp"
#include "core/text.hpp"
#include "summarize/summarize.hpp"

namespace ftb {

const FeatureNode* FeatureTree::by_id(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    return &nodes[it->second];
}

std::size_t FeatureTree::leaf_count() const {
    std::size_t n = 0;
    for (const FeatureNode& node : nodes)
        if (node.level == 0) ++n;
    return n;
}

int FeatureTree::max_level() const {
    int m = 0;
    for (const FeatureNode& node : nodes) m = std::max(m, node.level);
    return m;
}

void FeatureTree::rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < nodes.size(); ++i) index_[nodes[i].id] = i;
}

namespace {

std::string unique_node_id(int level, const std::string& name,
                           std::set<std::string>& used) {
    std::string base = "f" + std::to_string(level) + "-";
    std::string slug = slugify(name);
    base += slug.empty() ? "feature" : slug;
    std::string candidate = base;
    for (int suffix = 2; used.count(candidate); ++suffix)
        candidate = base + "-" + std::to_string(suffix);
    used.insert(candidate);
    return candidate;
}

}  // namespace

FeatureTree build_tree(const ArtifactLibrary& library, const SolutionConfig& config) {
    validate_solution(config);
    if (library.size() < 2)
        raise(errc::invalid_argument, "tree build needs a library of at least 2 artifacts");

    Summarizer summarizer(config.summarizer);

    FeatureTree tree;
    tree.config_fingerprint = solution_fingerprint(config);
    std::set<std::string> used_ids;

    std::vector<std::size_t> current;  // node positions of the level being grown
    for (const Artifact& artifact : library.artifacts()) {
        FeatureNode leaf;
        leaf.id = "f0-" + artifact.id;
        leaf.name = artifact.name;
        leaf.description = artifact.description;
        leaf.level = 0;
        leaf.artifact_id = artifact.id;
        used_ids.insert(leaf.id);
        current.push_back(tree.nodes.size());
        tree.nodes.push_back(std::move(leaf));
    }

    int level = 0;
    while (true) {
        const int n = static_cast<int>(current.size());
        if (n <= config.stop.min_top_count) break;  // small enough to be the top
        if (level + 1 > config.stop.max_depth) break;

        std::vector<std::string> texts;
        texts.reserve(current.size());
        for (std::size_t pos : current) texts.push_back(tree.nodes[pos].description);
        EmbeddingMatrix X = embed_texts(texts, config.embedder);

        CnMethod cn = config.cn;
        const int auto_max = std::min(8, n - 1);
        cn.k_max = cn.k_max == 0 ? auto_max : std::min(cn.k_max, n - 1);
        if (config.algo != ClusterAlgo::hierarchical && cn.k_min > cn.k_max)
            break;  // no viable k below the current count

        const std::uint64_t level_seed =
            mix_seed(config.seed, static_cast<std::uint64_t>(level) + 1);
        ClusterAssignment assignment =
            cluster_auto(X, config.algo, cn, config.cut_fraction, level_seed);

        if (assignment.k >= n) break;                       // no reduction
        if (assignment.k < config.stop.min_top_count) break;  // level would be too thin

        std::vector<std::vector<std::size_t>> groups(assignment.k);
        for (std::size_t i = 0; i < current.size(); ++i)
            groups[assignment.labels[i]].push_back(current[i]);

        std::vector<FeatureSummary> parents(assignment.k);
        parallel_for_indexed(static_cast<std::size_t>(assignment.k), config.jobs,
                             [&](std::size_t c) {
                                 std::vector<FeatureSummary> members;
                                 members.reserve(groups[c].size());
                                 for (std::size_t pos : groups[c])
                                     members.push_back({tree.nodes[pos].name,
                                                        tree.nodes[pos].description});
                                 parents[c] = summarizer.summarize(members);
                             });

        ++level;
        std::vector<std::size_t> next;
        next.reserve(parents.size());
        for (int c = 0; c < assignment.k; ++c) {
            FeatureNode node;
            node.id = unique_node_id(level, parents[c].name, used_ids);
            node.name = parents[c].name;
            node.description = parents[c].description;
            node.level = level;
            node.children.reserve(groups[c].size());
            for (std::size_t pos : groups[c]) node.children.push_back(tree.nodes[pos].id);
            next.push_back(tree.nodes.size());
            tree.nodes.push_back(std::move(node));
        }
        current = std::move(next);
    }

    tree.top_ids.reserve(current.size());
    for (std::size_t pos : current) tree.top_ids.push_back(tree.nodes[pos].id);
    tree.rebuild_index();
    return tree;
}

TreeStats tree_stats(const FeatureTree& tree) {
    TreeStats stats;
    stats.node_count = static_cast<int>(tree.nodes.size());
    const int max_level = tree.max_level();
    stats.layers_with_leaves = max_level + 1;
    stats.feature_layers = max_level;
    for (const FeatureNode& node : tree.nodes)
        if (node.level > 0) ++stats.feature_node_count;
    return stats;
}

json tree_to_json(const FeatureTree& tree) {
    json doc;
    doc["library_size"] = tree.leaf_count();
    json nodes = json::array();
    for (const FeatureNode& node : tree.nodes) {
        json item;
        item["id"] = node.id;
        item["name"] = node.name;
        item["description"] = node.description;
        item["level"] = node.level;
        item["children"] = node.children;
        if (node.level == 0) item["artifact_id"] = node.artifact_id;
        nodes.push_back(std::move(item));
    }
    doc["nodes"] = std::move(nodes);
    doc["top_ids"] = tree.top_ids;
    doc["config_fingerprint"] = tree.config_fingerprint;
    return doc;
}

namespace {

[[noreturn]] void schema_fail(const std::string& what) {
    raise(errc::schema, "tree document: " + what);
}

void require_string(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_string())
        schema_fail(where + " needs string field '" + key + "'");
}

}  // namespace

FeatureTree tree_from_json(const json& doc) {
    if (!doc.is_object()) schema_fail("root must be an object");
    if (!doc.contains("library_size") || !doc["library_size"].is_number_unsigned())
        schema_fail("'library_size' must be a non-negative integer");
    if (!doc.contains("nodes") || !doc["nodes"].is_array())
        schema_fail("'nodes' must be an array");
    if (!doc.contains("top_ids") || !doc["top_ids"].is_array())
        schema_fail("'top_ids' must be an array");
    if (!doc.contains("config_fingerprint") || !doc["config_fingerprint"].is_string())
        schema_fail("'config_fingerprint' must be a string");

    FeatureTree tree;
    tree.config_fingerprint = doc["config_fingerprint"].get<std::string>();

    for (const json& item : doc["nodes"]) {
        if (!item.is_object()) schema_fail("every node must be an object");
        require_string(item, "id", "node");
        const std::string where = "node '" + item["id"].get<std::string>() + "'";
        require_string(item, "name", where);
        require_string(item, "description", where);
        if (!item.contains("level") || !item["level"].is_number_integer() ||
            item["level"].get<int>() < 0)
            schema_fail(where + " needs integer field 'level' >= 0");
        if (!item.contains("children") || !item["children"].is_array())
            schema_fail(where + " needs array field 'children'");

        FeatureNode node;
        node.id = item["id"].get<std::string>();
        node.name = item["name"].get<std::string>();
        node.description = item["description"].get<std::string>();
        node.level = item["level"].get<int>();
        for (const json& child : item["children"]) {
            if (!child.is_string()) schema_fail(where + " children must be strings");
            node.children.push_back(child.get<std::string>());
        }
        if (item.contains("artifact_id")) {
            if (!item["artifact_id"].is_string())
                schema_fail(where + " 'artifact_id' must be a string");
            node.artifact_id = item["artifact_id"].get<std::string>();
        }
        tree.nodes.push_back(std::move(node));
    }
    for (const json& id : doc["top_ids"]) {
        if (!id.is_string()) schema_fail("'top_ids' entries must be strings");
        tree.top_ids.push_back(id.get<std::string>());
    }
    if (tree.nodes.empty()) schema_fail("'nodes' must not be empty");
    if (tree.top_ids.empty()) schema_fail("'top_ids' must not be empty");

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i)
        if (!index.emplace(tree.nodes[i].id, i).second)
            schema_fail("duplicate node id '" + tree.nodes[i].id + "'");

    // Leaf shape: level 0 <=> has artifact_id <=> no children.
    for (const FeatureNode& node : tree.nodes) {
        const bool is_leaf = node.level == 0;
        if (is_leaf != !node.artifact_id.empty())
            schema_fail("leaf bijection: node '" + node.id +
                        "' must carry 'artifact_id' exactly when level is 0");
        if (is_leaf != node.children.empty())
            schema_fail("leaf bijection: node '" + node.id +
                        "' must have children exactly when level > 0");
    }

    // Leaf bijection against the declared library size.
    std::set<std::string> artifact_ids;
    std::size_t leaf_count = 0;
    for (const FeatureNode& node : tree.nodes) {
        if (node.level != 0) continue;
        ++leaf_count;
        if (!artifact_ids.insert(node.artifact_id).second)
            schema_fail("leaf bijection: artifact '" + node.artifact_id +
                        "' appears on more than one leaf");
    }
    if (leaf_count != doc["library_size"].get<std::size_t>())
        schema_fail("leaf bijection: " + std::to_string(leaf_count) +
                    " leaves but 'library_size' is " +
                    std::to_string(doc["library_size"].get<std::size_t>()));

    // Edges: children exist and sit exactly one level below their parent.
    std::map<std::string, int> parent_refs;
    for (const FeatureNode& node : tree.nodes) {
        for (const std::string& child_id : node.children) {
            auto it = index.find(child_id);
            if (it == index.end())
                schema_fail("node '" + node.id + "' references unknown child '" +
                            child_id + "'");
            const FeatureNode& child = tree.nodes[it->second];
            if (child.level != node.level - 1)
                schema_fail("node '" + node.id + "' (level " +
                            std::to_string(node.level) + ") has child '" + child_id +
                            "' at level " + std::to_string(child.level) +
                            ", expected one level below");
            ++parent_refs[child_id];
        }
    }

    // Single parent: tops are unreferenced, everything else referenced once.
    std::set<std::string> tops;
    for (const std::string& id : tree.top_ids) {
        if (!index.count(id)) schema_fail("unknown top id '" + id + "'");
        if (!tops.insert(id).second) schema_fail("duplicate top id '" + id + "'");
    }
    const int top_level = tree.nodes[index[tree.top_ids.front()]].level;
    for (const std::string& id : tree.top_ids)
        if (tree.nodes[index[id]].level != top_level)
            schema_fail("top nodes must share one level; '" + id + "' differs");
    for (const FeatureNode& node : tree.nodes) {
        const int refs = parent_refs.count(node.id) ? parent_refs[node.id] : 0;
        if (tops.count(node.id)) {
            if (refs != 0)
                schema_fail("single parent: top node '" + node.id +
                            "' is referenced as a child");
        } else if (refs != 1) {
            schema_fail("single parent: node '" + node.id + "' has " +
                        std::to_string(refs) + " parents, expected 1");
        }
        if (node.level > top_level)
            schema_fail("node '" + node.id + "' sits above the top level");
    }

    tree.rebuild_index();
    return tree;
}

std::string tree_to_dot(const FeatureTree& tree) {
    auto escape = [](const std::string& s) {
        std::string out;
        out.reserve(s.size());
        for (char c : s) {
            if (c == '"' || c == '\\') out.push_back('\\');
            out.push_back(c);
        }
        return out;
    };
    std::ostringstream out;
    out << "digraph ftree {\n";
    for (const FeatureNode& node : tree.nodes)
        out << "  \"" << escape(node.id) << "\" [label=\"" << escape(node.name)
            << "\"];\n";
    for (const FeatureNode& node : tree.nodes)
        for (const std::string& child : node.children)
            out << "  \"" << escape(node.id) << "\" -> \"" << escape(child) << "\";\n";
    out << "}\n";
    return out.str();
}

std::string tree_to_markdown(const FeatureTree& tree) {
    std::ostringstream out;
    const int top_level = tree.max_level();
    // Depth-first from each top node; indent grows toward the leaves.
    auto render = [&](auto&& self, const std::string& id) -> void {
        const FeatureNode* node = tree.by_id(id);
        if (!node) return;
        const int indent = top_level - node->level;
        for (int i = 0; i < indent; ++i) out << "  ";
        out << "- " << node->name;
        if (!node->description.empty()) out << " — " << first_line(node->description);
        out << "\n";
        for (const std::string& child : node->children) self(self, child);
    };
    for (const std::string& id : tree.top_ids) render(render, id);
    return out.str();
}

void export_tree(const FeatureTree& tree, TreeExportFormat format,
                 const std::string& path) {
    std::string payload;
    switch (format) {
        case TreeExportFormat::json:
            payload = tree_to_json(tree).dump(2) + "\n";
            break;
        case TreeExportFormat::dot:
            payload = tree_to_dot(tree);
            break;
        case TreeExportFormat::markdown:
            payload = tree_to_markdown(tree);
            break;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(errc::io, "cannot open for writing: " + path);
    out << payload;
    if (!out) raise(errc::io, "write failed: " + path);
}

FeatureTree import_tree(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io, "cannot open: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const std::exception& e) {
        raise(errc::schema, "tree document: not valid JSON: " + std::string(e.what()));
    }
    return tree_from_json(doc);
}

}  // namespace ftb
