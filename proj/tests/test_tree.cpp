#include "doctest.h"

#include <deque>
#include <map>
#include <set>

#include "core/errors.hpp"
#include "test_support.hpp"
#include "tree/tree.hpp"

using namespace ftb;

namespace {

ArtifactLibrary fixture_library() {
    return ArtifactLibrary::load(ftest::fixture_path("fixture_library.json"));
}

SolutionConfig default_solution() {
    SolutionConfig config;
    config.algo = ClusterAlgo::kmeans;
    config.cn.kind = CnKind::silhouette;
    config.seed = 42;
    return config;
}

// Structural contract every built tree must satisfy.
void check_invariants(const FeatureTree& tree, const ArtifactLibrary& library,
                      const StopCriteria& stop) {
    REQUIRE(!tree.nodes.empty());
    REQUIRE(!tree.top_ids.empty());

    std::map<int, int> level_counts;
    std::set<std::string> ids;
    std::set<std::string> leaf_artifacts;
    for (const FeatureNode& node : tree.nodes) {
        CHECK(ids.insert(node.id).second);
        ++level_counts[node.level];
        if (node.level == 0) {
            CHECK(node.children.empty());
            CHECK(!node.artifact_id.empty());
            CHECK(leaf_artifacts.insert(node.artifact_id).second);
            CHECK(library.by_id(node.artifact_id) != nullptr);
        } else {
            CHECK(!node.children.empty());
            CHECK(node.artifact_id.empty());
        }
        CHECK(!node.name.empty());
    }

    // Leaf bijection: one leaf per library artifact.
    CHECK(leaf_artifacts.size() == library.size());
    CHECK(static_cast<std::size_t>(level_counts[0]) == library.size());

    // Strict level reduction all the way up.
    const int top_level = tree.max_level();
    for (int level = 1; level <= top_level; ++level) {
        REQUIRE(level_counts.count(level) == 1);
        CHECK(level_counts[level] < level_counts[level - 1]);
    }
    CHECK(top_level <= stop.max_depth);

    // Single parent: every non-top node is someone's child exactly once.
    std::map<std::string, int> parent_count;
    for (const FeatureNode& node : tree.nodes) {
        for (const std::string& child : node.children) {
            const FeatureNode* c = tree.by_id(child);
            REQUIRE(c != nullptr);
            CHECK(c->level == node.level - 1);
            ++parent_count[child];
        }
    }
    const std::set<std::string> tops(tree.top_ids.begin(), tree.top_ids.end());
    CHECK(tops.size() == tree.top_ids.size());
    for (const FeatureNode& node : tree.nodes) {
        if (tops.count(node.id)) {
            CHECK(node.level == top_level);
            CHECK(parent_count.count(node.id) == 0);
        } else {
            CHECK(parent_count[node.id] == 1);
        }
    }
    CHECK(static_cast<std::size_t>(level_counts[top_level]) == tree.top_ids.size());

    // The stop rule never leaves fewer tops than min_top_count (or the whole
    // library when it is smaller).
    const std::size_t floor_tops =
        std::min<std::size_t>(static_cast<std::size_t>(stop.min_top_count), library.size());
    CHECK(tree.top_ids.size() >= floor_tops);
}

ArtifactLibrary random_library(std::mt19937_64& rng, std::size_t size) {
    static const char* kWords[] = {
        "server",  "editor",   "audio",    "video",   "network", "packet",  "database",
        "query",   "game",     "puzzle",   "backup",  "archive", "monitor", "metric",
        "mail",    "message",  "graph",    "table",   "shell",   "script",  "image",
        "filter",  "cloud",    "cluster",  "file",    "stream",  "index",   "search",
        "signal",  "matrix",   "keyboard", "printer", "driver",  "sensor",  "router",
        "cache",   "proxy",    "token",    "layout",  "render",
    };
    const std::size_t vocab = sizeof(kWords) / sizeof(kWords[0]);
    ArtifactLibrary library;
    for (std::size_t i = 0; i < size; ++i) {
        RawArtifact raw;
        raw.source_name = "synthetic";
        raw.raw_id = "raw-" + std::to_string(i);
        raw.name = std::string(kWords[rng() % vocab]) + " " + kWords[rng() % vocab] + " " +
                   std::to_string(i);
        const std::size_t words = 5 + rng() % 6;
        for (std::size_t w = 0; w < words; ++w) {
            if (w > 0) raw.description += " ";
            raw.description += kWords[rng() % vocab];
        }
        library.append(raw);
    }
    return library;
}

class ScriptedChat : public ChatProvider {
public:
    explicit ScriptedChat(std::vector<std::string> responses)
        : queue_(responses.begin(), responses.end()) {}
    std::string complete(const std::string&) override {
        if (queue_.empty()) return "";
        const std::string r = queue_.front();
        queue_.pop_front();
        return r;
    }

private:
    std::deque<std::string> queue_;
};

}  // namespace

TEST_CASE("the fixture library builds a deterministic multi-level tree") {
    const ArtifactLibrary library = fixture_library();
    REQUIRE(library.size() == 30);
    const SolutionConfig config = default_solution();

    const FeatureTree tree = build_tree(library, config);
    check_invariants(tree, library, config.stop);
    CHECK(tree.max_level() >= 1);  // the six families cluster into real parents
    CHECK(tree.leaf_count() == 30);
    CHECK(!tree.config_fingerprint.empty());

    const FeatureTree again = build_tree(library, config);
    CHECK(tree_to_json(again) == tree_to_json(tree));

    const TreeStats stats = tree_stats(tree);
    CHECK(stats.layers_with_leaves == tree.max_level() + 1);
    CHECK(stats.feature_layers == tree.max_level());
    CHECK(stats.node_count == static_cast<int>(tree.nodes.size()));
    CHECK(stats.feature_node_count == stats.node_count - 30);
}

TEST_CASE("randomized libraries keep every structural invariant") {
    std::mt19937_64 rng(98765);
    const ClusterAlgo algos[] = {ClusterAlgo::kmeans, ClusterAlgo::gmm,
                                 ClusterAlgo::hierarchical};
    const CnKind kinds[] = {CnKind::silhouette, CnKind::bic, CnKind::none};
    for (int round = 0; round < 8; ++round) {
        const std::size_t size = 10 + rng() % 51;
        const ArtifactLibrary library = random_library(rng, size);
        SolutionConfig config = default_solution();
        config.algo = algos[round % 3];
        config.cn.kind = kinds[round % 3];
        config.seed = 1000 + static_cast<std::uint64_t>(round);
        CAPTURE(round);
        CAPTURE(size);
        const FeatureTree tree = build_tree(library, config);
        check_invariants(tree, library, config.stop);
    }
}

TEST_CASE("tree json export/import round-trips byte-identically") {
    const ArtifactLibrary library = fixture_library();
    const FeatureTree tree = build_tree(library, default_solution());

    ftest::TempDir tmp("tree-roundtrip");
    const std::string path_a = tmp.file("a.json");
    const std::string path_b = tmp.file("b.json");
    export_tree(tree, TreeExportFormat::json, path_a);
    const FeatureTree reloaded = import_tree(path_a);
    export_tree(reloaded, TreeExportFormat::json, path_b);
    CHECK(ftest::read_file(path_a) == ftest::read_file(path_b));
    CHECK(tree_to_json(reloaded) == tree_to_json(tree));
    CHECK(reloaded.config_fingerprint == tree.config_fingerprint);
}

TEST_CASE("tree validation names the violated invariant") {
    const ArtifactLibrary library = fixture_library();
    const FeatureTree tree = build_tree(library, default_solution());
    const json good = tree_to_json(tree);
    REQUIRE_NOTHROW(tree_from_json(good));

    auto expect_schema = [](const json& doc, const char* needle) {
        try {
            tree_from_json(doc);
            FAIL_CHECK("expected a schema error mentioning '" << needle << "'");
        } catch (const error& e) {
            CHECK(e.code() == errc::schema);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    // A leaf stripped of its artifact mapping.
    json leaf_without_artifact = good;
    for (json& node : leaf_without_artifact["nodes"]) {
        if (node["level"] == 0) {
            node.erase("artifact_id");
            break;
        }
    }
    expect_schema(leaf_without_artifact, "leaf bijection");

    // The same node claimed by two parents.
    json two_parents = good;
    {
        std::string stolen;
        for (json& node : two_parents["nodes"]) {
            if (node["level"] != 0 && !stolen.empty() &&
                node["children"][0].get<std::string>() != stolen) {
                node["children"].push_back(stolen);
                break;
            }
            if (node["level"] != 0 && stolen.empty()) {
                stolen = node["children"][0].get<std::string>();
            }
        }
    }
    expect_schema(two_parents, "single parent");

    // A child id that exists nowhere.
    json dangling = good;
    for (json& node : dangling["nodes"]) {
        if (node["level"] != 0) {
            node["children"].push_back("no-such-node");
            break;
        }
    }
    expect_schema(dangling, "unknown child");

    json dup_top = good;
    dup_top["top_ids"].push_back(dup_top["top_ids"][0]);
    expect_schema(dup_top, "top");

    json bad_doc = json::object();
    CHECK_THROWS_AS(tree_from_json(bad_doc), error);
}

TEST_CASE("import rejects files that are not valid json") {
    ftest::TempDir tmp("tree-badfile");
    const std::string path = tmp.file("garbage.json");
    ftest::write_file(path, "{not json");
    try {
        import_tree(path);
        FAIL("expected a schema error");
    } catch (const error& e) {
        CHECK(e.code() == errc::schema);
    }
    CHECK_THROWS_AS(import_tree(tmp.file("missing.json")), error);
}

TEST_CASE("dot and markdown exports cover every node") {
    const ArtifactLibrary library = fixture_library();
    const FeatureTree tree = build_tree(library, default_solution());

    const std::string dot = tree_to_dot(tree);
    CHECK(dot.rfind("digraph", 0) == 0);
    std::size_t edges = 0;
    for (std::size_t pos = dot.find(" -> "); pos != std::string::npos;
         pos = dot.find(" -> ", pos + 4)) {
        ++edges;
    }
    CHECK(edges == tree.nodes.size() - tree.top_ids.size());
    for (const FeatureNode& node : tree.nodes) {
        CHECK(dot.find("\"" + node.id + "\"") != std::string::npos);
    }

    const std::string markdown = tree_to_markdown(tree);
    std::size_t lines = 0;
    for (char c : markdown) {
        if (c == '\n') ++lines;
    }
    CHECK(lines == tree.nodes.size());
    for (const std::string& top : tree.top_ids) {
        CHECK(markdown.find("- " + tree.by_id(top)->name) != std::string::npos);
    }
}

TEST_CASE("dot labels escape quotes and backslashes") {
    FeatureTree tree;
    FeatureNode leaf;
    leaf.id = "f0-x";
    leaf.name = "quote \" and slash \\";
    leaf.description = "d";
    leaf.level = 0;
    leaf.artifact_id = "x";
    FeatureNode top;
    top.id = "f1-p";
    top.name = "parent";
    top.description = "d";
    top.level = 1;
    top.children = {"f0-x"};
    tree.nodes = {leaf, top};
    tree.top_ids = {"f1-p"};
    tree.rebuild_index();

    const std::string dot = tree_to_dot(tree);
    CHECK(dot.find("quote \\\" and slash \\\\") != std::string::npos);
}

TEST_CASE("identical summaries still get unique node ids") {
    // Six artifacts in two obvious groups; the scripted summarizer answers
    // both clusters with the same feature name.
    ArtifactLibrary library;
    const char* specs[][2] = {
        {"Red One", "crimson scarlet ruby paint"},
        {"Red Two", "crimson ruby scarlet brush"},
        {"Red Three", "scarlet crimson ruby tint"},
        {"Blue One", "azure navy cobalt paint"},
        {"Blue Two", "navy azure cobalt brush"},
        {"Blue Three", "cobalt navy azure tint"},
    };
    for (const auto& spec : specs) {
        RawArtifact raw;
        raw.source_name = "s";
        raw.raw_id = spec[0];
        raw.name = spec[0];
        raw.description = spec[1];
        library.append(raw);
    }

    SolutionConfig config = default_solution();
    config.cn.k_min = 2;
    config.cn.k_max = 2;
    config.stop.min_top_count = 2;
    config.summarizer.kind = SummarizerKind::remote;
    config.summarizer.chat = std::make_shared<ScriptedChat>(std::vector<std::string>{
        "Same Name: first cluster summary", "Same Name: second cluster summary"});

    const FeatureTree tree = build_tree(library, config);
    REQUIRE(tree.top_ids.size() == 2);
    const FeatureNode* a = tree.by_id(tree.top_ids[0]);
    const FeatureNode* b = tree.by_id(tree.top_ids[1]);
    REQUIRE(a != nullptr);
    REQUIRE(b != nullptr);
    CHECK(a->name == "Same Name");
    CHECK(b->name == "Same Name");
    CHECK(a->id != b->id);
    CHECK(a->id == "f1-same-name");
    CHECK(b->id == "f1-same-name-2");
}

TEST_CASE("tiny and degenerate libraries") {
    std::mt19937_64 rng(5);
    const ArtifactLibrary tiny = random_library(rng, 2);
    const FeatureTree tree = build_tree(tiny, default_solution());
    // Nothing to cluster: the two leaves are the tops.
    CHECK(tree.nodes.size() == 2);
    CHECK(tree.top_ids.size() == 2);
    CHECK(tree.max_level() == 0);

    ArtifactLibrary one;
    RawArtifact raw;
    raw.source_name = "s";
    raw.raw_id = "only";
    raw.name = "Only";
    raw.description = "just one";
    one.append(raw);
    try {
        build_tree(one, default_solution());
        FAIL("expected an invalid-argument error");
    } catch (const error& e) {
        CHECK(e.code() == errc::invalid_argument);
    }
}

TEST_CASE("max depth limits how far the recursion climbs") {
    std::mt19937_64 rng(77);
    const ArtifactLibrary library = random_library(rng, 40);
    SolutionConfig config = default_solution();
    config.stop.max_depth = 1;
    const FeatureTree tree = build_tree(library, config);
    CHECK(tree.max_level() <= 1);
    check_invariants(tree, library, config.stop);
}
