#include "doctest.h"

#include <deque>
#include <set>

#include "core/errors.hpp"
#include "eval/artsel.hpp"
#include "eval/matrix.hpp"
#include "metrics/tree_metrics.hpp"
#include "test_support.hpp"

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

std::set<std::string> library_ids(const ArtifactLibrary& library) {
    std::set<std::string> ids;
    for (const Artifact& a : library.artifacts()) ids.insert(a.id);
    return ids;
}

class ScriptedChat : public ChatProvider {
public:
    explicit ScriptedChat(std::vector<std::string> responses)
        : queue_(responses.begin(), responses.end()) {}
    std::string complete(const std::string& prompt) override {
        prompts.push_back(prompt);
        if (queue_.empty()) return last_;
        last_ = queue_.front();
        queue_.pop_front();
        return last_;
    }
    std::vector<std::string> prompts;

private:
    std::deque<std::string> queue_;
    std::string last_;
};

}  // namespace

TEST_CASE("requirement datasets load and validate") {
    const ArtifactLibrary library = fixture_library();
    const auto samples = load_artsel(ftest::fixture_path("artsel_10.json"),
                                     library_ids(library));
    REQUIRE(samples.size() == 10);
    CHECK(samples[0].gold == std::vector<std::string>{"code-editor", "text-editor"});
    CHECK(samples[1].gold == std::vector<std::string>{"sql-database"});
    CHECK(!samples[9].requirement.empty());

    ftest::TempDir tmp("artsel-bad");

    const std::string unknown = tmp.file("unknown.json");
    ftest::write_file(unknown,
                      R"({"samples":[{"requirement":"r","gold":["made-up-id"]}]})");
    try {
        load_artsel(unknown, library_ids(library));
        FAIL("expected an unresolved gold id error");
    } catch (const error& e) {
        CHECK(e.code() == errc::unresolved_gold_id);
        CHECK(std::string(e.what()).find("made-up-id") != std::string::npos);
    }

    const std::string empty_req = tmp.file("empty_req.json");
    ftest::write_file(empty_req, R"({"samples":[{"requirement":"  ","gold":["sql-database"]}]})");
    try {
        load_artsel(empty_req, library_ids(library));
        FAIL("expected a schema error");
    } catch (const error& e) {
        CHECK(e.code() == errc::schema);
    }

    const std::string dup_gold = tmp.file("dup_gold.json");
    ftest::write_file(dup_gold,
                      R"({"samples":[{"requirement":"r","gold":["sql-database","sql-database"]}]})");
    CHECK_THROWS_AS(load_artsel(dup_gold, library_ids(library)), error);

    const std::string not_json = tmp.file("not_json.json");
    ftest::write_file(not_json, "nope");
    CHECK_THROWS_AS(load_artsel(not_json, library_ids(library)), error);

    CHECK_THROWS_AS(load_artsel(tmp.file("missing.json"), library_ids(library)), error);
}

TEST_CASE("an exact-description requirement surfaces its own artifact first") {
    const ArtifactLibrary library = fixture_library();
    const FeatureTree tree = build_tree(library, default_solution());

    RecommendOptions opts;  // embedding_mock traversal, beam 3
    const std::vector<std::string> ranked = recommend_with_tree(
        "Database engine storing relational tables with query planner and transactions.",
        tree, opts);
    REQUIRE(!ranked.empty());
    CHECK(ranked[0] == "sql-database");

    const std::vector<std::string> flat = recommend_flat(
        "Database engine storing relational tables with query planner and transactions.",
        library, opts);
    REQUIRE(!flat.empty());
    CHECK(flat[0] == "sql-database");
    CHECK(flat.size() == library.size());

    RecommendOptions top3 = opts;
    top3.top_n = 3;
    CHECK(recommend_flat("audio playback application", library, top3).size() == 3);
}

TEST_CASE("a wide beam reproduces the whole-tree leaf ranking") {
    const ArtifactLibrary library = fixture_library();
    const FeatureTree tree = build_tree(library, default_solution());

    RecommendOptions wide;
    wide.beam = 1000;  // no internal path is ever pruned
    RecommendOptions whole;
    whole.mode = GuideMode::whole_tree;

    for (const char* requirement :
         {"editor for plain text with spell checking",
          "packet load balancer distributing network sessions",
          "game collection offering card matches"}) {
        CAPTURE(requirement);
        const auto traversed = recommend_with_tree(requirement, tree, wide);
        const auto ranked_all = recommend_with_tree(requirement, tree, whole);
        CHECK(traversed == ranked_all);
        CHECK(traversed.size() == library.size());
    }
}

TEST_CASE("recommendation options are validated") {
    const ArtifactLibrary library = fixture_library();
    const FeatureTree tree = build_tree(library, default_solution());

    RecommendOptions bad;
    bad.beam = 0;
    CHECK_THROWS_AS(recommend_with_tree("anything", tree, bad), error);

    FeatureTree empty;
    CHECK_THROWS_AS(recommend_with_tree("anything", empty, RecommendOptions{}), error);
}

TEST_CASE("tree-guided evaluation beats the flat baseline on the paraphrase set") {
    const ArtifactLibrary library = fixture_library();
    const FeatureTree tree = build_tree(library, default_solution());
    const auto dataset = load_artsel(ftest::fixture_path("artsel_10.json"),
                                     library_ids(library));

    RecommendOptions opts;
    const EvalReport report = evaluate(dataset, tree, opts);
    REQUIRE(report.samples.size() == 10);
    CHECK(report.mean_precision >= 0.8);

    double flat_mean = 0.0;
    for (const ArtSelSample& sample : dataset) {
        const auto ranked = recommend_flat(sample.requirement, library, opts);
        const std::size_t k = std::min(sample.gold.size(), ranked.size());
        flat_mean += precision({ranked.begin(), ranked.begin() + k},
                               {sample.gold.begin(), sample.gold.end()});
    }
    flat_mean /= static_cast<double>(dataset.size());
    CHECK(report.mean_precision >= flat_mean);

    for (const SampleResult& sample : report.samples) {
        CHECK(sample.recommended.size() == sample.gold.size());
        CHECK(sample.precision >= 0.0);
        CHECK(sample.precision <= 1.0);
    }

    const json doc = eval_report_json(report);
    CHECK(doc.contains("mean_precision"));
    REQUIRE(doc.contains("samples"));
    CHECK(doc["samples"].size() == 10);
    CHECK(doc.dump().find("wall_time") == std::string::npos);  // console-only
}

TEST_CASE("remote guide follows choice answers and survives garbage") {
    const ArtifactLibrary library = fixture_library();
    const FeatureTree tree = build_tree(library, default_solution());
    const std::string requirement =
        "audio playback application decoding music albums with playlist queues";

    RecommendOptions mock_opts;
    const auto baseline = recommend_with_tree(requirement, tree, mock_opts);

    // Unparseable answers at every step: the guide falls back to embedding
    // scores, reproducing the offline result.
    RecommendOptions remote;
    remote.guide = GuideKind::remote_llm;
    remote.provider.max_retries = 1;
    auto garbage = std::make_shared<ScriptedChat>(std::vector<std::string>{"n/a"});
    remote.chat = garbage;
    const auto fallback = recommend_with_tree(requirement, tree, remote);
    CHECK(fallback == baseline);
    CHECK(!garbage->prompts.empty());
    CHECK(garbage->prompts[0].find("Requirement: " + requirement) != std::string::npos);

    // Always answering "1" walks the first-listed branch; the result is a
    // valid leaf ranking even when the choices are bad.
    remote.chat = std::make_shared<ScriptedChat>(std::vector<std::string>{"1"});
    const auto steered = recommend_with_tree(requirement, tree, remote);
    CHECK(!steered.empty());
    for (const std::string& id : steered) {
        CHECK(library.by_id(id) != nullptr);
    }
}

TEST_CASE("whole-tree remote mode parses bracketed ids with a ranked fill") {
    const ArtifactLibrary library = fixture_library();
    const FeatureTree tree = build_tree(library, default_solution());
    const std::string requirement = "editor for markup documents with live preview";

    RecommendOptions remote;
    remote.guide = GuideKind::remote_llm;
    remote.mode = GuideMode::whole_tree;
    remote.provider.max_retries = 1;

    auto chat = std::make_shared<ScriptedChat>(
        std::vector<std::string>{"Best matches: [markup-editor] then [text-editor]"});
    remote.chat = chat;
    const auto ranked = recommend_with_tree(requirement, tree, remote);
    REQUIRE(ranked.size() == library.size());
    CHECK(ranked[0] == "markup-editor");
    CHECK(ranked[1] == "text-editor");
    REQUIRE(!chat->prompts.empty());
    CHECK(chat->prompts[0].find("[markup-editor]") != std::string::npos);

    // Garbage falls back to the embedding ranking over all leaves.
    RecommendOptions mock_whole;
    mock_whole.mode = GuideMode::whole_tree;
    const auto baseline = recommend_with_tree(requirement, tree, mock_whole);
    remote.chat = std::make_shared<ScriptedChat>(std::vector<std::string>{"no ids here"});
    CHECK(recommend_with_tree(requirement, tree, remote) == baseline);
}

TEST_CASE("the solution matrix runs clean and reruns identically") {
    const ArtifactLibrary library = fixture_library();
    SolutionConfig base = default_solution();
    base.embedder.endpoint = "mock://";

    const MatrixReport report = run_matrix(library, base, 2);
    REQUIRE(report.rows.size() == 24);

    std::map<std::string, std::map<std::string, int>> per_embedder;
    for (const MatrixRow& row : report.rows) {
        CAPTURE(row.embedder);
        CAPTURE(row.algo);
        CAPTURE(row.cn);
        CHECK(row.ok);
        CHECK(row.error.empty());
        CHECK(row.layers >= 1);
        CHECK(row.nodes >= 30);
        CHECK(row.wall_time_s >= 0.0);
        ++per_embedder[row.embedder][row.algo];
    }
    REQUIRE(per_embedder.size() == 4);
    for (const auto& [embedder, algos] : per_embedder) {
        CAPTURE(embedder);
        CHECK(algos.at("kmeans") == 2);
        CHECK(algos.at("gmm") == 3);
        CHECK(algos.at("hierarchical") == 1);
    }

    const MatrixReport rerun = run_matrix(library, base, 1);  // jobs must not matter
    CHECK(matrix_report_json(rerun, false) == matrix_report_json(report, false));

    const json with_time = matrix_report_json(report, true);
    CHECK(with_time["rows"][0].contains("wall_time_s"));
    const json without_time = matrix_report_json(report, false);
    CHECK(!without_time["rows"][0].contains("wall_time_s"));

    const std::string table = matrix_report_table(report);
    CHECK(table.find("TF-IDF") != std::string::npos);
    CHECK(table.find("text-embedding-ada-002") != std::string::npos);
    CHECK(table.find("wall") == std::string::npos);
    std::size_t lines = 0;
    for (char c : table) {
        if (c == '\n') ++lines;
    }
    CHECK(lines >= 25);  // header + separator + 24 rows
}
