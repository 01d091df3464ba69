#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "test_support.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

// Runs the CLI binary through the shell, capturing exit code and both streams.
RunResult run_cli(const ftest::TempDir& tmp, const std::string& args,
                  const std::string& env_prefix = "") {
    const std::string out_path = tmp.file("last_stdout.txt");
    const std::string err_path = tmp.file("last_stderr.txt");
    std::string command = env_prefix.empty() ? std::string() : env_prefix + " ";
    command += std::string(FTB_CLI_BIN) + " " + args + " >" + out_path + " 2>" + err_path;
    const int status = std::system(command.c_str());
    RunResult result;
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = ftest::read_file(out_path);
    result.err = ftest::read_file(err_path);
    return result;
}

std::string write_sources_file(const ftest::TempDir& tmp,
                               const std::vector<std::pair<std::string, std::string>>& sources) {
    json doc;
    doc["sources"] = json::array();
    for (const auto& [name, fixture] : sources)
        doc["sources"].push_back({{"name", name}, {"url", ftest::fixture_path(fixture)}});
    const std::string path = tmp.file("sources.json");
    ftest::write_file(path, doc.dump(2) + "\n");
    return path;
}

// Builds the bundled library's tree into <tmp>/<tag> and returns the tree path.
std::string build_fixture_tree(const ftest::TempDir& tmp, const std::string& tag) {
    const std::string out_dir = tmp.path() + "/" + tag;
    const RunResult r = run_cli(
        tmp, "build --library " + ftest::fixture_path("fixture_library.json") +
                 " --seed 42 --out " + out_dir);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    return out_dir + "/tree.json";
}

std::size_t count_of(const std::string& haystack, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + needle.size()))
        ++count;
    return count;
}

}  // namespace

TEST_CASE("help exits cleanly") {
    ftest::TempDir tmp("cli-help");
    const RunResult r = run_cli(tmp, "--help");
    CHECK(r.code == 0);
    CHECK(r.out.find("ingest") != std::string::npos);
    CHECK(r.out.find("matrix") != std::string::npos);
}

TEST_CASE("ingest builds the library and reports each source") {
    ftest::TempDir tmp("cli-ingest");
    const std::string sources = write_sources_file(tmp, {{"alpha", "comps_alpha.xml"},
                                                         {"beta", "comps_beta.xml"},
                                                         {"gamma", "comps_gamma.xml"},
                                                         {"delta", "comps_delta.xml"},
                                                         {"epsilon", "comps_epsilon.xml"}});
    const std::string out_dir = tmp.path() + "/out";
    const RunResult r = run_cli(tmp, "ingest --sources " + sources + " --out " + out_dir);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("source alpha: ok, 16 entries") != std::string::npos);
    CHECK(r.out.find("source epsilon: ok, 4 entries") != std::string::npos);
    CHECK(r.out.find("library: 26 artifacts") != std::string::npos);

    const json library = json::parse(ftest::read_file(out_dir + "/library.json"));
    CHECK(library["artifacts"].size() == 26);
    const json report = json::parse(ftest::read_file(out_dir + "/ingest_report.json"));
    CHECK(report["sources"].size() == 5);
}

TEST_CASE("ingest survives a broken source and signals the loss") {
    ftest::TempDir tmp("cli-ingest-partial");
    const std::string sources = write_sources_file(
        tmp, {{"alpha", "comps_alpha.xml"}, {"bogus", "no_such_file.xml"}});
    const std::string out_dir = tmp.path() + "/out";
    const RunResult r = run_cli(tmp, "ingest --sources " + sources + " --out " + out_dir);
    CHECK(r.code == 2);
    CHECK(r.out.find("source bogus: FAILED") != std::string::npos);
    CHECK(r.err.find("warning:") != std::string::npos);
    const json library = json::parse(ftest::read_file(out_dir + "/library.json"));
    CHECK(library["artifacts"].size() == 16);  // the good source still lands

    const std::string all_bad = write_sources_file(tmp, {{"bogus", "no_such_file.xml"}});
    const RunResult r2 =
        run_cli(tmp, "ingest --sources " + all_bad + " --out " + tmp.path() + "/out2");
    CHECK(r2.code == 1);
    CHECK(r2.err.find("error:") != std::string::npos);
}

TEST_CASE("two identically seeded builds write identical artifacts") {
    ftest::TempDir tmp("cli-build");
    const std::string library = ftest::fixture_path("fixture_library.json");
    const std::string base_args =
        "build --library " + library + " --seed 42 --export dot,markdown --out ";
    const RunResult first = run_cli(tmp, base_args + tmp.path() + "/a");
    REQUIRE_MESSAGE(first.code == 0, first.err);
    CHECK(first.out.find("silhouette:") != std::string::npos);
    const RunResult second = run_cli(tmp, base_args + tmp.path() + "/b");
    REQUIRE_MESSAGE(second.code == 0, second.err);

    const std::string tree_a = ftest::read_file(tmp.path() + "/a/tree.json");
    CHECK(tree_a == ftest::read_file(tmp.path() + "/b/tree.json"));
    CHECK(ftest::read_file(tmp.path() + "/a/metrics.json") ==
          ftest::read_file(tmp.path() + "/b/metrics.json"));

    // dot holds one edge per child relationship: every node except a top has
    // exactly one parent.
    const json tree = json::parse(tree_a);
    const std::size_t expected_edges = tree["nodes"].size() - tree["top_ids"].size();
    const std::string dot = ftest::read_file(tmp.path() + "/a/tree.dot");
    CHECK(dot.rfind("digraph", 0) == 0);
    CHECK(count_of(dot, " -> ") == expected_edges);
    CHECK(!ftest::read_file(tmp.path() + "/a/tree.md").empty());
}

TEST_CASE("build refuses an incompatible method pairing") {
    ftest::TempDir tmp("cli-build-bad");
    const RunResult r = run_cli(
        tmp, "build --library " + ftest::fixture_path("fixture_library.json") +
                 " --algo kmeans --cn bic --out " + tmp.path() + "/out");
    CHECK(r.code == 1);
    CHECK(r.err.find("kmeans+bic") != std::string::npos);
}

TEST_CASE("matrix writes all solutions as JSON and a table") {
    ftest::TempDir tmp("cli-matrix");
    // The bundled endpoint-free setup: remote embedders run against mock://.
    ftest::write_file(tmp.file("config.json"),
                      R"({"solution":{"embedder":{"kind":"tfidf","endpoint":"mock://"}}})");
    const std::string out_dir = tmp.path() + "/out";
    const RunResult r = run_cli(
        tmp, "matrix --library " + ftest::fixture_path("fixture_library.json") +
                 " --config " + tmp.file("config.json") + " --seed 42 --jobs 2 --out " +
                 out_dir);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("TF-IDF") != std::string::npos);

    const json report = json::parse(ftest::read_file(out_dir + "/matrix.json"));
    REQUIRE(report["rows"].size() == 24);
    for (const json& row : report["rows"]) CHECK(row["ok"].get<bool>());
    const std::string table = ftest::read_file(out_dir + "/matrix.txt");
    CHECK(table.find("text-embedding-ada-002") != std::string::npos);
}

TEST_CASE("eval meets the precision bar with the offline guide") {
    ftest::TempDir tmp("cli-eval");
    const std::string tree = build_fixture_tree(tmp, "tree");
    const std::string out_dir = tmp.path() + "/out";
    const RunResult r = run_cli(
        tmp, "eval --tree " + tree + " --dataset " + ftest::fixture_path("artsel_10.json") +
                 " --guide mock --out " + out_dir);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("samples: 10") != std::string::npos);
    CHECK(r.out.find("mean precision:") != std::string::npos);
    const json report = json::parse(ftest::read_file(out_dir + "/eval.json"));
    CHECK(report["mean_precision"].get<double>() >= 0.8);
}

TEST_CASE("a remote guide without credentials fails before any request") {
    ftest::TempDir tmp("cli-eval-remote");
    const std::string tree = build_fixture_tree(tmp, "tree");
    const std::string dataset = ftest::fixture_path("artsel_10.json");
    const std::string out_dir = tmp.path() + "/out";

    const RunResult no_key = run_cli(
        tmp, "eval --tree " + tree + " --dataset " + dataset + " --guide remote --out " +
                 out_dir,
        "env -u FTB_API_KEY FTB_ENDPOINT=http://127.0.0.1:9/v1");
    CHECK(no_key.code == 1);
    CHECK(no_key.err.find("FTB_API_KEY") != std::string::npos);
    CHECK(!std::filesystem::exists(out_dir + "/eval.json"));  // bailed before evaluating

    const RunResult no_endpoint = run_cli(
        tmp, "eval --tree " + tree + " --dataset " + dataset + " --guide remote --out " +
                 out_dir,
        "env -u FTB_API_KEY -u FTB_ENDPOINT");
    CHECK(no_endpoint.code == 1);
    CHECK(no_endpoint.err.find("no endpoint configured") != std::string::npos);
}

TEST_CASE("navigate prints a full outline when stdin is not a terminal") {
    ftest::TempDir tmp("cli-navigate");
    const std::string tree = build_fixture_tree(tmp, "tree");
    const std::string out_path = tmp.file("nav_stdout.txt");
    const std::string command = std::string(FTB_CLI_BIN) + " navigate --tree " + tree +
                                " </dev/null >" + out_path + " 2>" + tmp.file("nav_err.txt");
    const int status = std::system(command.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 0);
    const std::string outline = ftest::read_file(out_path);
    CHECK(outline.find("[sql-database]") != std::string::npos);
    const json doc = json::parse(ftest::read_file(tree));
    CHECK(count_of(outline, "\n") == doc["nodes"].size());
}
