// Release gate: every shipping requirement checked end to end, one line per
// criterion. Budgets and tolerances are pinned here, not configurable.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cluster/gmm.hpp"
#include "cluster/kmeans.hpp"
#include "cluster/select_k.hpp"
#include "cluster/silhouette.hpp"
#include "core/embedding.hpp"
#include "eval/artsel.hpp"
#include "eval/matrix.hpp"
#include "ingest/library_build.hpp"
#include "metrics/tree_metrics.hpp"
#include "tree/tree.hpp"

namespace {

using namespace ftb;
using Clock = std::chrono::steady_clock;

struct failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& detail) {
    if (!ok) throw failure(detail);
}

std::string fixture(const std::string& name) {
    return std::string(FTB_FIXTURE_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Scratch directory for subprocess runs and round-trip files.
class Scratch {
public:
    explicit Scratch(const std::string& tag) {
        path_ = (std::filesystem::temp_directory_path() /
                 ("ftb-accept-" + tag + "-" + std::to_string(::getpid())))
                    .string();
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~Scratch() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return path_ + "/" + name; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

EmbeddingMatrix matrix_of(std::vector<double> values, std::size_t dim) {
    EmbeddingMatrix X;
    X.dim = dim;
    X.values = std::move(values);
    for (std::size_t i = 0; i < X.values.size() / dim; ++i)
        X.row_ids.push_back(std::to_string(i));
    return X;
}

// Gaussian blobs, one block of rows per center.
EmbeddingMatrix make_blobs(const std::vector<std::vector<double>>& centers,
                           std::size_t per_blob, double sd, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sd);
    std::vector<double> values;
    for (const std::vector<double>& center : centers)
        for (std::size_t i = 0; i < per_blob; ++i)
            for (double coordinate : center) values.push_back(coordinate + noise(rng));
    return matrix_of(std::move(values), centers[0].size());
}

// ----------------------------------------------------- criterion bodies

// k-means SSE never rises across Lloyd iterations; EM log-likelihood never
// falls beyond 1e-8. 100 seeds each on the same 200x8 blob data.
void check_cluster_monotonicity() {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    std::vector<std::vector<double>> centers(4, std::vector<double>(8));
    for (auto& center : centers)
        for (double& c : center) c = coord(rng);
    const EmbeddingMatrix X = make_blobs(centers, 50, 1.5, 778);
    require(X.rows() == 200 && X.dim == 8, "blob generator is off");

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto [model, assignment] = kmeans(X, 6, seed);
        require(!model.sse_history.empty(), "no SSE trace recorded");
        for (std::size_t i = 1; i < model.sse_history.size(); ++i) {
            const double prev = model.sse_history[i - 1];
            const double next = model.sse_history[i];
            require(next <= prev + 1e-9 * std::max(1.0, std::abs(prev)) + 1e-12,
                    "SSE rose at seed " + std::to_string(seed) + " step " +
                        std::to_string(i) + ": " + std::to_string(prev) + " -> " +
                        std::to_string(next));
        }
    }
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto [model, assignment] = gmm_em(X, 4, seed);
        require(!model.ll_history.empty(), "no likelihood trace recorded");
        for (std::size_t i = 1; i < model.ll_history.size(); ++i)
            require(model.ll_history[i] >= model.ll_history[i - 1] - 1e-8,
                    "log-likelihood fell at seed " + std::to_string(seed) + " step " +
                        std::to_string(i));
    }
}

// Independent quadratic silhouette, kept deliberately naive.
std::vector<double> reference_silhouette(const EmbeddingMatrix& X,
                                         const ClusterAssignment& assignment) {
    const std::size_t n = X.rows();
    std::vector<std::size_t> sizes(assignment.k, 0);
    for (int label : assignment.labels) sizes[static_cast<std::size_t>(label)]++;

    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t own = static_cast<std::size_t>(assignment.labels[i]);
        if (sizes[own] <= 1) {
            out[i] = 0.0;
            continue;
        }
        std::vector<double> sums(assignment.k, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sums[static_cast<std::size_t>(assignment.labels[j])] +=
                euclidean_distance(X.row(i), X.row(j));
        }
        const double a = sums[own] / static_cast<double>(sizes[own] - 1);
        double b = 0.0;
        bool first = true;
        for (int c = 0; c < assignment.k; ++c) {
            if (static_cast<std::size_t>(c) == own) continue;
            const double mean = sums[c] / static_cast<double>(sizes[c]);
            if (first || mean < b) b = mean;
            first = false;
        }
        const double denom = std::max(a, b);
        out[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return out;
}

void check_silhouette_oracle() {
    std::mt19937_64 rng(4242);
    for (int instance = 0; instance < 50; ++instance) {
        const int k = 2 + static_cast<int>(rng() % 4);  // 2..5
        const std::size_t n =
            static_cast<std::size_t>(k) + 1 + rng() % (50 - static_cast<std::size_t>(k));
        const std::size_t d = 2 + rng() % 5;

        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<double> values;
        ClusterAssignment assignment;
        assignment.k = k;
        for (std::size_t i = 0; i < n; ++i) {
            // first k points pin one member per cluster so none is empty
            const int label = i < static_cast<std::size_t>(k)
                                  ? static_cast<int>(i)
                                  : static_cast<int>(rng() % static_cast<std::uint64_t>(k));
            assignment.labels.push_back(label);
            for (std::size_t dim = 0; dim < d; ++dim)
                values.push_back(label * 5.0 + noise(rng));
        }
        const EmbeddingMatrix X = matrix_of(std::move(values), d);

        const std::vector<double> got = silhouette_samples(X, assignment);
        const std::vector<double> want = reference_silhouette(X, assignment);
        require(got.size() == want.size(), "sample count mismatch");
        for (std::size_t i = 0; i < got.size(); ++i)
            require(got[i] == want[i],
                    "instance " + std::to_string(instance) + " sample " +
                        std::to_string(i) + " differs: " + std::to_string(got[i]) +
                        " vs " + std::to_string(want[i]));
    }
}

void check_model_selection() {
    int bic_hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        // three diagonal Gaussians with distinct spreads, far apart in 4-D
        std::mt19937_64 rng(5000 + seed);
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<double> values;
        const double spread[3] = {0.5, 0.7, 0.9};
        for (int blob = 0; blob < 3; ++blob)
            for (int i = 0; i < 40; ++i)
                for (int dim = 0; dim < 4; ++dim)
                    values.push_back(blob * 8.0 + spread[blob] * noise(rng));
        const EmbeddingMatrix X = matrix_of(std::move(values), 4);
        if (select_k_bic(X, ClusterAlgo::gmm, {CnKind::bic, 2, 6}, seed) == 3) ++bic_hits;
    }
    require(bic_hits >= 95,
            "BIC found k=3 in only " + std::to_string(bic_hits) + "/100 runs");

    int silhouette_hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(9000 + seed);
        std::normal_distribution<double> noise(0.0, 0.6);
        std::vector<double> values;
        for (int blob = 0; blob < 2; ++blob)
            for (int i = 0; i < 30; ++i)
                for (int dim = 0; dim < 3; ++dim) values.push_back(blob * 8.0 + noise(rng));
        const EmbeddingMatrix X = matrix_of(std::move(values), 3);
        if (select_k_silhouette(X, ClusterAlgo::kmeans, {CnKind::silhouette, 2, 6},
                                seed) == 2)
            ++silhouette_hits;
    }
    require(silhouette_hits >= 95, "silhouette found k=2 in only " +
                                       std::to_string(silhouette_hits) + "/100 runs");

    // knee of a curve with one sharp drop: 100 -> 20 then nearly flat
    const std::size_t knee = elbow_knee_index({2, 3, 4, 5}, {100.0, 20.0, 18.0, 16.0});
    require(knee == 1, "elbow picked index " + std::to_string(knee));
}

void check_matrix_structure() {
    const ArtifactLibrary library = ArtifactLibrary::load(fixture("fixture_library.json"));
    SolutionConfig base;
    base.embedder.endpoint = "mock://";  // remote embedders run offline
    base.seed = 42;

    const MatrixReport report = run_matrix(library, base, 2);
    require(report.rows.size() == 24,
            "expected 24 rows, got " + std::to_string(report.rows.size()));

    std::map<std::string, std::map<std::string, int>> algos_per_embedder;
    for (const MatrixRow& row : report.rows) {
        require(row.ok, row.embedder + "/" + row.algo + "/" + row.cn +
                            " failed: " + row.error);
        ++algos_per_embedder[row.embedder][row.algo];
    }
    require(algos_per_embedder.size() == 4,
            "expected 4 embedders, got " + std::to_string(algos_per_embedder.size()));
    for (const auto& [embedder, counts] : algos_per_embedder) {
        const auto count = [&](const char* algo) {
            auto it = counts.find(algo);
            return it == counts.end() ? 0 : it->second;
        };
        require(count("kmeans") == 2 && count("gmm") == 3 && count("hierarchical") == 1,
                embedder + " has an off-pattern method mix");
    }
}

ArtifactLibrary random_library(std::mt19937_64& rng, std::size_t n) {
    static const std::vector<std::string> kWords = {
        "editor",  "server",   "daemon",  "planner", "mixer",   "router",  "indexer",
        "backup",  "monitor",  "tracer",  "builder", "scanner", "archive", "cache",
        "queue",   "terminal", "display", "network", "storage", "audio",   "packet",
        "table",   "graph",    "stream",  "batch",   "metric",  "window",  "filter",
        "parser",  "compiler", "runtime", "kernel",  "socket",  "shell",   "widget",
        "sensor",  "cluster",  "bridge",  "ledger",  "journal"};
    auto word = [&]() { return kWords[rng() % kWords.size()]; };

    ArtifactLibrary library;
    for (std::size_t i = 0; i < n; ++i) {
        RawArtifact raw;
        raw.source_name = "synthetic";
        raw.raw_id = "raw-" + std::to_string(i);
        raw.name = word() + " " + word() + " " + std::to_string(i);
        std::string description;
        const std::size_t len = 6 + rng() % 7;
        for (std::size_t w = 0; w < len; ++w) {
            if (w > 0) description += " ";
            description += word();
        }
        raw.description = description;
        library.append(raw);
    }
    return library;
}

void check_tree_shape(const FeatureTree& tree, const ArtifactLibrary& library,
                      const SolutionConfig& config, const std::string& where) {
    std::set<std::string> ids;
    std::set<std::string> leaf_artifacts;
    std::map<std::string, int> parent_count;
    std::map<std::string, const FeatureNode*> by_id;
    for (const FeatureNode& node : tree.nodes) {
        require(ids.insert(node.id).second, where + ": duplicate node id " + node.id);
        by_id[node.id] = &node;
        if (node.level == 0) {
            require(!node.artifact_id.empty() && node.children.empty(),
                    where + ": malformed leaf " + node.id);
            require(leaf_artifacts.insert(node.artifact_id).second,
                    where + ": artifact appears on two leaves");
        } else {
            require(node.artifact_id.empty() && !node.children.empty(),
                    where + ": malformed feature node " + node.id);
        }
    }

    // leaves are exactly the library
    require(leaf_artifacts.size() == library.size(), where + ": leaf count off");
    for (const Artifact& artifact : library.artifacts())
        require(leaf_artifacts.count(artifact.id) == 1,
                where + ": artifact " + artifact.id + " missing from the leaves");

    for (const FeatureNode& node : tree.nodes)
        for (const std::string& child_id : node.children) {
            auto it = by_id.find(child_id);
            require(it != by_id.end(), where + ": unknown child " + child_id);
            require(it->second->level < node.level,
                    where + ": child level does not drop under " + node.id);
            ++parent_count[child_id];
        }

    const std::set<std::string> tops(tree.top_ids.begin(), tree.top_ids.end());
    require(tops.size() == tree.top_ids.size(), where + ": duplicate top id");
    for (const FeatureNode& node : tree.nodes) {
        const int parents = parent_count.count(node.id) ? parent_count.at(node.id) : 0;
        if (tops.count(node.id))
            require(parents == 0, where + ": top node " + node.id + " has a parent");
        else
            require(parents == 1, where + ": node " + node.id + " has " +
                                      std::to_string(parents) + " parents");
    }

    require(library.size() < 4 || tree.top_ids.size() >= 4,
            where + ": only " + std::to_string(tree.top_ids.size()) + " top features");
    require(tree.max_level() <= config.stop.max_depth, where + ": tree too deep");
}

void check_tree_invariants() {
    Scratch scratch("trees");
    std::mt19937_64 rng(2026);
    for (int round = 0; round < 20; ++round) {
        const std::size_t n = 10 + rng() % 51;  // 10..60
        const ArtifactLibrary library = random_library(rng, n);

        SolutionConfig config;
        config.seed = 1000 + static_cast<std::uint64_t>(round);
        switch (round % 3) {
            case 0:
                config.algo = ClusterAlgo::kmeans;
                config.cn.kind = CnKind::silhouette;
                break;
            case 1:
                config.algo = ClusterAlgo::gmm;
                config.cn.kind = CnKind::bic;
                break;
            default:
                config.algo = ClusterAlgo::hierarchical;
                config.cn.kind = CnKind::none;
                break;
        }

        const std::string where = "round " + std::to_string(round) + " (n=" +
                                  std::to_string(n) + ", " +
                                  cluster_algo_name(config.algo) + ")";
        const FeatureTree tree = build_tree(library, config);
        check_tree_shape(tree, library, config, where);

        const std::string first = scratch.file("a.json");
        const std::string second = scratch.file("b.json");
        export_tree(tree, TreeExportFormat::json, first);
        const FeatureTree reloaded = import_tree(first);
        export_tree(reloaded, TreeExportFormat::json, second);
        require(read_file(first) == read_file(second),
                where + ": JSON round-trip changed bytes");
    }
}

// Runs the CLI and returns elapsed seconds; throws on a non-zero exit.
double timed_cli(const std::string& args, const std::string& log_path) {
    const std::string command =
        std::string(FTB_CLI_BIN) + " " + args + " >" + log_path + " 2>&1";
    const auto start = Clock::now();
    const int status = std::system(command.c_str());
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    require(WIFEXITED(status) && WEXITSTATUS(status) == 0,
            "command failed (" + args + "): " + read_file(log_path));
    return elapsed;
}

void check_build_determinism() {
    Scratch scratch("determinism");
    const std::string base = "build --library " + fixture("fixture_library.json") +
                             " --seed 42 --out " + scratch.path();
    const double first = timed_cli(base + "/a", scratch.file("a.log"));
    require(first < 10.0, "first run took " + std::to_string(first) + "s");
    const double second = timed_cli(base + "/b", scratch.file("b.log"));
    require(second < 10.0, "second run took " + std::to_string(second) + "s");

    require(read_file(scratch.path() + "/a/tree.json") ==
                read_file(scratch.path() + "/b/tree.json"),
            "tree JSON differs between identical runs");
    require(read_file(scratch.path() + "/a/metrics.json") ==
                read_file(scratch.path() + "/b/metrics.json"),
            "metric report differs between identical runs");
}

void check_ingestion() {
    const std::vector<std::pair<std::string, std::string>> names = {
        {"alpha", "comps_alpha.xml"},
        {"beta", "comps_beta.xml"},
        {"gamma", "comps_gamma.xml"},
        {"delta", "comps_delta.xml"},
        {"epsilon", "comps_epsilon.xml"}};
    std::vector<RepoSource> sources;
    for (const auto& [name, file] : names)
        sources.push_back({name, "", fixture(file), MetadataFormat::comps_xml});

    ExistsJudge judge;
    BuildReport report = build_library(sources, judge);
    require(report.all_ok(), "a bundled source failed to parse");

    const std::map<std::string, std::size_t> expected = {
        {"alpha", 16}, {"beta", 9}, {"gamma", 5}, {"delta", 7}, {"epsilon", 4}};
    for (const SourceStatus& status : report.sources)
        require(status.parsed_count == expected.at(status.source_name),
                status.source_name + " parsed " + std::to_string(status.parsed_count) +
                    " entries, expected " +
                    std::to_string(expected.at(status.source_name)));
    require(report.library.size() == 26,
            "library has " + std::to_string(report.library.size()) +
                " artifacts, expected 26");

    // replaying every recorded sighting must change nothing; iterate a
    // snapshot because the merge target is the live library
    const json before = report.library.to_json();
    const std::vector<Artifact> snapshot = report.library.artifacts();
    for (const Artifact& artifact : snapshot) {
        for (const Provenance& provenance : artifact.provenance) {
            RawArtifact raw{provenance.source, provenance.raw_id, artifact.name,
                            artifact.description};
            const std::size_t appended =
                merge_raw_artifacts(report.library, {raw}, provenance.source, judge);
            require(appended == 0, "re-merge appended " + artifact.id + " again");
        }
    }
    require(report.library.to_json() == before, "re-merge mutated the library");
}

void check_recommendation() {
    const ArtifactLibrary library = ArtifactLibrary::load(fixture("fixture_library.json"));
    SolutionConfig config;
    config.algo = ClusterAlgo::kmeans;
    config.cn.kind = CnKind::silhouette;
    config.seed = 42;
    const FeatureTree tree = build_tree(library, config);

    std::set<std::string> ids;
    for (const Artifact& artifact : library.artifacts()) ids.insert(artifact.id);
    const std::vector<ArtSelSample> dataset = load_artsel(fixture("artsel_10.json"), ids);

    const RecommendOptions opts;  // offline guide, beam traversal
    const EvalReport report = evaluate(dataset, tree, opts);
    require(report.mean_precision >= 0.8,
            "tree-guided precision " + std::to_string(report.mean_precision) + " < 0.8");

    double flat_sum = 0.0;
    for (const ArtSelSample& sample : dataset) {
        const std::vector<std::string> ranked =
            recommend_flat(sample.requirement, library, opts);
        const std::size_t k = std::min(sample.gold.size(), ranked.size());
        flat_sum += precision(std::set<std::string>(ranked.begin(), ranked.begin() + k),
                              std::set<std::string>(sample.gold.begin(), sample.gold.end()));
    }
    const double flat_mean = flat_sum / static_cast<double>(dataset.size());
    require(report.mean_precision >= flat_mean,
            "tree-guided " + std::to_string(report.mean_precision) +
                " fell below the flat baseline " + std::to_string(flat_mean));
}

void check_tfidf_arithmetic() {
    const EmbeddingMatrix X = tfidf_fit_transform({"a b", "a c"});
    require(X.rows() == 2 && X.dim == 3, "unexpected matrix shape");

    // worked by hand: idf(a) = ln(3/3)+1 = 1, idf(b) = idf(c) = ln(3/2)+1
    const double idf_a = 1.0;
    const double idf_bc = std::log(3.0 / 2.0) + 1.0;
    const double norm = std::sqrt(0.25 * idf_a * idf_a + 0.25 * idf_bc * idf_bc);
    const double expected[2][3] = {
        {0.5 * idf_a / norm, 0.5 * idf_bc / norm, 0.0},
        {0.5 * idf_a / norm, 0.0, 0.5 * idf_bc / norm},
    };
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            require(std::abs(X.row(i)[j] - expected[i][j]) <= 1e-9,
                    "weight (" + std::to_string(i) + "," + std::to_string(j) +
                        ") = " + std::to_string(X.row(i)[j]) + ", expected " +
                        std::to_string(expected[i][j]));
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<void()> body;
    };
    const std::vector<Criterion> criteria = {
        {"cluster-monotonicity", 30.0, check_cluster_monotonicity},
        {"silhouette-oracle", 10.0, check_silhouette_oracle},
        {"model-selection", 60.0, check_model_selection},
        {"matrix-structure", 120.0, check_matrix_structure},
        {"tree-invariants", 60.0, check_tree_invariants},
        {"build-determinism", 30.0, check_build_determinism},
        {"ingestion-counts", 60.0, check_ingestion},
        {"recommendation-precision", 10.0, check_recommendation},
        {"tfidf-arithmetic", 10.0, check_tfidf_arithmetic},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        try {
            const auto start = Clock::now();
            criterion.body();
            const double elapsed =
                std::chrono::duration<double>(Clock::now() - start).count();
            if (elapsed > criterion.budget_s)
                throw failure("passed but took " + std::to_string(elapsed) +
                              "s, budget " + std::to_string(criterion.budget_s) + "s");
            std::printf("PASS %s (%.2fs)\n", criterion.name, elapsed);
        } catch (const std::exception& e) {
            ++failures;
            std::printf("FAIL %s: %s\n", criterion.name, e.what());
        }
        std::fflush(stdout);
    }
    return failures;
}
