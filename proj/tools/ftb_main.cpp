// Command-line front end. Talks to the core exclusively through the C API in
// ftb/ftb.h; configuration is assembled here as JSON and handed over as text.

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ftb/ftb.h"
#include "json.hpp"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------- utilities

int fail(const std::string& what) {
    std::fprintf(stderr, "error: %s: %s\n", what.c_str(), ftb_last_error());
    return 1;
}

int fail_config(const std::string& message) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    return 1;
}

std::string take_string(char* s) {
    std::string out = s ? s : "";
    ftb_string_free(s);
    return out;
}

std::optional<json> read_json_file(const std::string& path, std::string& error) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        error = "cannot open " + path;
        return std::nullopt;
    }
    try {
        return json::parse(in);
    } catch (const std::exception& e) {
        error = path + ": " + e.what();
        return std::nullopt;
    }
}

bool write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << text;
    return static_cast<bool>(out);
}

std::string env_or_empty(const char* name) {
    const char* value = std::getenv(name);
    return value ? value : "";
}

std::string first_line_of(const std::string& text) {
    const std::size_t pos = text.find('\n');
    return pos == std::string::npos ? text : text.substr(0, pos);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// -------------------------------------------------------- config assembly

// Everything shared by the subcommands: a config file mirroring the run
// configuration, plus flags that win over it.
struct CommonArgs {
    std::string config_path;
    std::string cache_dir;
    std::string out_dir = ".";
    std::uint64_t seed = 42;
    std::size_t jobs = 1;

    CLI::Option* opt_cache = nullptr;
    CLI::Option* opt_out = nullptr;
    CLI::Option* opt_seed = nullptr;
    CLI::Option* opt_jobs = nullptr;
};

void add_common_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path,
                    "JSON run configuration; flags override its fields");
    args.opt_cache =
        cmd->add_option("--cache-dir", args.cache_dir, "Provider response cache directory");
    args.opt_out = cmd->add_option("--out", args.out_dir, "Output directory");
    args.opt_seed = cmd->add_option("--seed", args.seed, "Random seed (default 42)");
    args.opt_jobs = cmd->add_option("--jobs", args.jobs, "Worker thread bound");
}

// Loads --config (if any) and folds the common flags in; returns false and
// sets rc on failure.
bool load_run_config(const CommonArgs& args, json& cfg, int& rc) {
    cfg = json::object();
    if (!args.config_path.empty()) {
        std::string error;
        std::optional<json> doc = read_json_file(args.config_path, error);
        if (!doc) {
            rc = fail_config("config: " + error);
            return false;
        }
        if (!doc->is_object()) {
            rc = fail_config("config: " + args.config_path + ": root must be an object");
            return false;
        }
        cfg = std::move(*doc);
    }
    if (args.opt_cache->count() > 0) cfg["cache_dir"] = args.cache_dir;
    if (args.opt_out->count() > 0) cfg["output_dir"] = args.out_dir;
    return true;
}

std::string cfg_string(const json& cfg, const char* key, const std::string& fallback) {
    if (cfg.contains(key) && cfg[key].is_string()) return cfg[key].get<std::string>();
    return fallback;
}

bool ensure_dir(const std::string& dir, int& rc) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        rc = fail_config("cannot create directory " + dir + ": " + ec.message());
        return false;
    }
    return true;
}

// Points a remote component at the environment's endpoint/key and enforces
// that a key is present before anything touches the network. mock:// needs
// no credentials.
bool finalize_remote(json& obj, const std::string& what, const std::string& cache_dir,
                     const char* cache_file, int& rc) {
    std::string endpoint =
        obj.contains("endpoint") && obj["endpoint"].is_string()
            ? obj["endpoint"].get<std::string>()
            : "";
    if (endpoint.empty()) endpoint = env_or_empty("FTB_ENDPOINT");
    if (endpoint.empty()) {
        rc = fail_config(what + ": no endpoint configured; set FTB_ENDPOINT or the "
                               "config file's endpoint field");
        return false;
    }
    obj["endpoint"] = endpoint;

    std::string api_key = obj.contains("api_key") && obj["api_key"].is_string()
                              ? obj["api_key"].get<std::string>()
                              : "";
    if (api_key.empty()) api_key = env_or_empty("FTB_API_KEY");
    const bool mock = endpoint.rfind("mock://", 0) == 0;
    if (api_key.empty() && !mock) {
        rc = fail_config(what + ": FTB_API_KEY is not set");
        return false;
    }
    if (!api_key.empty()) obj["api_key"] = api_key;

    if (!obj.contains("cache_path") && !cache_dir.empty())
        obj["cache_path"] = (fs::path(cache_dir) / cache_file).string();
    return true;
}

// --------------------------------------------------------------- ingest

struct IngestArgs {
    CommonArgs common;
    std::string sources_path;
    std::string judge = "deterministic";
    double threshold = 0.9;
    double timeout_s = 30.0;
    int retries = 2;

    CLI::Option* opt_judge = nullptr;
    CLI::Option* opt_threshold = nullptr;
    CLI::Option* opt_timeout = nullptr;
    CLI::Option* opt_retries = nullptr;
};

int run_ingest(const IngestArgs& args) {
    int rc = 0;
    json cfg;
    if (!load_run_config(args.common, cfg, rc)) return rc;

    json build = json::object();
    if (cfg.contains("sources")) build["sources"] = cfg["sources"];
    if (!args.sources_path.empty()) {
        std::string error;
        std::optional<json> doc = read_json_file(args.sources_path, error);
        if (!doc) return fail_config("sources: " + error);
        if (doc->is_object() && doc->contains("sources"))
            build["sources"] = (*doc)["sources"];
        else if (doc->is_array())
            build["sources"] = *doc;
        else
            return fail_config("sources: " + args.sources_path +
                               " must be {\"sources\": [...]} or a plain array");
    }
    if (!build.contains("sources"))
        return fail_config("no sources given; pass --sources or a config file");

    const std::string cache_dir = cfg_string(cfg, "cache_dir", "");
    if (!cache_dir.empty() && !ensure_dir(cache_dir, rc)) return rc;

    json judge = cfg.contains("judge") && cfg["judge"].is_object() ? cfg["judge"]
                                                                   : json::object();
    if (args.opt_judge->count() > 0) judge["kind"] = args.judge;
    if (args.opt_threshold->count() > 0) judge["threshold"] = args.threshold;
    const std::string judge_kind = cfg_string(judge, "kind", "deterministic");
    if (judge_kind == "remote" &&
        !finalize_remote(judge, "remote judge", cache_dir, "chat.jsonl", rc))
        return rc;
    if (!judge.empty()) build["judge"] = judge;

    if (args.opt_timeout->count() > 0 || cfg.contains("timeout_s"))
        build["timeout_s"] = args.opt_timeout->count() > 0
                                 ? json(args.timeout_s)
                                 : cfg["timeout_s"];
    if (args.opt_retries->count() > 0 || cfg.contains("retries"))
        build["retries"] =
            args.opt_retries->count() > 0 ? json(args.retries) : cfg["retries"];
    if (args.common.opt_jobs->count() > 0)
        build["jobs"] = args.common.jobs;
    else if (cfg.contains("jobs"))
        build["jobs"] = cfg["jobs"];

    const std::string out_dir = cfg_string(cfg, "output_dir", args.common.out_dir);
    if (!ensure_dir(out_dir, rc)) return rc;

    ftb_library* library = nullptr;
    char* report_text = nullptr;
    const ftb_status status =
        ftb_library_build(build.dump().c_str(), &library, &report_text);
    const std::string report = take_string(report_text);

    if (!report.empty()) {
        const std::string report_path = (fs::path(out_dir) / "ingest_report.json").string();
        if (!write_text_file(report_path, report))
            std::fprintf(stderr, "warning: could not write %s\n", report_path.c_str());
        try {
            const json parsed = json::parse(report);
            for (const json& source : parsed["sources"]) {
                if (source.value("ok", false))
                    std::printf("source %s: ok, %llu entries\n",
                                source.value("name", "?").c_str(),
                                static_cast<unsigned long long>(
                                    source.value("parsed_count", 0u)));
                else
                    std::printf("source %s: FAILED (%s)\n",
                                source.value("name", "?").c_str(),
                                source.value("error", "?").c_str());
            }
        } catch (const std::exception&) {
            // report stays on disk even if unprintable
        }
    }

    if (status != FTB_OK && status != FTB_ERROR_PARTIAL) return fail("ingest");

    const std::string library_path = (fs::path(out_dir) / "library.json").string();
    if (ftb_library_save(library, library_path.c_str()) != FTB_OK) {
        ftb_library_free(library);
        return fail("saving library");
    }
    std::printf("library: %llu artifacts -> %s\n",
                static_cast<unsigned long long>(ftb_library_size(library)),
                library_path.c_str());
    ftb_library_free(library);

    if (status == FTB_ERROR_PARTIAL) {
        std::fprintf(stderr, "warning: %s\n", ftb_last_error());
        return 2;
    }
    return 0;
}

// ---------------------------------------------------------------- build

struct SolutionArgs {
    std::string embedder;
    std::string algo;
    std::string cn;
    int k_min = 2;
    int k_max = 0;
    double cut = 0.5;
    std::string summarizer;
    int min_top = 4;
    int max_depth = 6;

    CLI::Option* opt_embedder = nullptr;
    CLI::Option* opt_algo = nullptr;
    CLI::Option* opt_cn = nullptr;
    CLI::Option* opt_k_min = nullptr;
    CLI::Option* opt_k_max = nullptr;
    CLI::Option* opt_cut = nullptr;
    CLI::Option* opt_summarizer = nullptr;
    CLI::Option* opt_min_top = nullptr;
    CLI::Option* opt_max_depth = nullptr;
};

void add_solution_flags(CLI::App* cmd, SolutionArgs& args) {
    args.opt_embedder = cmd->add_option(
        "--embedder", args.embedder, "Embedding technique: tfidf or remote:<model>");
    args.opt_algo =
        cmd->add_option("--algo", args.algo, "Cluster algorithm: kmeans, gmm, hierarchical")
            ->check(CLI::IsMember({"kmeans", "gmm", "hierarchical"}));
    args.opt_cn = cmd->add_option("--cn", args.cn,
                                  "Cluster-count method: elbow, silhouette, bic, none")
                      ->check(CLI::IsMember({"elbow", "silhouette", "bic", "none"}));
    args.opt_k_min = cmd->add_option("--k-min", args.k_min, "Smallest k considered");
    args.opt_k_max =
        cmd->add_option("--k-max", args.k_max, "Largest k considered (0 = automatic)");
    args.opt_cut = cmd->add_option("--cut", args.cut,
                                   "Hierarchical dendrogram cut fraction in (0,1]");
    args.opt_summarizer =
        cmd->add_option("--summarizer", args.summarizer, "Summarizer: mock or remote")
            ->check(CLI::IsMember({"mock", "remote"}));
    args.opt_min_top =
        cmd->add_option("--min-top", args.min_top, "Minimum top-level feature count");
    args.opt_max_depth = cmd->add_option("--max-depth", args.max_depth, "Maximum level");
}

// Merges config-file solution + flags into the JSON the C API accepts.
bool assemble_solution(const SolutionArgs& args, const CommonArgs& common,
                       const json& cfg, json& solution, int& rc) {
    solution = cfg.contains("solution") && cfg["solution"].is_object()
                   ? cfg["solution"]
                   : json::object();
    const std::string cache_dir = cfg_string(cfg, "cache_dir", "");
    if (!cache_dir.empty() && !ensure_dir(cache_dir, rc)) return false;

    if (args.opt_embedder->count() > 0) {
        json embedder = json::object();
        if (args.embedder == "tfidf") {
            embedder["kind"] = "tfidf";
        } else if (args.embedder.rfind("remote:", 0) == 0) {
            embedder["kind"] = "remote";
            embedder["model"] = args.embedder.substr(7);
        } else {
            rc = fail_config("--embedder must be tfidf or remote:<model>");
            return false;
        }
        solution["embedder"] = embedder;
    }
    if (solution.contains("embedder") && solution["embedder"].is_object() &&
        solution["embedder"].value("kind", "tfidf") == "remote" &&
        !finalize_remote(solution["embedder"], "remote embedder", cache_dir,
                         "embeddings.jsonl", rc))
        return false;

    if (args.opt_algo->count() > 0) solution["algo"] = args.algo;
    if (args.opt_cn->count() > 0 || args.opt_k_min->count() > 0 ||
        args.opt_k_max->count() > 0) {
        json cn = solution.contains("cn") && solution["cn"].is_object()
                      ? solution["cn"]
                      : json::object();
        if (args.opt_cn->count() > 0) cn["kind"] = args.cn;
        if (args.opt_k_min->count() > 0) cn["k_min"] = args.k_min;
        if (args.opt_k_max->count() > 0) cn["k_max"] = args.k_max;
        solution["cn"] = cn;
    }
    if (args.opt_cut->count() > 0) solution["cut_fraction"] = args.cut;

    if (args.opt_summarizer->count() > 0) {
        json summarizer = solution.contains("summarizer") &&
                                  solution["summarizer"].is_object()
                              ? solution["summarizer"]
                              : json::object();
        summarizer["kind"] = args.summarizer;
        solution["summarizer"] = summarizer;
    }
    if (solution.contains("summarizer") && solution["summarizer"].is_object() &&
        solution["summarizer"].value("kind", "mock") == "remote" &&
        !finalize_remote(solution["summarizer"], "remote summarizer", cache_dir,
                         "chat.jsonl", rc))
        return false;

    if (args.opt_min_top->count() > 0) solution["min_top"] = args.min_top;
    if (args.opt_max_depth->count() > 0) solution["max_depth"] = args.max_depth;
    if (common.opt_seed->count() > 0 || !solution.contains("seed"))
        solution["seed"] = common.seed;
    if (common.opt_jobs->count() > 0) solution["jobs"] = common.jobs;
    return true;
}

struct BuildArgs {
    CommonArgs common;
    SolutionArgs solution;
    std::string library_path;
    std::vector<std::string> exports;
};

int run_build(const BuildArgs& args) {
    int rc = 0;
    json cfg;
    if (!load_run_config(args.common, cfg, rc)) return rc;
    json solution;
    if (!assemble_solution(args.solution, args.common, cfg, solution, rc)) return rc;

    const std::string out_dir = cfg_string(cfg, "output_dir", args.common.out_dir);
    if (!ensure_dir(out_dir, rc)) return rc;

    ftb_library* library = nullptr;
    if (ftb_library_load(args.library_path.c_str(), &library) != FTB_OK)
        return fail("loading library " + args.library_path);
    std::printf("library: %llu artifacts\n",
                static_cast<unsigned long long>(ftb_library_size(library)));

    ftb_tree* tree = nullptr;
    if (ftb_tree_build(library, solution.dump().c_str(), &tree) != FTB_OK) {
        ftb_library_free(library);
        return fail("building tree");
    }
    ftb_library_free(library);

    char* stats_text = nullptr;
    if (ftb_tree_stats_json(tree, &stats_text) == FTB_OK) {
        try {
            const json stats = json::parse(take_string(stats_text));
            std::printf("tree: %d layers (%d feature layers), %d nodes (%d features), "
                        "%llu top features\n",
                        stats.value("layers_with_leaves", 0),
                        stats.value("feature_layers", 0), stats.value("node_count", 0),
                        stats.value("feature_node_count", 0),
                        static_cast<unsigned long long>(stats.value("top_count", 0u)));
        } catch (const std::exception&) {
        }
    } else {
        ftb_string_free(stats_text);
    }

    std::vector<std::string> exports = args.exports;
    if (exports.empty()) exports.push_back("json");
    if (std::find(exports.begin(), exports.end(), "json") == exports.end())
        exports.insert(exports.begin(), "json");
    const std::map<std::string, std::string> suffix = {
        {"json", "tree.json"}, {"dot", "tree.dot"}, {"markdown", "tree.md"}};
    for (const std::string& format : exports) {
        auto it = suffix.find(format);
        if (it == suffix.end()) {
            ftb_tree_free(tree);
            return fail_config("--export must be json, dot, or markdown");
        }
        const std::string path = (fs::path(out_dir) / it->second).string();
        if (ftb_tree_export(tree, format.c_str(), path.c_str()) != FTB_OK) {
            ftb_tree_free(tree);
            return fail("exporting " + path);
        }
        std::printf("wrote %s\n", path.c_str());
    }

    const json embedder = solution.contains("embedder") ? solution["embedder"]
                                                        : json{{"kind", "tfidf"}};
    char* metrics_text = nullptr;
    if (ftb_tree_metrics_json(tree, embedder.dump().c_str(), &metrics_text) != FTB_OK) {
        ftb_tree_free(tree);
        return fail("scoring tree");
    }
    ftb_tree_free(tree);
    const std::string metrics = take_string(metrics_text);
    const std::string metrics_path = (fs::path(out_dir) / "metrics.json").string();
    if (!write_text_file(metrics_path, metrics)) return fail_config("cannot write " + metrics_path);
    try {
        const json parsed = json::parse(metrics);
        std::printf("silhouette: %.4f  coverage surrogate: %.4f\n",
                    parsed.value("silhouette", 0.0),
                    parsed.value("gvalue_surrogate", 0.0));
    } catch (const std::exception&) {
    }
    std::printf("wrote %s\n", metrics_path.c_str());
    return 0;
}

// ---------------------------------------------------------------- matrix

int run_matrix(const BuildArgs& args) {
    int rc = 0;
    json cfg;
    if (!load_run_config(args.common, cfg, rc)) return rc;
    json solution;
    if (!assemble_solution(args.solution, args.common, cfg, solution, rc)) return rc;

    const std::string out_dir = cfg_string(cfg, "output_dir", args.common.out_dir);
    if (!ensure_dir(out_dir, rc)) return rc;

    ftb_library* library = nullptr;
    if (ftb_library_load(args.library_path.c_str(), &library) != FTB_OK)
        return fail("loading library " + args.library_path);

    char* json_text = nullptr;
    char* table_text = nullptr;
    const ftb_status status = ftb_matrix_run(library, solution.dump().c_str(),
                                             args.common.jobs, &json_text, &table_text);
    ftb_library_free(library);
    if (status != FTB_OK) return fail("running matrix");

    const std::string report = take_string(json_text);
    const std::string table = take_string(table_text);
    const std::string json_path = (fs::path(out_dir) / "matrix.json").string();
    const std::string table_path = (fs::path(out_dir) / "matrix.txt").string();
    if (!write_text_file(json_path, report)) return fail_config("cannot write " + json_path);
    if (!write_text_file(table_path, table)) return fail_config("cannot write " + table_path);
    std::fputs(table.c_str(), stdout);
    std::printf("wrote %s\nwrote %s\n", json_path.c_str(), table_path.c_str());
    return 0;
}

// ------------------------------------------------------------------ eval

struct EvalArgs {
    CommonArgs common;
    std::string tree_path;
    std::string dataset_path;
    std::string guide = "mock";
    std::string mode = "traverse";
    int beam = 3;

    CLI::Option* opt_guide = nullptr;
    CLI::Option* opt_mode = nullptr;
    CLI::Option* opt_beam = nullptr;
};

bool assemble_guide(const EvalArgs& args, const json& cfg, json& options, int& rc) {
    options = cfg.contains("guide") && cfg["guide"].is_object() ? cfg["guide"]
                                                                : json::object();
    if (args.opt_guide->count() > 0) options["guide"] = args.guide;
    if (args.opt_mode->count() > 0) options["mode"] = args.mode;
    if (args.opt_beam->count() > 0) options["beam"] = args.beam;
    if (options.value("guide", "mock") == "remote") {
        json provider = options.contains("provider") && options["provider"].is_object()
                            ? options["provider"]
                            : json::object();
        const std::string cache_dir = cfg_string(cfg, "cache_dir", "");
        if (!cache_dir.empty() && !ensure_dir(cache_dir, rc)) return false;
        if (!finalize_remote(provider, "remote guide", cache_dir, "chat.jsonl", rc))
            return false;
        options["provider"] = provider;
    }
    return true;
}

int run_eval(const EvalArgs& args) {
    int rc = 0;
    json cfg;
    if (!load_run_config(args.common, cfg, rc)) return rc;
    json options;
    if (!assemble_guide(args, cfg, options, rc)) return rc;

    const std::string out_dir = cfg_string(cfg, "output_dir", args.common.out_dir);
    if (!ensure_dir(out_dir, rc)) return rc;

    ftb_tree* tree = nullptr;
    if (ftb_tree_load(args.tree_path.c_str(), &tree) != FTB_OK)
        return fail("loading tree " + args.tree_path);

    char* report_text = nullptr;
    double wall_time_s = 0.0;
    const ftb_status status = ftb_eval_run(tree, args.dataset_path.c_str(),
                                           options.dump().c_str(), &report_text,
                                           &wall_time_s);
    ftb_tree_free(tree);
    if (status != FTB_OK) return fail("evaluating " + args.dataset_path);

    const std::string report = take_string(report_text);
    const std::string report_path = (fs::path(out_dir) / "eval.json").string();
    if (!write_text_file(report_path, report))
        return fail_config("cannot write " + report_path);
    try {
        const json parsed = json::parse(report);
        std::printf("samples: %llu  mean precision: %.4f  (%.2fs)\n",
                    static_cast<unsigned long long>(parsed["samples"].size()),
                    parsed.value("mean_precision", 0.0), wall_time_s);
    } catch (const std::exception&) {
    }
    std::printf("wrote %s\n", report_path.c_str());
    return 0;
}

// -------------------------------------------------------------- navigate

struct NavNode {
    std::string id;
    std::string name;
    std::string description;
    std::string artifact_id;
    std::string parent;  // empty at the top
    int level = 0;
    std::vector<std::string> children;
};

struct NavTree {
    std::map<std::string, NavNode> nodes;
    std::vector<std::string> tops;
};

bool parse_nav_tree(const std::string& text, NavTree& tree, std::string& error) {
    try {
        const json doc = json::parse(text);
        for (const json& item : doc["nodes"]) {
            NavNode node;
            node.id = item.value("id", "");
            node.name = item.value("name", "");
            node.description = item.value("description", "");
            node.artifact_id = item.value("artifact_id", "");
            node.level = item.value("level", 0);
            for (const json& child : item["children"])
                node.children.push_back(child.get<std::string>());
            tree.nodes[node.id] = std::move(node);
        }
        for (const json& id : doc["top_ids"]) tree.tops.push_back(id.get<std::string>());
        for (auto& [id, node] : tree.nodes)
            for (const std::string& child : node.children)
                tree.nodes[child].parent = id;
        return true;
    } catch (const std::exception& e) {
        error = e.what();
        return false;
    }
}

void print_outline(const NavTree& tree) {
    int top_level = 0;
    for (const std::string& id : tree.tops)
        top_level = std::max(top_level, tree.nodes.at(id).level);
    auto render = [&](auto&& self, const std::string& id) -> void {
        const NavNode& node = tree.nodes.at(id);
        for (int i = 0; i < top_level - node.level; ++i) std::printf("  ");
        if (node.children.empty())
            std::printf("- %s [%s]\n", node.name.c_str(), node.artifact_id.c_str());
        else
            std::printf("- %s\n", node.name.c_str());
        for (const std::string& child : node.children) self(self, child);
    };
    for (const std::string& id : tree.tops) render(render, id);
}

std::string path_of(const NavTree& tree, const std::string& id) {
    std::vector<const NavNode*> chain;
    for (std::string cursor = id; !cursor.empty();
         cursor = tree.nodes.at(cursor).parent)
        chain.push_back(&tree.nodes.at(cursor));
    std::string out;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        if (!out.empty()) out += " > ";
        out += (*it)->name;
    }
    return out;
}

// Provenance lines for one artifact id, from the optional library JSON.
std::vector<std::string> provenance_of(const json& library, const std::string& artifact_id) {
    std::vector<std::string> out;
    if (!library.is_object() || !library.contains("artifacts")) return out;
    for (const json& artifact : library["artifacts"]) {
        if (artifact.value("id", "") != artifact_id) continue;
        for (const json& entry : artifact["provenance"])
            out.push_back(entry.value("source", "?") + " (" +
                          entry.value("raw_id", "?") + ")");
        break;
    }
    return out;
}

void print_leaf(const NavTree& tree, const NavNode& node, const json& library,
                bool library_loaded) {
    std::printf("\n%s\n", path_of(tree, node.id).c_str());
    std::printf("artifact id: %s\n", node.artifact_id.c_str());
    std::printf("description: %s\n", node.description.c_str());
    if (!library_loaded) {
        std::printf("provenance: (library not loaded)\n");
        return;
    }
    const std::vector<std::string> lines = provenance_of(library, node.artifact_id);
    if (lines.empty()) {
        std::printf("provenance: (not found in library)\n");
        return;
    }
    std::printf("provenance:\n");
    for (const std::string& line : lines) std::printf("  - %s\n", line.c_str());
}

void print_children(const NavTree& tree, const std::vector<std::string>& children) {
    for (std::size_t i = 0; i < children.size(); ++i) {
        const NavNode& child = tree.nodes.at(children[i]);
        const std::string summary = first_line_of(child.description);
        std::printf("%2zu. %s%s — %s\n", i + 1, child.name.c_str(),
                    child.children.empty() ? " (artifact)" : "", summary.c_str());
    }
}

int run_navigate(const std::string& tree_path, const std::string& library_path) {
    ftb_tree* tree_handle = nullptr;
    if (ftb_tree_load(tree_path.c_str(), &tree_handle) != FTB_OK)
        return fail("loading tree " + tree_path);
    char* tree_text = nullptr;
    if (ftb_tree_to_json(tree_handle, &tree_text) != FTB_OK) {
        ftb_tree_free(tree_handle);
        return fail("reading tree");
    }
    ftb_tree_free(tree_handle);

    NavTree tree;
    std::string error;
    if (!parse_nav_tree(take_string(tree_text), tree, error))
        return fail_config("tree JSON: " + error);

    json library;
    bool library_loaded = false;
    if (!library_path.empty()) {
        ftb_library* library_handle = nullptr;
        if (ftb_library_load(library_path.c_str(), &library_handle) != FTB_OK)
            return fail("loading library " + library_path);
        char* library_text = nullptr;
        if (ftb_library_to_json(library_handle, &library_text) != FTB_OK) {
            ftb_library_free(library_handle);
            return fail("reading library");
        }
        ftb_library_free(library_handle);
        try {
            library = json::parse(take_string(library_text));
            library_loaded = true;
        } catch (const std::exception& e) {
            return fail_config(std::string("library JSON: ") + e.what());
        }
    }

    if (!isatty(STDIN_FILENO)) {
        print_outline(tree);
        return 0;
    }

    std::printf("feature tree navigator — number selects, u = up, s <text> = search, "
                "q = quit\n");
    std::string current;  // empty = virtual root above the top features
    while (true) {
        const std::vector<std::string>& children =
            current.empty() ? tree.tops : tree.nodes.at(current).children;
        if (current.empty())
            std::printf("\n(top) %zu features\n", tree.tops.size());
        else
            std::printf("\n%s\n", path_of(tree, current).c_str());
        print_children(tree, children);

        std::printf("> ");
        std::fflush(stdout);
        std::string line;
        if (!std::getline(std::cin, line)) break;
        // trim
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
            line.pop_back();
        std::size_t start = 0;
        while (start < line.size() &&
               std::isspace(static_cast<unsigned char>(line[start])))
            ++start;
        line = line.substr(start);

        if (line == "q") break;
        if (line.empty()) continue;
        if (line == "u") {
            if (current.empty()) {
                std::printf("already at the top\n");
                continue;
            }
            current = tree.nodes.at(current).parent;
            continue;
        }
        if (line[0] == 's' && (line.size() == 1 || line[1] == ' ')) {
            const std::string needle = lower(line.size() > 2 ? line.substr(2) : "");
            if (needle.empty()) {
                std::printf("usage: s <text>\n");
                continue;
            }
            std::size_t hits = 0;
            for (const auto& [id, node] : tree.nodes) {
                if (lower(node.name).find(needle) == std::string::npos &&
                    lower(node.description).find(needle) == std::string::npos)
                    continue;
                std::printf("  %s\n", path_of(tree, id).c_str());
                if (++hits == 20) {
                    std::printf("  ... (more matches not shown)\n");
                    break;
                }
            }
            if (hits == 0) std::printf("no match for '%s'\n", needle.c_str());
            continue;
        }
        char* end = nullptr;
        const long choice = std::strtol(line.c_str(), &end, 10);
        if (end == line.c_str() || *end != '\0' || choice < 1 ||
            static_cast<std::size_t>(choice) > children.size()) {
            std::printf("enter a child number (1-%zu), u, s <text>, or q\n",
                        children.size());
            continue;
        }
        const std::string& picked = children[static_cast<std::size_t>(choice) - 1];
        const NavNode& node = tree.nodes.at(picked);
        if (node.children.empty())
            print_leaf(tree, node, library, library_loaded);
        else
            current = picked;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feature-tree pipeline: ingest repository group metadata, build and "
                 "score multi-level feature trees, and evaluate requirement-based "
                 "artifact recommendation"};
    app.require_subcommand(1);

    IngestArgs ingest;
    CLI::App* cmd_ingest =
        app.add_subcommand("ingest", "Fetch sources and build the artifact library");
    cmd_ingest->add_option("--sources", ingest.sources_path,
                           "JSON file listing metadata sources");
    ingest.opt_judge = cmd_ingest
                           ->add_option("--judge", ingest.judge,
                                        "Duplicate judge: deterministic or remote")
                           ->check(CLI::IsMember({"deterministic", "remote"}));
    ingest.opt_threshold = cmd_ingest->add_option(
        "--threshold", ingest.threshold, "Description similarity threshold in [0,1]");
    ingest.opt_timeout =
        cmd_ingest->add_option("--timeout", ingest.timeout_s, "Fetch timeout seconds");
    ingest.opt_retries =
        cmd_ingest->add_option("--retries", ingest.retries, "Fetch retry count");
    add_common_flags(cmd_ingest, ingest.common);

    BuildArgs build;
    CLI::App* cmd_build =
        app.add_subcommand("build", "Build a feature tree over a library");
    cmd_build->add_option("--library", build.library_path, "Artifact library JSON")
        ->required();
    cmd_build
        ->add_option("--export", build.exports,
                     "Tree export formats: json, dot, markdown (repeatable)")
        ->delimiter(',');
    add_solution_flags(cmd_build, build.solution);
    add_common_flags(cmd_build, build.common);

    BuildArgs matrix;
    CLI::App* cmd_matrix = app.add_subcommand(
        "matrix", "Build and score all 24 canonical solutions over a library");
    cmd_matrix->add_option("--library", matrix.library_path, "Artifact library JSON")
        ->required();
    add_solution_flags(cmd_matrix, matrix.solution);
    add_common_flags(cmd_matrix, matrix.common);

    EvalArgs eval;
    CLI::App* cmd_eval = app.add_subcommand(
        "eval", "Evaluate tree-guided recommendation against a dataset");
    cmd_eval->add_option("--tree", eval.tree_path, "Tree JSON")->required();
    cmd_eval->add_option("--dataset", eval.dataset_path, "Requirement dataset JSON")
        ->required();
    eval.opt_guide = cmd_eval
                         ->add_option("--guide", eval.guide,
                                      "Recommendation guide: mock or remote")
                         ->check(CLI::IsMember({"mock", "remote"}));
    eval.opt_mode = cmd_eval
                        ->add_option("--mode", eval.mode,
                                     "Guide mode: traverse or whole_tree")
                        ->check(CLI::IsMember({"traverse", "whole_tree"}));
    eval.opt_beam = cmd_eval->add_option("--beam", eval.beam, "Traversal beam width");
    add_common_flags(cmd_eval, eval.common);

    std::string nav_tree_path;
    std::string nav_library_path;
    CLI::App* cmd_navigate =
        app.add_subcommand("navigate", "Explore a built tree interactively");
    cmd_navigate->add_option("--tree", nav_tree_path, "Tree JSON")->required();
    cmd_navigate->add_option("--library", nav_library_path,
                             "Artifact library JSON for leaf provenance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (cmd_ingest->parsed()) return run_ingest(ingest);
    if (cmd_build->parsed()) return run_build(build);
    if (cmd_matrix->parsed()) return run_matrix(matrix);
    if (cmd_eval->parsed()) return run_eval(eval);
    if (cmd_navigate->parsed()) return run_navigate(nav_tree_path, nav_library_path);
    return 1;
}
