#include "ftb/ftb.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>

#include "core/errors.hpp"
#include "core/json.hpp"
#include "eval/artsel.hpp"
#include "eval/matrix.hpp"
#include "ingest/library_build.hpp"
#include "metrics/tree_metrics.hpp"
#include "tree/solution.hpp"
#include "tree/tree.hpp"

struct ftb_library {
    ftb::ArtifactLibrary impl;
};

struct ftb_tree {
    ftb::FeatureTree impl;
};

namespace {

thread_local std::string g_last_error;

ftb_status status_of(ftb::errc code) {
    switch (code) {
        case ftb::errc::invalid_argument:
        case ftb::errc::invalid_k:
        case ftb::errc::invalid_range:
        case ftb::errc::incompatible:
        case ftb::errc::unsupported_format:
            return FTB_ERROR_INVALID;
        case ftb::errc::io:
            return FTB_ERROR_IO;
        case ftb::errc::schema:
        case ftb::errc::malformed_metadata:
        case ftb::errc::malformed_summary:
        case ftb::errc::unresolved_gold_id:
            return FTB_ERROR_SCHEMA;
        case ftb::errc::provider:
        case ftb::errc::network:
        case ftb::errc::http_status:
        case ftb::errc::timeout:
        case ftb::errc::dimension_mismatch:
            return FTB_ERROR_PROVIDER;
        default:
            return FTB_ERROR;
    }
}

template <typename F>
ftb_status guarded(F&& body) {
    try {
        return body();
    } catch (const ftb::error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FTB_ERROR;
    } catch (...) {
        g_last_error = "unknown failure";
        return FTB_ERROR;
    }
}

ftb_status invalid(const std::string& message) {
    g_last_error = message;
    return FTB_ERROR_INVALID;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ftb::json parse_json_text(const char* text, const char* what) {
    try {
        return ftb::json::parse(text);
    } catch (const std::exception& e) {
        ftb::raise(ftb::errc::schema,
                   std::string(what) + ": not valid JSON: " + e.what());
    }
}

template <typename T>
T field_or(const ftb::json& obj, const std::string& where, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const std::exception&) {
        ftb::raise(ftb::errc::schema,
                   "config: bad value for '" + std::string(key) + "' in " + where);
    }
}

void check_keys(const ftb::json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known)
            ftb::raise(ftb::errc::schema,
                       "config: unknown key '" + it.key() + "' in " + where);
    }
}

void provider_from_json(const ftb::json& obj, const std::string& where,
                        ftb::ProviderConfig& provider) {
    check_keys(obj, where,
               {"endpoint", "model", "api_key", "temperature", "max_retries",
                "timeout_s", "cache_path"});
    provider.endpoint = field_or<std::string>(obj, where, "endpoint", provider.endpoint);
    provider.model = field_or<std::string>(obj, where, "model", provider.model);
    provider.api_key = field_or<std::string>(obj, where, "api_key", provider.api_key);
    provider.temperature =
        field_or<double>(obj, where, "temperature", provider.temperature);
    provider.max_retries =
        field_or<int>(obj, where, "max_retries", provider.max_retries);
    provider.timeout_s = field_or<double>(obj, where, "timeout_s", provider.timeout_s);
    provider.cache_path =
        field_or<std::string>(obj, where, "cache_path", provider.cache_path);
}

std::vector<ftb::RepoSource> sources_from_json(const ftb::json& doc) {
    if (!doc.contains("sources") || !doc["sources"].is_array() ||
        doc["sources"].empty())
        ftb::raise(ftb::errc::schema, "config: 'sources' must be a non-empty array");
    std::vector<ftb::RepoSource> sources;
    for (const ftb::json& item : doc["sources"]) {
        if (!item.is_object())
            ftb::raise(ftb::errc::schema, "config: every source must be an object");
        check_keys(item, "source", {"name", "version", "url", "format"});
        ftb::RepoSource source;
        source.name = field_or<std::string>(item, "source", "name", "");
        if (source.name.empty())
            ftb::raise(ftb::errc::schema, "config: source needs a non-empty 'name'");
        source.version = field_or<std::string>(item, "source", "version", "");
        source.metadata_url = field_or<std::string>(item, "source", "url", "");
        if (source.metadata_url.empty())
            ftb::raise(ftb::errc::schema,
                       "config: source '" + source.name + "' needs a 'url'");
        source.format = ftb::metadata_format_from_name(
            field_or<std::string>(item, "source", "format", "comps_xml"));
        sources.push_back(std::move(source));
    }
    return sources;
}

ftb::ExistsJudge judge_from_json(const ftb::json& doc) {
    ftb::ExistsJudge judge;
    if (!doc.contains("judge")) return judge;
    const ftb::json& obj = doc["judge"];
    if (!obj.is_object())
        ftb::raise(ftb::errc::schema, "config: 'judge' must be an object");
    check_keys(obj, "judge",
               {"kind", "threshold", "max_library", "endpoint", "model", "api_key",
                "cache_path", "max_retries", "timeout_s"});
    const std::string kind = field_or<std::string>(obj, "judge", "kind", "deterministic");
    if (kind == "deterministic")
        judge.kind = ftb::JudgeKind::deterministic;
    else if (kind == "remote")
        judge.kind = ftb::JudgeKind::remote_llm;
    else
        ftb::raise(ftb::errc::schema,
                   "config: judge kind must be 'deterministic' or 'remote', got '" +
                       kind + "'");
    judge.similarity_threshold =
        field_or<double>(obj, "judge", "threshold", judge.similarity_threshold);
    judge.max_library =
        field_or<std::size_t>(obj, "judge", "max_library", judge.max_library);
    judge.provider.endpoint =
        field_or<std::string>(obj, "judge", "endpoint", judge.provider.endpoint);
    judge.provider.model =
        field_or<std::string>(obj, "judge", "model", judge.provider.model);
    judge.provider.api_key =
        field_or<std::string>(obj, "judge", "api_key", judge.provider.api_key);
    judge.provider.cache_path =
        field_or<std::string>(obj, "judge", "cache_path", judge.provider.cache_path);
    judge.provider.max_retries =
        field_or<int>(obj, "judge", "max_retries", judge.provider.max_retries);
    judge.provider.timeout_s =
        field_or<double>(obj, "judge", "timeout_s", judge.provider.timeout_s);
    return judge;
}

ftb::RecommendOptions recommend_options_from_json(const ftb::json& doc) {
    ftb::RecommendOptions opts;
    if (!doc.is_object())
        ftb::raise(ftb::errc::schema, "config: recommendation options must be an object");
    check_keys(doc, "options", {"guide", "mode", "beam", "top_n", "provider"});
    const std::string guide = field_or<std::string>(doc, "options", "guide", "mock");
    if (guide == "mock" || guide == "embedding_mock")
        opts.guide = ftb::GuideKind::embedding_mock;
    else if (guide == "remote" || guide == "remote_llm")
        opts.guide = ftb::GuideKind::remote_llm;
    else
        ftb::raise(ftb::errc::schema,
                   "config: guide must be 'mock' or 'remote', got '" + guide + "'");
    const std::string mode = field_or<std::string>(doc, "options", "mode", "traverse");
    if (mode == "traverse")
        opts.mode = ftb::GuideMode::traverse;
    else if (mode == "whole_tree")
        opts.mode = ftb::GuideMode::whole_tree;
    else
        ftb::raise(ftb::errc::schema,
                   "config: mode must be 'traverse' or 'whole_tree', got '" + mode + "'");
    opts.beam = field_or<int>(doc, "options", "beam", opts.beam);
    opts.top_n = field_or<int>(doc, "options", "top_n", opts.top_n);
    if (doc.contains("provider")) {
        if (!doc["provider"].is_object())
            ftb::raise(ftb::errc::schema, "config: 'provider' must be an object");
        provider_from_json(doc["provider"], "provider", opts.provider);
    }
    return opts;
}

ftb::json build_report_json(const ftb::BuildReport& report) {
    ftb::json doc;
    ftb::json sources = ftb::json::array();
    for (const ftb::SourceStatus& status : report.sources) {
        ftb::json item;
        item["name"] = status.source_name;
        item["ok"] = status.ok;
        item["parsed_count"] = status.parsed_count;
        if (!status.ok) item["error"] = status.error;
        sources.push_back(std::move(item));
    }
    doc["sources"] = std::move(sources);
    doc["library_size"] = report.library.size();
    return doc;
}

ftb::TreeExportFormat export_format_from_name(const std::string& name) {
    if (name == "json") return ftb::TreeExportFormat::json;
    if (name == "dot") return ftb::TreeExportFormat::dot;
    if (name == "markdown") return ftb::TreeExportFormat::markdown;
    ftb::raise(ftb::errc::invalid_argument,
               "export format must be json, dot, or markdown; got '" + name + "'");
}

}  // namespace

extern "C" {

const char* ftb_version(void) { return "0.1.0"; }

const char* ftb_last_error(void) { return g_last_error.c_str(); }

void ftb_string_free(char* s) { std::free(s); }

ftb_status ftb_library_build(const char* config_json, ftb_library** out_library,
                             char** out_report_json) {
    if (!config_json || !out_library) return invalid("null argument");
    *out_library = nullptr;
    if (out_report_json) *out_report_json = nullptr;
    return guarded([&]() -> ftb_status {
        const ftb::json doc = parse_json_text(config_json, "build config");
        check_keys(doc, "build config",
                   {"sources", "judge", "timeout_s", "retries", "jobs"});
        const std::vector<ftb::RepoSource> sources = sources_from_json(doc);
        const ftb::ExistsJudge judge = judge_from_json(doc);
        ftb::BuildOptions options;
        options.timeout_s = field_or<double>(doc, "build config", "timeout_s",
                                             options.timeout_s);
        options.retries = field_or<int>(doc, "build config", "retries", options.retries);
        options.jobs = field_or<std::size_t>(doc, "build config", "jobs", options.jobs);

        ftb::BuildReport report = ftb::build_library(sources, judge, options);
        if (out_report_json)
            *out_report_json = dup_string(build_report_json(report).dump(2) + "\n");
        if (!report.any_ok()) {
            std::string message = "every source failed:";
            for (const ftb::SourceStatus& status : report.sources)
                message += " [" + status.source_name + "] " + status.error;
            g_last_error = message;
            return FTB_ERROR;
        }
        *out_library = new ftb_library{std::move(report.library)};
        if (!report.all_ok()) {
            std::size_t failed = 0;
            for (const ftb::SourceStatus& status : report.sources)
                if (!status.ok) ++failed;
            g_last_error = std::to_string(failed) + " of " +
                           std::to_string(report.sources.size()) + " sources failed";
            return FTB_ERROR_PARTIAL;
        }
        return FTB_OK;
    });
}

ftb_status ftb_library_load(const char* path, ftb_library** out_library) {
    if (!path || !out_library) return invalid("null argument");
    *out_library = nullptr;
    return guarded([&]() -> ftb_status {
        *out_library = new ftb_library{ftb::ArtifactLibrary::load(path)};
        return FTB_OK;
    });
}

ftb_status ftb_library_save(const ftb_library* library, const char* path) {
    if (!library || !path) return invalid("null argument");
    return guarded([&]() -> ftb_status {
        library->impl.save(path);
        return FTB_OK;
    });
}

ftb_status ftb_library_to_json(const ftb_library* library, char** out_json) {
    if (!library || !out_json) return invalid("null argument");
    *out_json = nullptr;
    return guarded([&]() -> ftb_status {
        *out_json = dup_string(library->impl.to_json().dump(2) + "\n");
        return FTB_OK;
    });
}

size_t ftb_library_size(const ftb_library* library) {
    return library ? library->impl.size() : 0;
}

void ftb_library_free(ftb_library* library) { delete library; }

ftb_status ftb_tree_build(const ftb_library* library, const char* config_json,
                          ftb_tree** out_tree) {
    if (!library || !config_json || !out_tree) return invalid("null argument");
    *out_tree = nullptr;
    return guarded([&]() -> ftb_status {
        const ftb::json doc = parse_json_text(config_json, "build config");
        const ftb::SolutionConfig config = ftb::solution_config_from_json(doc);
        *out_tree = new ftb_tree{ftb::build_tree(library->impl, config)};
        return FTB_OK;
    });
}

ftb_status ftb_tree_load(const char* path, ftb_tree** out_tree) {
    if (!path || !out_tree) return invalid("null argument");
    *out_tree = nullptr;
    return guarded([&]() -> ftb_status {
        *out_tree = new ftb_tree{ftb::import_tree(path)};
        return FTB_OK;
    });
}

ftb_status ftb_tree_export(const ftb_tree* tree, const char* format, const char* path) {
    if (!tree || !format || !path) return invalid("null argument");
    return guarded([&]() -> ftb_status {
        ftb::export_tree(tree->impl, export_format_from_name(format), path);
        return FTB_OK;
    });
}

ftb_status ftb_tree_to_json(const ftb_tree* tree, char** out_json) {
    if (!tree || !out_json) return invalid("null argument");
    *out_json = nullptr;
    return guarded([&]() -> ftb_status {
        *out_json = dup_string(ftb::tree_to_json(tree->impl).dump(2) + "\n");
        return FTB_OK;
    });
}

ftb_status ftb_tree_stats_json(const ftb_tree* tree, char** out_json) {
    if (!tree || !out_json) return invalid("null argument");
    *out_json = nullptr;
    return guarded([&]() -> ftb_status {
        const ftb::TreeStats stats = ftb::tree_stats(tree->impl);
        ftb::json doc;
        doc["layers_with_leaves"] = stats.layers_with_leaves;
        doc["feature_layers"] = stats.feature_layers;
        doc["node_count"] = stats.node_count;
        doc["feature_node_count"] = stats.feature_node_count;
        doc["top_count"] = tree->impl.top_ids.size();
        *out_json = dup_string(doc.dump(2) + "\n");
        return FTB_OK;
    });
}

ftb_status ftb_tree_metrics_json(const ftb_tree* tree, const char* embedder_json,
                                 char** out_json) {
    if (!tree || !embedder_json || !out_json) return invalid("null argument");
    *out_json = nullptr;
    return guarded([&]() -> ftb_status {
        const ftb::json doc = parse_json_text(embedder_json, "embedder config");
        const ftb::EmbedderConfig embedder = ftb::embedder_config_from_json(doc);
        const ftb::TreeScore score = ftb::score_tree(tree->impl, embedder);
        *out_json = dup_string(ftb::metric_report_json(score).dump(2) + "\n");
        return FTB_OK;
    });
}

void ftb_tree_free(ftb_tree* tree) { delete tree; }

ftb_status ftb_matrix_run(const ftb_library* library, const char* config_json,
                          size_t jobs, char** out_json, char** out_table) {
    if (!library || !out_json) return invalid("null argument");
    *out_json = nullptr;
    if (out_table) *out_table = nullptr;
    return guarded([&]() -> ftb_status {
        ftb::SolutionConfig base;
        if (config_json && *config_json) {
            const ftb::json doc = parse_json_text(config_json, "build config");
            base = ftb::solution_config_from_json(doc);
        }
        const ftb::MatrixReport report =
            ftb::run_matrix(library->impl, base, jobs == 0 ? 1 : jobs);
        *out_json = dup_string(ftb::matrix_report_json(report, true).dump(2) + "\n");
        if (out_table) *out_table = dup_string(ftb::matrix_report_table(report));
        return FTB_OK;
    });
}

ftb_status ftb_recommend(const ftb_tree* tree, const char* requirement,
                         const char* options_json, char** out_json) {
    if (!tree || !requirement || !out_json) return invalid("null argument");
    *out_json = nullptr;
    return guarded([&]() -> ftb_status {
        ftb::RecommendOptions opts;
        if (options_json && *options_json)
            opts = recommend_options_from_json(
                parse_json_text(options_json, "recommendation options"));
        const std::vector<std::string> ids =
            ftb::recommend_with_tree(requirement, tree->impl, opts);
        *out_json = dup_string(ftb::json(ids).dump(2) + "\n");
        return FTB_OK;
    });
}

ftb_status ftb_eval_run(const ftb_tree* tree, const char* dataset_path,
                        const char* options_json, char** out_json,
                        double* out_wall_time_s) {
    if (!tree || !dataset_path || !out_json) return invalid("null argument");
    *out_json = nullptr;
    if (out_wall_time_s) *out_wall_time_s = 0.0;
    return guarded([&]() -> ftb_status {
        ftb::RecommendOptions opts;
        if (options_json && *options_json)
            opts = recommend_options_from_json(
                parse_json_text(options_json, "recommendation options"));
        std::set<std::string> valid_ids;
        for (const ftb::FeatureNode& node : tree->impl.nodes)
            if (node.level == 0) valid_ids.insert(node.artifact_id);
        const std::vector<ftb::ArtSelSample> dataset =
            ftb::load_artsel(dataset_path, valid_ids);
        const ftb::EvalReport report = ftb::evaluate(dataset, tree->impl, opts);
        *out_json = dup_string(ftb::eval_report_json(report).dump(2) + "\n");
        if (out_wall_time_s) *out_wall_time_s = report.wall_time_s;
        return FTB_OK;
    });
}

}  // extern "C"
