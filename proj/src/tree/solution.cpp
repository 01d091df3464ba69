#include "tree/solution.hpp"

#include <array>
#include <cstdio>

#include "core/errors.hpp"

namespace ftb {

namespace {

bool pair_compatible(ClusterAlgo algo, CnKind kind) {
    switch (algo) {
        case ClusterAlgo::kmeans:
            return kind == CnKind::elbow || kind == CnKind::silhouette;
        case ClusterAlgo::gmm:
            return kind == CnKind::elbow || kind == CnKind::silhouette || kind == CnKind::bic;
        case ClusterAlgo::hierarchical:
            return kind == CnKind::none;
    }
    return false;
}

std::string format_fraction(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known)
            raise(errc::schema, "config: unknown key '" + it.key() + "' in " + where);
    }
}

template <typename T>
T field_or(const json& obj, const std::string& where, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const std::exception&) {
        raise(errc::schema, "config: bad value for '" + std::string(key) + "' in " + where);
    }
}

json object_field(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) return json::object();
    if (!obj.at(key).is_object())
        raise(errc::schema, "config: '" + std::string(key) + "' in " + where +
                                " must be an object");
    return obj.at(key);
}

}  // namespace

void validate_solution(const SolutionConfig& config) {
    if (!pair_compatible(config.algo, config.cn.kind)) {
        raise(errc::incompatible,
              "incompatible solution " + cluster_algo_name(config.algo) + "+" +
                  cn_kind_name(config.cn.kind) +
                  "; valid pairs: kmeans+{elbow,silhouette}, gmm+{elbow,silhouette,bic}, "
                  "hierarchical+none");
    }
    if (config.embedder.kind == EmbedderKind::remote && config.embedder.model.empty()) {
        raise(errc::invalid_argument, "remote embedder requires a model name");
    }
    if (config.stop.min_top_count < 2) {
        raise(errc::invalid_argument, "min_top_count must be >= 2");
    }
    if (config.stop.max_depth < 1) {
        raise(errc::invalid_argument, "max_depth must be >= 1");
    }
    if (config.algo == ClusterAlgo::hierarchical &&
        (!(config.cut_fraction > 0.0) || config.cut_fraction > 1.0)) {
        raise(errc::invalid_argument, "cut_fraction must lie in (0,1]");
    }
}

std::string embedder_label(const EmbedderConfig& embedder) {
    return embedder.kind == EmbedderKind::tfidf ? "TF-IDF" : embedder.model;
}

std::vector<EmbedderConfig> canonical_embedders(const EmbedderConfig& like) {
    static const std::array<const char*, 3> kRemoteModels = {
        "all-MiniLM-L6", "all-mpnet-base", "text-embedding-ada-002"};
    std::vector<EmbedderConfig> out;
    EmbedderConfig tfidf = like;
    tfidf.kind = EmbedderKind::tfidf;
    tfidf.model.clear();
    out.push_back(std::move(tfidf));
    for (const char* model : kRemoteModels) {
        EmbedderConfig remote = like;
        remote.kind = EmbedderKind::remote;
        remote.model = model;
        out.push_back(std::move(remote));
    }
    return out;
}

std::vector<SolutionConfig> enumerate_solutions(const SolutionConfig& base) {
    static const std::array<std::pair<ClusterAlgo, CnKind>, 6> kPairs = {{
        {ClusterAlgo::kmeans, CnKind::elbow},
        {ClusterAlgo::kmeans, CnKind::silhouette},
        {ClusterAlgo::gmm, CnKind::elbow},
        {ClusterAlgo::gmm, CnKind::silhouette},
        {ClusterAlgo::gmm, CnKind::bic},
        {ClusterAlgo::hierarchical, CnKind::none},
    }};
    std::vector<SolutionConfig> out;
    out.reserve(24);
    for (const EmbedderConfig& embedder : canonical_embedders(base.embedder)) {
        for (const auto& [algo, kind] : kPairs) {
            SolutionConfig solution = base;
            solution.embedder = embedder;
            solution.algo = algo;
            solution.cn.kind = kind;
            validate_solution(solution);
            out.push_back(std::move(solution));
        }
    }
    return out;
}

std::string solution_fingerprint(const SolutionConfig& config) {
    std::string fp;
    fp += "et=" + embedder_label(config.embedder);
    fp += ";ca=" + cluster_algo_name(config.algo);
    fp += ";cn=" + cn_kind_name(config.cn.kind);
    fp += ";kmin=" + std::to_string(config.cn.k_min);
    fp += ";kmax=" + (config.cn.k_max == 0 ? std::string("auto")
                                           : std::to_string(config.cn.k_max));
    if (config.algo == ClusterAlgo::hierarchical) {
        fp += ";cut=" + format_fraction(config.cut_fraction);
    }
    fp += ";min_top=" + std::to_string(config.stop.min_top_count);
    fp += ";max_depth=" + std::to_string(config.stop.max_depth);
    fp += ";seed=" + std::to_string(config.seed);
    fp += ";summarizer=";
    fp += config.summarizer.kind == SummarizerKind::mock ? "mock" : "remote";
    return fp;
}

EmbedderConfig embedder_config_from_json(const json& doc) {
    if (!doc.is_object()) raise(errc::schema, "config: 'embedder' must be an object");
    check_keys(doc, "embedder",
               {"kind", "model", "endpoint", "api_key", "cache_path", "batch_size",
                "l2_normalize", "timeout_s", "max_retries"});
    EmbedderConfig out;
    const std::string kind = field_or<std::string>(doc, "embedder", "kind", "tfidf");
    if (kind == "tfidf")
        out.kind = EmbedderKind::tfidf;
    else if (kind == "remote")
        out.kind = EmbedderKind::remote;
    else
        raise(errc::schema, "config: embedder kind must be 'tfidf' or 'remote', got '" +
                                kind + "'");
    out.model = field_or<std::string>(doc, "embedder", "model", out.model);
    out.endpoint = field_or<std::string>(doc, "embedder", "endpoint", out.endpoint);
    out.api_key = field_or<std::string>(doc, "embedder", "api_key", out.api_key);
    out.cache_path = field_or<std::string>(doc, "embedder", "cache_path", out.cache_path);
    out.batch_size = field_or<std::size_t>(doc, "embedder", "batch_size", out.batch_size);
    out.l2_normalize_remote =
        field_or<bool>(doc, "embedder", "l2_normalize", out.l2_normalize_remote);
    out.timeout_s = field_or<double>(doc, "embedder", "timeout_s", out.timeout_s);
    out.max_retries = field_or<int>(doc, "embedder", "max_retries", out.max_retries);
    return out;
}

SolutionConfig solution_config_from_json(const json& doc) {
    if (!doc.is_object()) raise(errc::schema, "config: root must be an object");
    check_keys(doc, "config",
               {"embedder", "algo", "cn", "cut_fraction", "summarizer", "min_top",
                "max_depth", "seed", "jobs"});
    SolutionConfig out;
    if (doc.contains("embedder")) out.embedder = embedder_config_from_json(doc["embedder"]);

    const std::string algo =
        field_or<std::string>(doc, "config", "algo", cluster_algo_name(out.algo));
    out.algo = cluster_algo_from_name(algo);

    const json cn = object_field(doc, "config", "cn");
    check_keys(cn, "cn", {"kind", "k_min", "k_max"});
    out.cn.kind = cn_kind_from_name(
        field_or<std::string>(cn, "cn", "kind", cn_kind_name(out.cn.kind)));
    out.cn.k_min = field_or<int>(cn, "cn", "k_min", out.cn.k_min);
    out.cn.k_max = field_or<int>(cn, "cn", "k_max", out.cn.k_max);

    out.cut_fraction = field_or<double>(doc, "config", "cut_fraction", out.cut_fraction);

    const json summ = object_field(doc, "config", "summarizer");
    check_keys(summ, "summarizer",
               {"kind", "model", "endpoint", "api_key", "cache_path", "temperature",
                "max_retries", "timeout_s", "mock_fallback"});
    const std::string summarizer_kind =
        field_or<std::string>(summ, "summarizer", "kind", "mock");
    if (summarizer_kind == "mock")
        out.summarizer.kind = SummarizerKind::mock;
    else if (summarizer_kind == "remote")
        out.summarizer.kind = SummarizerKind::remote;
    else
        raise(errc::schema,
              "config: summarizer kind must be 'mock' or 'remote', got '" +
                  summarizer_kind + "'");
    ProviderConfig& provider = out.summarizer.provider;
    provider.model = field_or<std::string>(summ, "summarizer", "model", provider.model);
    provider.endpoint =
        field_or<std::string>(summ, "summarizer", "endpoint", provider.endpoint);
    provider.api_key =
        field_or<std::string>(summ, "summarizer", "api_key", provider.api_key);
    provider.cache_path =
        field_or<std::string>(summ, "summarizer", "cache_path", provider.cache_path);
    provider.temperature =
        field_or<double>(summ, "summarizer", "temperature", provider.temperature);
    provider.max_retries =
        field_or<int>(summ, "summarizer", "max_retries", provider.max_retries);
    provider.timeout_s =
        field_or<double>(summ, "summarizer", "timeout_s", provider.timeout_s);
    out.summarizer.mock_fallback =
        field_or<bool>(summ, "summarizer", "mock_fallback", out.summarizer.mock_fallback);

    out.stop.min_top_count =
        field_or<int>(doc, "config", "min_top", out.stop.min_top_count);
    out.stop.max_depth = field_or<int>(doc, "config", "max_depth", out.stop.max_depth);
    out.seed = field_or<std::uint64_t>(doc, "config", "seed", out.seed);
    out.jobs = field_or<std::size_t>(doc, "config", "jobs", out.jobs);
    return out;
}

}  // namespace ftb
