#include "core/providers.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <unordered_map>

#include "core/errors.hpp"
#include "core/http.hpp"
#include "core/json.hpp"
#include "core/log.hpp"
#include "core/sha256.hpp"
#include "core/text.hpp"

namespace ftb {

namespace {

bool is_mock_endpoint(const std::string& endpoint) {
    return endpoint.rfind("mock://", 0) == 0;
}

// ---------------------------------------------------------------------------
// jsonl caches. One record per line; duplicate keys keep the first record so
// a cache file is append-only and replays identically.
// ---------------------------------------------------------------------------

class JsonlCache {
public:
    explicit JsonlCache(std::string path) : path_(std::move(path)) {
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            json record = json::parse(line, nullptr, false);
            if (record.is_discarded() || !record.contains("model") || !record.contains("sha256")) {
                continue;
            }
            entries_.emplace(key_of(record["model"].get<std::string>(),
                                    record["sha256"].get<std::string>()),
                             std::move(record));
        }
    }

    bool get(const std::string& model, const std::string& sha, json& out) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = entries_.find(key_of(model, sha));
        if (it == entries_.end()) {
            return false;
        }
        out = it->second;
        return true;
    }

    void put(const std::string& model, const std::string& sha, json record) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto [it, inserted] = entries_.emplace(key_of(model, sha), std::move(record));
        if (!inserted) {
            return;
        }
        std::ofstream out(path_, std::ios::app);
        if (!out) {
            log_warn("cache file not writable: " + path_);
            return;
        }
        out << it->second.dump() << '\n';
    }

private:
    static std::string key_of(const std::string& model, const std::string& sha) {
        return model + "\x1f" + sha;
    }

    std::string path_;
    std::mutex mutex_;
    std::unordered_map<std::string, json> entries_;
};

std::shared_ptr<JsonlCache> open_cache(const std::string& path) {
    // Caches are shared per path so concurrent pipeline stages see one view.
    static std::mutex registry_mutex;
    static std::unordered_map<std::string, std::shared_ptr<JsonlCache>> registry;
    std::lock_guard<std::mutex> lock(registry_mutex);
    auto& slot = registry[path];
    if (!slot) {
        slot = std::make_shared<JsonlCache>(path);
    }
    return slot;
}

// ---------------------------------------------------------------------------
// wire response parsing
// ---------------------------------------------------------------------------

std::vector<std::vector<double>> parse_embedding_response(const std::string& body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) {
        raise(errc::provider, "embedding response is not valid json");
    }
    const json* arr = nullptr;
    if (doc.is_array()) {
        arr = &doc;
    } else if (doc.contains("data") && doc["data"].is_array()) {
        arr = &doc["data"];
    } else if (doc.contains("embeddings") && doc["embeddings"].is_array()) {
        arr = &doc["embeddings"];
    } else {
        raise(errc::provider, "embedding response has no vector array");
    }
    std::vector<std::vector<double>> out;
    out.reserve(arr->size());
    for (const json& item : *arr) {
        const json* vec = &item;
        if (item.is_object()) {
            if (!item.contains("embedding")) {
                raise(errc::provider, "embedding response entry has no 'embedding' field");
            }
            vec = &item["embedding"];
        }
        if (!vec->is_array()) {
            raise(errc::provider, "embedding response entry is not an array");
        }
        out.push_back(vec->get<std::vector<double>>());
    }
    return out;
}

std::string parse_chat_response(const std::string& body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) {
        raise(errc::provider, "chat response is not valid json");
    }
    if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
        const json& first = doc["choices"][0];
        if (first.contains("message") && first["message"].contains("content")) {
            return first["message"]["content"].get<std::string>();
        }
        if (first.contains("text")) {
            return first["text"].get<std::string>();
        }
    }
    for (const char* field : {"content", "completion", "text"}) {
        if (doc.contains(field) && doc[field].is_string()) {
            return doc[field].get<std::string>();
        }
    }
    raise(errc::provider, "chat response has no completion field");
}

class HttpChatProvider : public ChatProvider {
public:
    explicit HttpChatProvider(ProviderConfig config) : config_(std::move(config)) {
        if (!config_.cache_path.empty()) {
            cache_ = open_cache(config_.cache_path);
        }
    }

    std::string complete(const std::string& prompt) override {
        const std::string sha = sha256_hex(prompt);
        if (cache_) {
            json hit;
            if (cache_->get(config_.model, sha, hit) && hit.contains("response")) {
                return hit["response"].get<std::string>();
            }
        }

        json body;
        body["model"] = config_.model;
        body["temperature"] = config_.temperature;
        body["messages"] = json::array({json{{"role", "user"}, {"content", prompt}}});

        HttpHeaders headers;
        if (!config_.api_key.empty()) {
            headers.emplace_back("Authorization", "Bearer " + config_.api_key);
        }

        std::string last_error;
        for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
            HttpResult res = http_post_json(config_.endpoint, headers, body.dump(), config_.timeout_s);
            if (!res.error.empty()) {
                last_error = res.error;
                continue;
            }
            if (res.status < 200 || res.status >= 300) {
                last_error = "status " + std::to_string(res.status);
                continue;
            }
            std::string completion = parse_chat_response(res.body);
            if (cache_) {
                json record;
                record["sha256"] = sha;
                record["model"] = config_.model;
                record["response"] = completion;
                cache_->put(config_.model, sha, std::move(record));
            }
            return completion;
        }
        raise(errc::provider, "chat provider failed after " + std::to_string(config_.max_retries + 1) +
                                  " attempts: " + last_error);
    }

private:
    ProviderConfig config_;
    std::shared_ptr<JsonlCache> cache_;
};

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<std::vector<double>> request_embeddings(const std::vector<std::string>& batch,
                                                    const EmbedderConfig& config) {
    json body;
    body["model"] = config.model;
    body["input"] = batch;

    HttpHeaders headers;
    if (!config.api_key.empty()) {
        headers.emplace_back("Authorization", "Bearer " + config.api_key);
    }

    std::string last_error;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        HttpResult res = http_post_json(config.endpoint, headers, body.dump(), config.timeout_s);
        if (!res.error.empty()) {
            last_error = res.error;
            continue;
        }
        if (res.status < 200 || res.status >= 300) {
            last_error = "status " + std::to_string(res.status);
            continue;
        }
        std::vector<std::vector<double>> vectors = parse_embedding_response(res.body);
        if (vectors.size() != batch.size()) {
            raise(errc::provider, "embedding response count mismatch: expected " +
                                      std::to_string(batch.size()) + ", got " +
                                      std::to_string(vectors.size()));
        }
        return vectors;
    }
    raise(errc::provider, "embedding provider failed after " + std::to_string(config.max_retries + 1) +
                              " attempts: " + last_error);
}

}  // namespace

std::unique_ptr<ChatProvider> make_http_chat_provider(const ProviderConfig& config) {
    if (config.endpoint.empty()) {
        raise(errc::invalid_argument, "chat provider requires an endpoint");
    }
    return std::make_unique<HttpChatProvider>(config);
}

EmbeddingVector mock_model_embed(const std::string& model, const std::string& text, std::size_t dim) {
    EmbeddingVector vec;
    vec.values.assign(dim, 0.0);
    for (const std::string& token : tokenize(text)) {
        const std::uint64_t h = fnv1a64(model + ":" + token);
        const std::size_t slot = static_cast<std::size_t>(h % dim);
        const double sign = (h >> 63) ? -1.0 : 1.0;
        vec.values[slot] += sign;
    }
    double norm_sq = 0.0;
    for (double v : vec.values) {
        norm_sq += v * v;
    }
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& v : vec.values) {
            v *= inv;
        }
    }
    return vec;
}

EmbeddingMatrix remote_embed(const std::vector<std::string>& texts, const EmbedderConfig& config) {
    if (config.kind != EmbedderKind::remote) {
        raise(errc::invalid_argument, "remote_embed called with non-remote config");
    }
    if (config.model.empty()) {
        raise(errc::invalid_argument, "remote embedder requires a model name");
    }
    if (texts.empty()) {
        raise(errc::empty_corpus, "remote_embed: empty corpus");
    }

    const bool mock = is_mock_endpoint(config.endpoint);
    std::shared_ptr<JsonlCache> cache;
    if (!config.cache_path.empty()) {
        cache = open_cache(config.cache_path);
    }

    std::vector<std::vector<double>> vectors(texts.size());
    std::vector<std::size_t> missing;
    std::vector<std::string> shas(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        shas[i] = sha256_hex(texts[i]);
        json hit;
        if (cache && cache->get(config.model, shas[i], hit) && hit.contains("vector")) {
            vectors[i] = hit["vector"].get<std::vector<double>>();
        } else {
            missing.push_back(i);
        }
    }

    if (!missing.empty() && mock) {
        for (std::size_t i : missing) {
            vectors[i] = mock_model_embed(config.model, texts[i]).values;
        }
    } else if (!missing.empty()) {
        if (config.endpoint.empty()) {
            raise(errc::provider, "remote embedder has no endpoint and no cached vectors");
        }
        const std::size_t batch_size = config.batch_size == 0 ? 16 : config.batch_size;
        for (std::size_t start = 0; start < missing.size(); start += batch_size) {
            const std::size_t end = std::min(missing.size(), start + batch_size);
            std::vector<std::string> batch;
            batch.reserve(end - start);
            for (std::size_t j = start; j < end; ++j) {
                batch.push_back(texts[missing[j]]);
            }
            std::vector<std::vector<double>> got = request_embeddings(batch, config);
            for (std::size_t j = start; j < end; ++j) {
                vectors[missing[j]] = std::move(got[j - start]);
            }
        }
    }

    // Cache writes happen after the full pass so a failed run caches nothing partial
    // for the indexes it did not reach.
    if (cache) {
        for (std::size_t i : missing) {
            json record;
            record["model"] = config.model;
            record["sha256"] = shas[i];
            record["vector"] = vectors[i];
            cache->put(config.model, shas[i], std::move(record));
        }
    }

    EmbeddingMatrix out;
    out.dim = vectors.front().size();
    out.row_ids.reserve(texts.size());
    out.values.reserve(texts.size() * out.dim);
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (vectors[i].size() != out.dim) {
            raise(errc::dimension_mismatch,
                  "provider returned ragged dimensions: row " + std::to_string(i) + " has " +
                      std::to_string(vectors[i].size()) + ", expected " + std::to_string(out.dim));
        }
        out.row_ids.push_back(std::to_string(i));
        out.values.insert(out.values.end(), vectors[i].begin(), vectors[i].end());
    }

    if (config.l2_normalize_remote) {
        for (std::size_t i = 0; i < out.rows(); ++i) {
            std::span<double> row = out.row(i);
            double norm_sq = 0.0;
            for (double v : row) {
                norm_sq += v * v;
            }
            if (norm_sq > 0.0) {
                const double inv = 1.0 / std::sqrt(norm_sq);
                for (double& v : row) {
                    v *= inv;
                }
            }
        }
    }
    return out;
}

}  // namespace ftb
