#ifndef FTB_CORE_PROVIDERS_HPP
#define FTB_CORE_PROVIDERS_HPP

#include <memory>
#include <string>
#include <vector>

#include "core/embedding.hpp"

namespace ftb {

struct ProviderConfig {
    std::string endpoint;       // "mock://" requests the offline deterministic path
    std::string model;
    std::string api_key;        // from FTB_API_KEY; never logged
    double temperature = 0.0;   // 0 keeps tree builds reproducible
    int max_retries = 2;
    double timeout_s = 30;
    std::string cache_path;     // jsonl response cache; empty disables
};

// One completion per call. Implementations must be safe to call from
// multiple threads.
class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual std::string complete(const std::string& prompt) = 0;
};

// POST {"model","temperature","messages":[{"role":"user","content":...}]}
// with Authorization: Bearer <key>; responses cached by prompt hash.
std::unique_ptr<ChatProvider> make_http_chat_provider(const ProviderConfig& config);

// One vector per input text, input order preserved, batched requests,
// disk cache keyed by (model, sha256 of text). Honors config.endpoint
// "mock://" by producing deterministic hashed bag-of-words vectors so the
// whole pipeline runs offline.
EmbeddingMatrix remote_embed(const std::vector<std::string>& texts, const EmbedderConfig& config);

// The offline stand-in used behind mock:// endpoints. Vectors depend on the
// model name, so distinct models give distinct geometries.
EmbeddingVector mock_model_embed(const std::string& model, const std::string& text,
                                 std::size_t dim = 64);

}  // namespace ftb

#endif
