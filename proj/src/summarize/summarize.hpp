#ifndef FTB_SUMMARIZE_SUMMARIZE_HPP
#define FTB_SUMMARIZE_SUMMARIZE_HPP

#include <memory>
#include <vector>

#include "core/providers.hpp"
#include "summarize/prompts.hpp"

namespace ftb {

enum class SummarizerKind { mock, remote };

struct SummarizerConfig {
    SummarizerKind kind = SummarizerKind::mock;
    ProviderConfig provider;
    bool mock_fallback = true;  // after retries, fall back instead of aborting the build
    std::shared_ptr<ChatProvider> chat;  // injectable; built from provider when empty
};

// Deterministic offline summary: name = the two highest-scoring vocabulary
// terms by summed TF-IDF weight across the children's descriptions (ties
// lexicographic), title-cased; description = "Common functionality covering: "
// + "; "-joined child names. A singleton cluster echoes its child.
FeatureSummary mock_summarize(const std::vector<FeatureSummary>& children);

class Summarizer {
public:
    explicit Summarizer(SummarizerConfig config);

    // Remote path: render → complete → parse, retrying malformed or failed
    // calls up to provider.max_retries, then mock fallback (or errc::provider
    // when fallback is disabled). Mock path: mock_summarize.
    FeatureSummary summarize(const std::vector<FeatureSummary>& children) const;

private:
    SummarizerConfig config_;
};

}  // namespace ftb

#endif
