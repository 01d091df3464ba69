#ifndef FTB_INGEST_JUDGE_HPP
#define FTB_INGEST_JUDGE_HPP

#include <memory>
#include <optional>
#include <string>

#include "core/providers.hpp"
#include "ingest/artifact.hpp"
#include "ingest/source.hpp"

namespace ftb {

enum class JudgeKind { deterministic, remote_llm };

struct ExistsJudge {
    JudgeKind kind = JudgeKind::deterministic;
    double similarity_threshold = 0.9;  // in [0,1]
    ProviderConfig provider;
    // Whole-library prompts do not scale; past this size the remote judge
    // logs a warning and answers deterministically instead.
    std::size_t max_library = 500;
    std::shared_ptr<ChatProvider> chat;  // injectable; built from provider when empty
};

// Returns the matching artifact id, or nullopt for a genuinely new candidate.
// Deterministic: normalized-name equality, else TF-IDF description cosine >=
// similarity_threshold (ties toward earliest insertion). Remote: membership
// prompt with an A/B answer; "A" resolves to an id via the deterministic rule
// without the threshold; malformed answers after retries fall back to the
// deterministic judge.
std::optional<std::string> judge_exists(const ArtifactLibrary& library,
                                        const RawArtifact& candidate, const ExistsJudge& judge);

}  // namespace ftb

#endif
