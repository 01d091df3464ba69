#include "ingest/judge.hpp"

#include <limits>

#include "core/embedding.hpp"
#include "core/errors.hpp"
#include "core/log.hpp"
#include "core/text.hpp"
#include "summarize/prompts.hpp"

namespace ftb {

namespace {

// Highest-cosine artifact over TF-IDF description vectors fitted on the
// library plus the candidate. Ties keep the earliest insertion.
std::optional<std::string> best_similarity_match(const ArtifactLibrary& library,
                                                 const RawArtifact& candidate,
                                                 std::optional<double> threshold) {
    if (library.empty()) {
        return std::nullopt;
    }
    std::vector<std::string> corpus;
    corpus.reserve(library.size() + 1);
    for (const Artifact& artifact : library.artifacts()) {
        corpus.push_back(artifact.description);
    }
    corpus.push_back(candidate.description);
    const EmbeddingMatrix matrix = tfidf_fit_transform(corpus);
    const std::span<const double> candidate_row = matrix.row(library.size());

    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_i = library.size();
    for (std::size_t i = 0; i < library.size(); ++i) {
        const double sim = cosine_similarity(matrix.row(i), candidate_row);
        if (sim > best) {
            best = sim;
            best_i = i;
        }
    }
    if (threshold && best < *threshold) {
        return std::nullopt;
    }
    return library.artifacts()[best_i].id;
}

std::optional<std::string> deterministic_judge(const ArtifactLibrary& library,
                                               const RawArtifact& candidate, double threshold) {
    if (auto id = library.id_by_normalized_name(candidate.name)) {
        return id;
    }
    return best_similarity_match(library, candidate, threshold);
}

// "A" means the library already has it; the prompt never says which entry, so
// the id is resolved deterministically: name match first, else the most
// similar description with no threshold.
std::optional<std::string> resolve_remote_match(const ArtifactLibrary& library,
                                                const RawArtifact& candidate) {
    if (auto id = library.id_by_normalized_name(candidate.name)) {
        return id;
    }
    return best_similarity_match(library, candidate, std::nullopt);
}

}  // namespace

std::optional<std::string> judge_exists(const ArtifactLibrary& library,
                                        const RawArtifact& candidate, const ExistsJudge& judge) {
    if (judge.similarity_threshold < 0.0 || judge.similarity_threshold > 1.0) {
        raise(errc::invalid_argument, "similarity_threshold must lie in [0,1]");
    }
    if (candidate.name.empty()) {
        raise(errc::invalid_argument, "candidate artifact has an empty name");
    }
    if (judge.kind == JudgeKind::deterministic) {
        return deterministic_judge(library, candidate, judge.similarity_threshold);
    }

    if (library.empty()) {
        return std::nullopt;
    }
    if (library.size() > judge.max_library) {
        log_warn("library size " + std::to_string(library.size()) + " exceeds remote judge cap " +
                 std::to_string(judge.max_library) + "; judging deterministically");
        return deterministic_judge(library, candidate, judge.similarity_threshold);
    }

    std::shared_ptr<ChatProvider> chat = judge.chat;
    if (!chat) {
        chat = make_http_chat_provider(judge.provider);
    }
    std::vector<std::string> names;
    names.reserve(library.size());
    for (const Artifact& artifact : library.artifacts()) {
        names.push_back(artifact.name);
    }
    const std::string prompt =
        render_exists_prompt(names, candidate.name, candidate.description);

    for (int attempt = 0; attempt <= judge.provider.max_retries; ++attempt) {
        const std::string response = chat->complete(prompt);
        const std::optional<bool> verdict = parse_exists_answer(response);
        if (!verdict) {
            log_warn("unparseable exists-judgment answer (attempt " + std::to_string(attempt + 1) +
                     ")");
            continue;
        }
        if (!*verdict) {
            return std::nullopt;
        }
        return resolve_remote_match(library, candidate);
    }
    log_warn("remote judge produced no parseable answer; falling back to deterministic rule");
    return deterministic_judge(library, candidate, judge.similarity_threshold);
}

}  // namespace ftb
