#include "summarize/summarize.hpp"

#include <limits>
#include <string>

#include "core/embedding.hpp"
#include "core/errors.hpp"
#include "core/log.hpp"
#include "core/text.hpp"

namespace ftb {

FeatureSummary mock_summarize(const std::vector<FeatureSummary>& children) {
    if (children.empty()) {
        raise(errc::empty_cluster, "cannot summarize an empty cluster");
    }
    if (children.size() == 1) {
        return children.front();
    }

    std::vector<std::string> texts;
    texts.reserve(children.size());
    for (const FeatureSummary& child : children) {
        texts.push_back(child.description);
    }
    const EmbeddingMatrix tfidf = tfidf_fit_transform(texts);
    const std::vector<std::string> vocabulary = tfidf_vocabulary(texts);

    std::vector<double> term_score(tfidf.dim, 0.0);
    for (std::size_t i = 0; i < tfidf.rows(); ++i) {
        const std::span<const double> row = tfidf.row(i);
        for (std::size_t j = 0; j < tfidf.dim; ++j) {
            term_score[j] += row[j];
        }
    }

    // The vocabulary is lexicographic, so ascending scan with strict >
    // breaks score ties toward the lexicographically smaller term.
    std::string name;
    std::size_t first_col = tfidf.dim;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < tfidf.dim; ++j) {
        if (term_score[j] > best) {
            best = term_score[j];
            first_col = j;
        }
    }
    std::size_t second_col = tfidf.dim;
    best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < tfidf.dim; ++j) {
        if (j != first_col && term_score[j] > best) {
            best = term_score[j];
            second_col = j;
        }
    }
    if (first_col < tfidf.dim) {
        name = title_case(vocabulary[first_col]);
    }
    if (second_col < tfidf.dim) {
        name += " " + title_case(vocabulary[second_col]);
    }
    if (name.empty()) {
        name = children.front().name;  // descriptions with no tokens at all
    }

    std::string description = "Common functionality covering: ";
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (i > 0) {
            description += "; ";
        }
        description += children[i].name;
    }
    return {std::move(name), std::move(description)};
}

Summarizer::Summarizer(SummarizerConfig config) : config_(std::move(config)) {
    if (config_.kind == SummarizerKind::remote && !config_.chat) {
        config_.chat = make_http_chat_provider(config_.provider);
    }
}

FeatureSummary Summarizer::summarize(const std::vector<FeatureSummary>& children) const {
    if (children.empty()) {
        raise(errc::empty_cluster, "cannot summarize an empty cluster");
    }
    if (config_.kind == SummarizerKind::mock) {
        return mock_summarize(children);
    }

    const std::string prompt = render_summarize_prompt(children);
    std::string last_error;
    for (int attempt = 0; attempt <= config_.provider.max_retries; ++attempt) {
        try {
            return parse_summary_response(config_.chat->complete(prompt));
        } catch (const error& e) {
            last_error = e.what();
        }
    }
    if (config_.mock_fallback) {
        log_warn("summarization failed after retries (" + last_error + "); using mock summary");
        return mock_summarize(children);
    }
    raise(errc::provider, "summarization failed after retries: " + last_error);
}

}  // namespace ftb
