#include "core/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "core/errors.hpp"
#include "core/providers.hpp"
#include "core/text.hpp"

namespace ftb {

EmbeddingMatrix tfidf_fit_transform(const std::vector<std::string>& texts,
                                    const std::vector<std::string>& frozen_vocabulary) {
    if (texts.empty()) {
        raise(errc::empty_corpus, "tfidf: empty corpus");
    }

    const std::size_t n = texts.size();
    std::vector<std::vector<std::string>> docs;
    docs.reserve(n);
    for (const std::string& text : texts) {
        docs.push_back(tokenize(text));
    }

    // std::map keeps the vocabulary lexicographic.
    std::map<std::string, std::size_t> df;
    if (frozen_vocabulary.empty()) {
        for (const auto& tokens : docs) {
            std::vector<std::string> seen;
            for (const std::string& t : tokens) {
                if (std::find(seen.begin(), seen.end(), t) == seen.end()) {
                    seen.push_back(t);
                    ++df[t];
                }
            }
        }
    } else {
        for (const std::string& term : frozen_vocabulary) {
            df[term] = 0;
        }
        for (const auto& tokens : docs) {
            std::vector<std::string> seen;
            for (const std::string& t : tokens) {
                auto it = df.find(t);
                if (it != df.end() && std::find(seen.begin(), seen.end(), t) == seen.end()) {
                    seen.push_back(t);
                    ++it->second;
                }
            }
        }
    }

    std::unordered_map<std::string, std::size_t> term_index;
    std::vector<double> idf;
    idf.reserve(df.size());
    for (const auto& [term, count] : df) {
        term_index.emplace(term, idf.size());
        idf.push_back(std::log((1.0 + static_cast<double>(n)) / (1.0 + static_cast<double>(count))) + 1.0);
    }

    EmbeddingMatrix out;
    out.dim = idf.size();
    out.values.assign(n * out.dim, 0.0);
    out.row_ids.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
        out.row_ids.push_back(std::to_string(i));
        const auto& tokens = docs[i];
        if (tokens.empty() || out.dim == 0) {
            continue;
        }
        std::span<double> row = out.row(i);
        const double inv_len = 1.0 / static_cast<double>(tokens.size());
        for (const std::string& t : tokens) {
            auto it = term_index.find(t);
            if (it != term_index.end()) {
                row[it->second] += inv_len;
            }
        }
        double norm_sq = 0.0;
        for (std::size_t j = 0; j < out.dim; ++j) {
            row[j] *= idf[j];
            norm_sq += row[j] * row[j];
        }
        if (norm_sq > 0.0) {
            const double inv_norm = 1.0 / std::sqrt(norm_sq);
            for (std::size_t j = 0; j < out.dim; ++j) {
                row[j] *= inv_norm;
            }
        }
    }
    return out;
}

std::vector<std::string> tfidf_vocabulary(const std::vector<std::string>& texts) {
    std::map<std::string, bool> terms;
    for (const std::string& text : texts) {
        for (const std::string& t : tokenize(text)) {
            terms[t] = true;
        }
    }
    std::vector<std::string> out;
    out.reserve(terms.size());
    for (const auto& [term, _] : terms) {
        out.push_back(term);
    }
    return out;
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        raise(errc::dimension_mismatch, "cosine: dimension mismatch " + std::to_string(u.size()) +
                                            " vs " + std::to_string(v.size()));
    }
    double dot = 0.0;
    double nu = 0.0;
    double nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) {
        return 0.0;
    }
    return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
    return cosine_similarity(std::span<const double>(u.values), std::span<const double>(v.values));
}

EmbeddingMatrix embed_texts(const std::vector<std::string>& texts, const EmbedderConfig& config) {
    if (config.kind == EmbedderKind::tfidf) {
        return tfidf_fit_transform(texts, config.vocabulary);
    }
    return remote_embed(texts, config);
}

}  // namespace ftb
