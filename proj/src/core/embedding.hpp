#ifndef FTB_CORE_EMBEDDING_HPP
#define FTB_CORE_EMBEDDING_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ftb {

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
};

// Row-major matrix with one id per row. Every row shares `dim`.
struct EmbeddingMatrix {
    std::vector<std::string> row_ids;
    std::size_t dim = 0;
    std::vector<double> values;

    std::size_t rows() const { return row_ids.size(); }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(values.data() + i * dim, dim);
    }

    std::span<double> row(std::size_t i) {
        return std::span<double>(values.data() + i * dim, dim);
    }
};

enum class EmbedderKind { tfidf, remote };

struct EmbedderConfig {
    EmbedderKind kind = EmbedderKind::tfidf;
    // remote only
    std::string model;
    std::string endpoint;      // "mock://" selects the deterministic offline embedder
    std::string api_key;
    std::string cache_path;    // jsonl cache; empty disables caching
    std::size_t batch_size = 16;
    bool l2_normalize_remote = false;  // remote vectors are used as returned by default
    double timeout_s = 30;
    int max_retries = 2;
    // tfidf only: frozen vocabulary; empty means fit from the corpus
    std::vector<std::string> vocabulary;
};

// tf = raw count / document token count, idf = ln((1+N)/(1+df)) + 1,
// rows L2-normalized when their norm is positive. Vocabulary is ordered
// lexicographically so output is a pure function of the text list.
EmbeddingMatrix tfidf_fit_transform(const std::vector<std::string>& texts,
                                    const std::vector<std::string>& frozen_vocabulary = {});

// The lexicographic term list tfidf_fit_transform would fit on these texts;
// index aligns with that matrix's columns.
std::vector<std::string> tfidf_vocabulary(const std::vector<std::string>& texts);

// Clamped to [-1,1]; defined as 0 when either vector is all-zero.
double cosine_similarity(std::span<const double> u, std::span<const double> v);
double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

// Dispatch on config.kind; row_ids are "0","1",... unless assigned by the caller.
EmbeddingMatrix embed_texts(const std::vector<std::string>& texts, const EmbedderConfig& config);

}  // namespace ftb

#endif
