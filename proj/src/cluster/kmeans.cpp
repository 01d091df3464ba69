#include "cluster/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "core/errors.hpp"

namespace ftb {

namespace {

struct LloydResult {
    KMeansModel model;
    ClusterAssignment assignment;
};

// Assign every row to its nearest centroid; ties break toward the lowest
// centroid index so runs are reproducible with duplicated centroids.
void assign_rows(const EmbeddingMatrix& X, const std::vector<double>& centroids, std::size_t k,
                 std::vector<int>& labels) {
    const std::size_t n = X.rows();
    const std::size_t d = X.dim;
    for (std::size_t i = 0; i < n; ++i) {
        const std::span<const double> row = X.row(i);
        double best = std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (std::size_t c = 0; c < k; ++c) {
            const double dist =
                squared_distance(row, std::span<const double>(centroids.data() + c * d, d));
            if (dist < best) {
                best = dist;
                best_c = static_cast<int>(c);
            }
        }
        labels[i] = best_c;
    }
}

// Move the eligible point farthest from its assigned centroid into each empty
// cluster. Eligible = its current cluster keeps at least one member after the
// move. Recomputing means afterwards keeps SSE non-increasing: the moved point
// contributes 0 to its singleton cluster and the donor's new mean is optimal
// for the remaining members.
void repair_empty_clusters(const EmbeddingMatrix& X, const std::vector<double>& centroids,
                           std::size_t k, std::vector<int>& labels) {
    const std::size_t n = X.rows();
    const std::size_t d = X.dim;
    std::vector<std::size_t> sizes(k, 0);
    for (int label : labels) {
        ++sizes[static_cast<std::size_t>(label)];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] != 0) {
            continue;
        }
        double farthest = -1.0;
        std::size_t chosen = n;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t owner = static_cast<std::size_t>(labels[i]);
            if (sizes[owner] < 2) {
                continue;
            }
            const double dist = squared_distance(
                X.row(i), std::span<const double>(centroids.data() + owner * d, d));
            if (dist > farthest) {
                farthest = dist;
                chosen = i;
            }
        }
        if (chosen == n) {
            raise(errc::internal, "cannot repair empty cluster: no donor with 2+ members");
        }
        --sizes[static_cast<std::size_t>(labels[chosen])];
        labels[chosen] = static_cast<int>(c);
        sizes[c] = 1;
    }
}

std::vector<double> kmeanspp_init(const EmbeddingMatrix& X, std::size_t k, std::mt19937_64& rng) {
    const std::size_t n = X.rows();
    const std::size_t d = X.dim;
    std::vector<double> centroids(k * d);
    std::vector<bool> taken(n, false);
    std::uniform_int_distribution<std::size_t> uniform_row(0, n - 1);

    std::size_t first = uniform_row(rng);
    std::copy_n(X.row(first).data(), d, centroids.begin());
    taken[first] = true;

    std::vector<double> dist_sq(n, std::numeric_limits<double>::infinity());
    for (std::size_t c = 1; c < k; ++c) {
        const std::span<const double> last(centroids.data() + (c - 1) * d, d);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dist_sq[i] = std::min(dist_sq[i], squared_distance(X.row(i), last));
            total += dist_sq[i];
        }
        std::size_t chosen = n;
        if (total > 0.0) {
            std::uniform_real_distribution<double> uniform(0.0, total);
            double target = uniform(rng);
            for (std::size_t i = 0; i < n; ++i) {
                target -= dist_sq[i];
                if (target <= 0.0) {
                    chosen = i;
                    break;
                }
            }
            if (chosen == n) {
                chosen = n - 1;  // numeric slop: land on the last row
            }
        }
        if (chosen == n || taken[chosen]) {
            // Duplicated data: all remaining mass sits on taken rows. Fall back
            // to the lowest untaken index so k distinct slots are always filled.
            for (std::size_t i = 0; i < n; ++i) {
                if (!taken[i]) {
                    chosen = i;
                    break;
                }
            }
        }
        taken[chosen] = true;
        std::copy_n(X.row(chosen).data(), d, centroids.begin() + c * d);
    }
    return centroids;
}

LloydResult lloyd_run(const EmbeddingMatrix& X, std::size_t k, std::uint64_t restart_seed,
                      int max_iter, double tol) {
    const std::size_t n = X.rows();
    const std::size_t d = X.dim;
    std::mt19937_64 rng(restart_seed);

    LloydResult result;
    std::vector<double> centroids = kmeanspp_init(X, k, rng);
    std::vector<int> labels(n, 0);
    std::vector<double> next(k * d);
    std::vector<std::size_t> counts(k);

    double prev_sse = std::numeric_limits<double>::infinity();
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        assign_rows(X, centroids, k, labels);
        repair_empty_clusters(X, centroids, k, labels);

        std::fill(next.begin(), next.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::span<const double> row = X.row(i);
            double* dst = next.data() + static_cast<std::size_t>(labels[i]) * d;
            for (std::size_t dd = 0; dd < d; ++dd) {
                dst[dd] += row[dd];
            }
            ++counts[static_cast<std::size_t>(labels[i])];
        }
        for (std::size_t c = 0; c < k; ++c) {
            const double inv = 1.0 / static_cast<double>(counts[c]);
            for (std::size_t dd = 0; dd < d; ++dd) {
                next[c * d + dd] *= inv;
            }
        }

        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sse += squared_distance(
                X.row(i),
                std::span<const double>(next.data() + static_cast<std::size_t>(labels[i]) * d, d));
        }
        // Exact for real arithmetic; the slack only covers rounding.
        if (sse > prev_sse * (1.0 + 1e-9) + 1e-12) {
            raise(errc::internal, "k-means SSE increased: " + std::to_string(prev_sse) + " -> " +
                                      std::to_string(sse));
        }
        result.model.sse_history.push_back(sse);

        double shift_sq = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            shift_sq = std::max(shift_sq, squared_distance(
                                              std::span<const double>(centroids.data() + c * d, d),
                                              std::span<const double>(next.data() + c * d, d)));
        }
        centroids.swap(next);
        prev_sse = sse;
        if (std::sqrt(shift_sq) < tol) {
            ++iter;
            break;
        }
    }

    result.model.centroids = std::move(centroids);
    result.model.k = k;
    result.model.dim = d;
    result.model.sse = prev_sse;
    result.model.iterations = iter;
    result.assignment.labels = std::move(labels);
    result.assignment.k = static_cast<int>(k);
    return result;
}

}  // namespace

std::pair<KMeansModel, ClusterAssignment> kmeans(const EmbeddingMatrix& X, int k,
                                                 std::uint64_t seed, int max_iter, double tol,
                                                 int n_init) {
    const std::size_t n = X.rows();
    if (n == 0) {
        raise(errc::empty_corpus, "kmeans: empty matrix");
    }
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        raise(errc::invalid_k, "kmeans: k=" + std::to_string(k) + " outside [1," +
                                   std::to_string(n) + "]");
    }
    if (max_iter < 1 || n_init < 1) {
        raise(errc::invalid_argument, "kmeans: max_iter and n_init must be positive");
    }

    std::mt19937_64 master(seed);
    std::vector<std::uint64_t> restart_seeds(static_cast<std::size_t>(n_init));
    for (auto& s : restart_seeds) {
        s = master();
    }

    LloydResult best;
    bool have_best = false;
    for (std::uint64_t restart_seed : restart_seeds) {
        LloydResult run = lloyd_run(X, static_cast<std::size_t>(k), restart_seed, max_iter, tol);
        if (!have_best || run.model.sse < best.model.sse) {
            best = std::move(run);
            have_best = true;
        }
    }
    best.model.seed = seed;
    validate_assignment(best.assignment, n);
    return {std::move(best.model), std::move(best.assignment)};
}

}  // namespace ftb
