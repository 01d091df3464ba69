#include "cluster/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cluster/kmeans.hpp"
#include "core/errors.hpp"
#include "core/log.hpp"

namespace ftb {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;  // ln(2π)

bool all_rows_identical(const EmbeddingMatrix& X) {
    const std::span<const double> first = X.row(0);
    for (std::size_t i = 1; i < X.rows(); ++i) {
        const std::span<const double> row = X.row(i);
        for (std::size_t d = 0; d < X.dim; ++d) {
            if (row[d] != first[d]) {
                return false;
            }
        }
    }
    return true;
}

// log N(x | mu, diag var) for one row/component pair.
double log_gaussian(std::span<const double> x, const double* mu, const double* var,
                    std::size_t d) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = x[j] - mu[j];
        acc += std::log(var[j]) + diff * diff / var[j];
    }
    return -0.5 * (static_cast<double>(d) * kLogTwoPi + acc);
}

}  // namespace

std::pair<GmmModel, ClusterAssignment> gmm_em(const EmbeddingMatrix& X, int k, std::uint64_t seed,
                                              int max_iter, double tol) {
    const std::size_t n = X.rows();
    const std::size_t d = X.dim;
    if (n == 0) {
        raise(errc::empty_corpus, "gmm_em: empty matrix");
    }
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        raise(errc::invalid_k,
              "gmm_em: k=" + std::to_string(k) + " outside [1," + std::to_string(n) + "]");
    }
    if (k > 1 && all_rows_identical(X)) {
        log_warn("gmm_em: all points identical with k=" + std::to_string(k) +
                 "; variances floored, components will collapse");
    }

    const std::size_t ku = static_cast<std::size_t>(k);

    GmmModel model;
    model.k = ku;
    model.dim = d;
    model.seed = seed;
    model.weights.assign(ku, 0.0);
    model.means.assign(ku * d, 0.0);
    model.variances.assign(ku * d, 0.0);

    // Init from k-means: means = centroids, weights/variances from the hard partition.
    {
        auto [km, assignment] = kmeans(X, k, seed);
        model.means = km.centroids;
        std::vector<std::size_t> counts(ku, 0);
        for (int label : assignment.labels) {
            ++counts[static_cast<std::size_t>(label)];
        }
        for (std::size_t c = 0; c < ku; ++c) {
            model.weights[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::span<const double> row = X.row(i);
            const std::size_t c = static_cast<std::size_t>(assignment.labels[i]);
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = row[j] - model.means[c * d + j];
                model.variances[c * d + j] += diff * diff / static_cast<double>(counts[c]);
            }
        }
        for (double& v : model.variances) {
            v = std::max(v, kGmmVarianceFloor);
        }
    }

    std::vector<double> log_resp(n * ku);
    std::vector<double> resp(n * ku);
    double prev_ll = -std::numeric_limits<double>::infinity();
    int iter = 0;

    for (; iter < max_iter; ++iter) {
        // E-step in log space.
        std::vector<double> log_weights(ku);
        for (std::size_t c = 0; c < ku; ++c) {
            log_weights[c] = model.weights[c] > 0.0 ? std::log(model.weights[c])
                                                    : -std::numeric_limits<double>::infinity();
        }
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::span<const double> row = X.row(i);
            double row_max = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < ku; ++c) {
                const double lp = log_weights[c] + log_gaussian(row, model.means.data() + c * d,
                                                                model.variances.data() + c * d, d);
                log_resp[i * ku + c] = lp;
                row_max = std::max(row_max, lp);
            }
            double sum_exp = 0.0;
            for (std::size_t c = 0; c < ku; ++c) {
                sum_exp += std::exp(log_resp[i * ku + c] - row_max);
            }
            const double log_norm = row_max + std::log(sum_exp);
            ll += log_norm;
            for (std::size_t c = 0; c < ku; ++c) {
                resp[i * ku + c] = std::exp(log_resp[i * ku + c] - log_norm);
            }
        }

        if (ll < prev_ll - 1e-8) {
            raise(errc::internal, "EM log-likelihood decreased: " + std::to_string(prev_ll) +
                                      " -> " + std::to_string(ll));
        }
        model.ll_history.push_back(ll);
        const bool converged = iter > 0 && ll - prev_ll < tol;
        prev_ll = ll;
        model.log_likelihood = ll;
        if (converged) {
            ++iter;
            break;
        }

        // M-step.
        for (std::size_t c = 0; c < ku; ++c) {
            double nk = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                nk += resp[i * ku + c];
            }
            model.weights[c] = nk / static_cast<double>(n);
            if (nk < 1e-12) {
                // Dead component: responsibilities vanished. Keep its mean,
                // floor its variance; with ~0 weight it stays dead.
                for (std::size_t j = 0; j < d; ++j) {
                    model.variances[c * d + j] = kGmmVarianceFloor;
                }
                continue;
            }
            for (std::size_t j = 0; j < d; ++j) {
                double m = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    m += resp[i * ku + c] * X.row(i)[j];
                }
                model.means[c * d + j] = m / nk;
            }
            for (std::size_t j = 0; j < d; ++j) {
                double v = 0.0;
                const double mu = model.means[c * d + j];
                for (std::size_t i = 0; i < n; ++i) {
                    const double diff = X.row(i)[j] - mu;
                    v += resp[i * ku + c] * diff * diff;
                }
                model.variances[c * d + j] = std::max(v / nk, kGmmVarianceFloor);
            }
        }
    }
    model.iterations = iter;

    // Hard labels = argmax responsibility, ties toward the lowest component.
    std::vector<int> raw_labels(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (std::size_t c = 0; c < ku; ++c) {
            if (resp[i * ku + c] > best) {
                best = resp[i * ku + c];
                best_c = static_cast<int>(c);
            }
        }
        raw_labels[i] = best_c;
    }

    // Compact away components with no argmax member so the assignment has no
    // empty cluster; remap preserves ascending component order.
    std::vector<int> remap(ku, -1);
    int k_eff = 0;
    for (std::size_t c = 0; c < ku; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            if (raw_labels[i] == static_cast<int>(c)) {
                remap[c] = k_eff++;
                break;
            }
        }
    }
    ClusterAssignment assignment;
    assignment.k = k_eff;
    assignment.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        assignment.labels[i] = remap[static_cast<std::size_t>(raw_labels[i])];
    }
    if (k_eff < k) {
        log_warn("gmm_em: " + std::to_string(k - k_eff) + " of " + std::to_string(k) +
                 " components empty after argmax; assignment compacted to k=" +
                 std::to_string(k_eff));
    }
    validate_assignment(assignment, n);
    return {std::move(model), std::move(assignment)};
}

double gmm_bic(const GmmModel& model, std::size_t n_rows) {
    const double k = static_cast<double>(model.k);
    const double d = static_cast<double>(model.dim);
    const double p = (k - 1.0) + k * d + k * d;
    return p * std::log(static_cast<double>(n_rows)) - 2.0 * model.log_likelihood;
}

}  // namespace ftb
