#include "cluster/select_k.hpp"

#include <cmath>
#include <limits>

#include "cluster/gmm.hpp"
#include "cluster/kmeans.hpp"
#include "cluster/silhouette.hpp"
#include "core/errors.hpp"
#include "core/seed.hpp"

namespace ftb {

namespace {

// Every fit at a given k draws from the same derived stream, so selecting a k
// and later refitting at that k produce identical assignments.
std::uint64_t seed_for_k(std::uint64_t master, int k) {
    return mix_seed(master, static_cast<std::uint64_t>(k));
}

struct ResolvedRange {
    int k_min;
    int k_max;
};

ResolvedRange resolve_range(const CnMethod& range, std::size_t n_rows, int floor_k) {
    const int k_max = range.k_max == 0
                          ? std::min(8, static_cast<int>(n_rows) - 1)
                          : range.k_max;
    if (range.k_min < floor_k) {
        raise(errc::invalid_range, "k_min must be >= " + std::to_string(floor_k) + ", got " +
                                       std::to_string(range.k_min));
    }
    if (range.k_min > k_max || static_cast<std::size_t>(k_max) >= n_rows) {
        raise(errc::invalid_range, "need k_min <= k_max < rows, got [" +
                                       std::to_string(range.k_min) + "," + std::to_string(k_max) +
                                       "] over " + std::to_string(n_rows) + " rows");
    }
    return {range.k_min, k_max};
}

struct FitAtK {
    ClusterAssignment assignment;
    double hard_sse = 0.0;       // vs the hard assignment's own cluster means
    double log_likelihood = 0.0; // gmm only
    std::size_t model_k = 0;     // gmm only: requested component count
    std::size_t dim = 0;
};

double hard_assignment_sse(const EmbeddingMatrix& X, const ClusterAssignment& assignment) {
    const std::size_t n = X.rows();
    const std::size_t d = X.dim;
    const std::size_t k = static_cast<std::size_t>(assignment.k);
    std::vector<double> means(k * d, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = static_cast<std::size_t>(assignment.labels[i]);
        const std::span<const double> row = X.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            means[c * d + j] += row[j];
        }
        ++counts[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t j = 0; j < d; ++j) {
            means[c * d + j] /= static_cast<double>(counts[c]);
        }
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = static_cast<std::size_t>(assignment.labels[i]);
        sse += squared_distance(X.row(i), std::span<const double>(means.data() + c * d, d));
    }
    return sse;
}

FitAtK fit_at_k(const EmbeddingMatrix& X, ClusterAlgo algo, int k, std::uint64_t master_seed) {
    FitAtK out;
    out.dim = X.dim;
    const std::uint64_t seed = seed_for_k(master_seed, k);
    if (algo == ClusterAlgo::kmeans) {
        auto [model, assignment] = kmeans(X, k, seed);
        out.hard_sse = model.sse;
        out.assignment = std::move(assignment);
    } else if (algo == ClusterAlgo::gmm) {
        auto [model, assignment] = gmm_em(X, k, seed);
        out.log_likelihood = model.log_likelihood;
        out.model_k = model.k;
        out.hard_sse = hard_assignment_sse(X, assignment);
        out.assignment = std::move(assignment);
    } else {
        raise(errc::incompatible, "hierarchical clustering is not k-targeted");
    }
    return out;
}

void require_selectable(ClusterAlgo algo) {
    if (algo == ClusterAlgo::hierarchical) {
        raise(errc::incompatible,
              "cluster-count selection does not apply to hierarchical clustering (cn none)");
    }
}

}  // namespace

std::string cluster_algo_name(ClusterAlgo algo) {
    switch (algo) {
        case ClusterAlgo::kmeans: return "kmeans";
        case ClusterAlgo::gmm: return "gmm";
        case ClusterAlgo::hierarchical: return "hierarchical";
    }
    return "?";
}

std::string cn_kind_name(CnKind kind) {
    switch (kind) {
        case CnKind::elbow: return "elbow";
        case CnKind::silhouette: return "silhouette";
        case CnKind::bic: return "bic";
        case CnKind::none: return "none";
    }
    return "?";
}

ClusterAlgo cluster_algo_from_name(const std::string& name) {
    if (name == "kmeans") return ClusterAlgo::kmeans;
    if (name == "gmm") return ClusterAlgo::gmm;
    if (name == "hierarchical") return ClusterAlgo::hierarchical;
    raise(errc::invalid_argument, "unknown cluster algorithm: " + name);
}

CnKind cn_kind_from_name(const std::string& name) {
    if (name == "elbow") return CnKind::elbow;
    if (name == "silhouette") return CnKind::silhouette;
    if (name == "bic") return CnKind::bic;
    if (name == "none") return CnKind::none;
    raise(errc::invalid_argument, "unknown cluster-count method: " + name);
}

std::size_t elbow_knee_index(const std::vector<int>& ks, const std::vector<double>& sses) {
    if (ks.empty() || ks.size() != sses.size()) {
        raise(errc::invalid_argument, "elbow_knee_index: curve is empty or misaligned");
    }
    if (ks.size() == 1) {
        return 0;
    }
    // |cross((P1-P0), (P-P0))| is proportional to the perpendicular distance
    // from P to the P0→P1 chord; the constant denominator cancels in argmax.
    const double x0 = static_cast<double>(ks.front());
    const double y0 = sses.front();
    const double dx = static_cast<double>(ks.back()) - x0;
    const double dy = sses.back() - y0;
    double best = -1.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double px = static_cast<double>(ks[i]) - x0;
        const double py = sses[i] - y0;
        const double cross = std::abs(dx * py - dy * px);
        if (cross > best) {
            best = cross;
            best_i = i;
        }
    }
    return best_i;
}

int select_k_elbow(const EmbeddingMatrix& X, ClusterAlgo algo, const CnMethod& range,
                   std::uint64_t seed, SelectorTrace* trace) {
    require_selectable(algo);
    const ResolvedRange r = resolve_range(range, X.rows(), 2);
    std::vector<int> ks;
    std::vector<double> sses;
    for (int k = r.k_min; k <= r.k_max; ++k) {
        const FitAtK fit = fit_at_k(X, algo, k, seed);
        ks.push_back(k);
        sses.push_back(fit.hard_sse);
        if (trace) {
            trace->emplace_back(k, fit.hard_sse);
        }
    }
    return ks[elbow_knee_index(ks, sses)];
}

int select_k_silhouette(const EmbeddingMatrix& X, ClusterAlgo algo, const CnMethod& range,
                        std::uint64_t seed, SelectorTrace* trace) {
    require_selectable(algo);
    const ResolvedRange r = resolve_range(range, X.rows(), 2);
    double best = -std::numeric_limits<double>::infinity();
    int best_k = r.k_min;
    for (int k = r.k_min; k <= r.k_max; ++k) {
        const FitAtK fit = fit_at_k(X, algo, k, seed);
        // A collapsed assignment (gmm can compact below 2) has no silhouette;
        // score it below every real value so it can never win.
        const double score =
            fit.assignment.k >= 2 ? silhouette_score(X, fit.assignment) : -2.0;
        if (trace) {
            trace->emplace_back(k, score);
        }
        if (score > best) {
            best = score;
            best_k = k;
        }
    }
    return best_k;
}

int select_k_bic(const EmbeddingMatrix& X, ClusterAlgo algo, const CnMethod& range,
                 std::uint64_t seed, SelectorTrace* trace) {
    if (algo != ClusterAlgo::gmm) {
        raise(errc::incompatible,
              "BIC selection applies to GMM only; " + cluster_algo_name(algo) + " is incompatible");
    }
    const ResolvedRange r = resolve_range(range, X.rows(), 1);
    double best = std::numeric_limits<double>::infinity();
    int best_k = r.k_min;
    const double n = static_cast<double>(X.rows());
    for (int k = r.k_min; k <= r.k_max; ++k) {
        const FitAtK fit = fit_at_k(X, algo, k, seed);
        const double kk = static_cast<double>(fit.model_k);
        const double d = static_cast<double>(fit.dim);
        const double p = (kk - 1.0) + kk * d + kk * d;
        const double bic = p * std::log(n) - 2.0 * fit.log_likelihood;
        if (trace) {
            trace->emplace_back(k, bic);
        }
        if (bic < best) {
            best = bic;
            best_k = k;
        }
    }
    return best_k;
}

ClusterAssignment fit_with_k(const EmbeddingMatrix& X, ClusterAlgo algo, int k,
                             std::uint64_t seed) {
    return fit_at_k(X, algo, k, seed).assignment;
}

ClusterAssignment cluster_auto(const EmbeddingMatrix& X, ClusterAlgo algo, const CnMethod& cn,
                               double cut_fraction, std::uint64_t seed) {
    const bool compatible =
        (algo == ClusterAlgo::kmeans && (cn.kind == CnKind::elbow || cn.kind == CnKind::silhouette)) ||
        (algo == ClusterAlgo::gmm && (cn.kind == CnKind::elbow || cn.kind == CnKind::silhouette ||
                                      cn.kind == CnKind::bic)) ||
        (algo == ClusterAlgo::hierarchical && cn.kind == CnKind::none);
    if (!compatible) {
        raise(errc::incompatible,
              "incompatible algorithm/count-method pair " + cluster_algo_name(algo) + "+" +
                  cn_kind_name(cn.kind) +
                  "; valid: kmeans+{elbow,silhouette}, gmm+{elbow,silhouette,bic}, "
                  "hierarchical+none");
    }
    if (algo == ClusterAlgo::hierarchical) {
        return hierarchical(X, CutRule{cut_fraction}).second;
    }
    int k = 0;
    switch (cn.kind) {
        case CnKind::elbow: k = select_k_elbow(X, algo, cn, seed); break;
        case CnKind::silhouette: k = select_k_silhouette(X, algo, cn, seed); break;
        case CnKind::bic: k = select_k_bic(X, algo, cn, seed); break;
        case CnKind::none: break;  // unreachable
    }
    return fit_with_k(X, algo, k, seed);
}

}  // namespace ftb
