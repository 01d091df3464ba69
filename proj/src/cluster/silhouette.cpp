#include "cluster/silhouette.hpp"

#include <limits>

#include "core/errors.hpp"

namespace ftb {

std::vector<double> silhouette_samples(const EmbeddingMatrix& X,
                                       const ClusterAssignment& assignment) {
    const std::size_t n = X.rows();
    validate_assignment(assignment, n);
    if (assignment.k < 2) {
        raise(errc::single_cluster, "silhouette requires k >= 2");
    }
    const std::size_t k = static_cast<std::size_t>(assignment.k);

    std::vector<std::size_t> sizes(k, 0);
    for (int label : assignment.labels) {
        ++sizes[static_cast<std::size_t>(label)];
    }

    std::vector<double> samples(n, 0.0);
    std::vector<double> cluster_sum(k);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t own = static_cast<std::size_t>(assignment.labels[i]);
        if (sizes[own] == 1) {
            samples[i] = 0.0;  // a undefined for singletons; defined as 0
            continue;
        }
        std::fill(cluster_sum.begin(), cluster_sum.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            cluster_sum[static_cast<std::size_t>(assignment.labels[j])] +=
                euclidean_distance(X.row(i), X.row(j));
        }
        const double a = cluster_sum[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c == own) {
                continue;
            }
            const double mean_c = cluster_sum[c] / static_cast<double>(sizes[c]);
            if (mean_c < b) {
                b = mean_c;
            }
        }
        const double denom = a > b ? a : b;
        samples[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return samples;
}

double silhouette_score(const EmbeddingMatrix& X, const ClusterAssignment& assignment) {
    const std::vector<double> samples = silhouette_samples(X, assignment);
    double total = 0.0;
    for (double s : samples) {
        total += s;
    }
    return total / static_cast<double>(samples.size());
}

}  // namespace ftb
