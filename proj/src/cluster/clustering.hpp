#ifndef FTB_CLUSTER_CLUSTERING_HPP
#define FTB_CLUSTER_CLUSTERING_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace ftb {

// Complete assignment: labels in [0,k) and every cluster non-empty.
struct ClusterAssignment {
    std::vector<int> labels;
    int k = 0;
};

// Throws errc::internal when the assignment violates its invariants;
// used as a postcondition check by every clustering routine.
void validate_assignment(const ClusterAssignment& assignment, std::size_t n_rows);

inline double squared_distance(std::span<const double> u, std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t d = 0; d < u.size(); ++d) {
        const double diff = u[d] - v[d];
        acc += diff * diff;
    }
    return acc;
}

inline double euclidean_distance(std::span<const double> u, std::span<const double> v) {
    return std::sqrt(squared_distance(u, v));
}

}  // namespace ftb

#endif
