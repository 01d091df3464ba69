#ifndef FTB_CLUSTER_KMEANS_HPP
#define FTB_CLUSTER_KMEANS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "cluster/clustering.hpp"
#include "core/embedding.hpp"

namespace ftb {

struct KMeansModel {
    std::vector<double> centroids;  // k×d row-major
    std::size_t k = 0;
    std::size_t dim = 0;
    double sse = 0.0;               // sum of squared distances to assigned centroids
    int iterations = 0;
    std::uint64_t seed = 0;
    std::vector<double> sse_history;  // per Lloyd iteration of the winning restart
};

// k-means++ init, Lloyd iterations until centroid shift < tol or max_iter,
// best of n_init restarts by SSE. Restart seeds derive deterministically from
// `seed`. Empty clusters are repaired by reseeding with the point farthest
// from its assigned centroid (donor cluster must keep >= 2 members); SSE stays
// non-increasing per iteration and that is asserted.
std::pair<KMeansModel, ClusterAssignment> kmeans(const EmbeddingMatrix& X, int k,
                                                 std::uint64_t seed, int max_iter = 100,
                                                 double tol = 1e-6, int n_init = 10);

}  // namespace ftb

#endif
