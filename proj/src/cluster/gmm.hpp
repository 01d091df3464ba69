#ifndef FTB_CLUSTER_GMM_HPP
#define FTB_CLUSTER_GMM_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "cluster/clustering.hpp"
#include "core/embedding.hpp"

namespace ftb {

// Diagonal-covariance Gaussian mixture fitted by EM.
struct GmmModel {
    std::vector<double> weights;    // k, nonnegative, sums to 1
    std::vector<double> means;      // k×d row-major
    std::vector<double> variances;  // k×d, every entry >= variance floor
    std::size_t k = 0;
    std::size_t dim = 0;
    double log_likelihood = 0.0;
    int iterations = 0;
    std::uint64_t seed = 0;
    std::vector<double> ll_history;  // per EM iteration, non-decreasing within 1e-8
};

inline constexpr double kGmmVarianceFloor = 1e-6;

// Initialized from a k-means run; E-step in log space; stops when the
// log-likelihood improves by less than tol. Labels are argmax responsibility
// (ties toward the lowest component). Components that end up with no argmax
// member are compacted out of the assignment, so assignment.k can be smaller
// than the requested k; the model keeps all k components.
std::pair<GmmModel, ClusterAssignment> gmm_em(const EmbeddingMatrix& X, int k, std::uint64_t seed,
                                              int max_iter = 100, double tol = 1e-6);

// BIC for a fitted diagonal GMM: p·ln(n) − 2·LL with
// p = (k−1) + k·d + k·d free parameters.
double gmm_bic(const GmmModel& model, std::size_t n_rows);

}  // namespace ftb

#endif
