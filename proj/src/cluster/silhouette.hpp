#ifndef FTB_CLUSTER_SILHOUETTE_HPP
#define FTB_CLUSTER_SILHOUETTE_HPP

#include <vector>

#include "cluster/clustering.hpp"
#include "core/embedding.hpp"

namespace ftb {

// s(i) = (b−a)/max(a,b) with Euclidean distances. Singleton clusters score 0
// (a defined as 0). Requires k >= 2. Outputs lie in [-1,1].
std::vector<double> silhouette_samples(const EmbeddingMatrix& X,
                                       const ClusterAssignment& assignment);

// Mean of the samples.
double silhouette_score(const EmbeddingMatrix& X, const ClusterAssignment& assignment);

}  // namespace ftb

#endif
