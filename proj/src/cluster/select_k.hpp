#ifndef FTB_CLUSTER_SELECT_K_HPP
#define FTB_CLUSTER_SELECT_K_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cluster/clustering.hpp"
#include "cluster/hierarchical.hpp"
#include "core/embedding.hpp"

namespace ftb {

enum class ClusterAlgo { kmeans, gmm, hierarchical };
enum class CnKind { elbow, silhouette, bic, none };

std::string cluster_algo_name(ClusterAlgo algo);
std::string cn_kind_name(CnKind kind);
ClusterAlgo cluster_algo_from_name(const std::string& name);
CnKind cn_kind_from_name(const std::string& name);

// Cluster-count search range. k_max == 0 resolves per matrix to
// min(8, rows−1); kind none is reserved for hierarchical clustering.
struct CnMethod {
    CnKind kind = CnKind::elbow;
    int k_min = 2;
    int k_max = 0;
};

// (k, score) pairs recorded by the selectors when a trace sink is passed.
using SelectorTrace = std::vector<std::pair<int, double>>;

// Knee of the SSE curve: the k whose point lies farthest from the chord
// joining the curve's endpoints; ties toward the smallest k. For GMM the SSE
// is that of the induced hard assignment against its own cluster means.
int select_k_elbow(const EmbeddingMatrix& X, ClusterAlgo algo, const CnMethod& range,
                   std::uint64_t seed, SelectorTrace* trace = nullptr);

// argmax of mean silhouette over the fitted assignments; ties toward the
// smallest k.
int select_k_silhouette(const EmbeddingMatrix& X, ClusterAlgo algo, const CnMethod& range,
                        std::uint64_t seed, SelectorTrace* trace = nullptr);

// argmin of BIC; GMM only — any other algorithm is incompatible.
int select_k_bic(const EmbeddingMatrix& X, ClusterAlgo algo, const CnMethod& range,
                 std::uint64_t seed, SelectorTrace* trace = nullptr);

// Knee index into a raw (k, SSE) curve via max perpendicular chord distance;
// exposed so the rule itself is testable on hand curves. Returns an index
// into the vectors, ties toward the smallest index.
std::size_t elbow_knee_index(const std::vector<int>& ks, const std::vector<double>& sses);

// One fit of `algo` at a fixed k. Hierarchical is not k-targeted and is
// rejected here.
ClusterAssignment fit_with_k(const EmbeddingMatrix& X, ClusterAlgo algo, int k,
                             std::uint64_t seed);

// Full dispatch used by the tree builder: select k per `cn` then fit, or cut
// the dendrogram for hierarchical. Validates (algo, cn.kind) compatibility.
ClusterAssignment cluster_auto(const EmbeddingMatrix& X, ClusterAlgo algo, const CnMethod& cn,
                               double cut_fraction, std::uint64_t seed);

}  // namespace ftb

#endif
