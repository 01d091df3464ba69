#ifndef FTB_CLUSTER_HIERARCHICAL_HPP
#define FTB_CLUSTER_HIERARCHICAL_HPP

#include <utility>
#include <vector>

#include "cluster/clustering.hpp"
#include "core/embedding.hpp"

namespace ftb {

struct Merge {
    int node_a = 0;
    int node_b = 0;  // node_a < node_b
    double distance = 0.0;
    int new_node = 0;
};

// Leaves are 0..n_leaves-1; merge i creates node n_leaves+i. Average linkage
// on Euclidean distances keeps merge distances non-decreasing; a decrease is
// an internal error.
struct Dendrogram {
    std::vector<Merge> merges;
    std::size_t n_leaves = 0;
};

// Cut at distance_fraction × (maximum merge distance); merges at or below the
// cutoff are applied. distance_fraction must lie in (0,1].
struct CutRule {
    double distance_fraction = 0.5;
};

Dendrogram agglomerate_average_linkage(const EmbeddingMatrix& X);

// Flat clusters from a cut; labels follow leaf order of each cluster's first member.
ClusterAssignment cut_dendrogram(const Dendrogram& dendro, const CutRule& cut);

std::pair<Dendrogram, ClusterAssignment> hierarchical(const EmbeddingMatrix& X,
                                                      const CutRule& cut = {});

}  // namespace ftb

#endif
