#include "cluster/hierarchical.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "core/errors.hpp"

namespace ftb {

namespace {

struct ActiveCluster {
    int node_id;        // dendrogram node id
    std::size_t size;   // member count, for Lance-Williams
};

}  // namespace

Dendrogram agglomerate_average_linkage(const EmbeddingMatrix& X) {
    const std::size_t n = X.rows();
    if (n < 2) {
        raise(errc::invalid_argument, "hierarchical clustering needs at least 2 rows");
    }

    // Dense symmetric distance table over active slots; slots die as they merge.
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = euclidean_distance(X.row(i), X.row(j));
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    std::vector<ActiveCluster> slot(n);
    std::vector<bool> alive(n, true);
    for (std::size_t i = 0; i < n; ++i) {
        slot[i] = {static_cast<int>(i), 1};
    }

    Dendrogram out;
    out.n_leaves = n;
    out.merges.reserve(n - 1);

    double last_distance = -std::numeric_limits<double>::infinity();
    for (std::size_t step = 0; step + 1 < n; ++step) {
        // Closest active pair; ties go to the lexicographically smallest
        // (node_a, node_b) pair of dendrogram ids.
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = n, bj = n;
        int best_a = 0, best_b = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) {
                continue;
            }
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!alive[j]) {
                    continue;
                }
                const double d = dist[i * n + j];
                int a = slot[i].node_id, b = slot[j].node_id;
                if (a > b) {
                    std::swap(a, b);
                }
                if (d < best || (d == best && (a < best_a || (a == best_a && b < best_b)))) {
                    best = d;
                    bi = i;
                    bj = j;
                    best_a = a;
                    best_b = b;
                }
            }
        }

        if (best < last_distance - 1e-12 * std::max(1.0, last_distance)) {
            raise(errc::internal, "non-monotone merge distance: " + std::to_string(best) +
                                      " after " + std::to_string(last_distance));
        }
        last_distance = std::max(last_distance, best);

        const int new_node = static_cast<int>(n + step);
        out.merges.push_back({best_a, best_b, best, new_node});

        // Lance-Williams update for average linkage:
        // d(A∪B, C) = (|A|·d(A,C) + |B|·d(B,C)) / (|A|+|B|)
        const double sa = static_cast<double>(slot[bi].size);
        const double sb = static_cast<double>(slot[bj].size);
        for (std::size_t c = 0; c < n; ++c) {
            if (!alive[c] || c == bi || c == bj) {
                continue;
            }
            const double d = (sa * dist[bi * n + c] + sb * dist[bj * n + c]) / (sa + sb);
            dist[bi * n + c] = d;
            dist[c * n + bi] = d;
        }
        slot[bi].node_id = new_node;
        slot[bi].size += slot[bj].size;
        alive[bj] = false;
    }
    return out;
}

ClusterAssignment cut_dendrogram(const Dendrogram& dendro, const CutRule& cut) {
    if (!(cut.distance_fraction > 0.0) || cut.distance_fraction > 1.0) {
        raise(errc::invalid_argument, "cut distance_fraction must be in (0,1], got " +
                                          std::to_string(cut.distance_fraction));
    }
    const std::size_t n = dendro.n_leaves;
    if (dendro.merges.size() + 1 != n) {
        raise(errc::internal, "dendrogram must have exactly n-1 merges");
    }

    const double max_distance = dendro.merges.back().distance;
    const double cutoff = cut.distance_fraction * max_distance;

    // Union-find over dendrogram nodes; each merge at or below the cutoff
    // joins both sides. Merge distances are monotone, so this is a prefix.
    std::vector<int> parent(n + dendro.merges.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const Merge& m : dendro.merges) {
        if (m.distance > cutoff) {
            break;
        }
        parent[find(m.node_a)] = m.new_node;
        parent[find(m.node_b)] = m.new_node;
    }

    ClusterAssignment assignment;
    assignment.labels.resize(n);
    std::vector<int> root_label(parent.size(), -1);
    int next_label = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int root = find(static_cast<int>(i));
        if (root_label[static_cast<std::size_t>(root)] < 0) {
            root_label[static_cast<std::size_t>(root)] = next_label++;
        }
        assignment.labels[i] = root_label[static_cast<std::size_t>(root)];
    }
    assignment.k = next_label;
    validate_assignment(assignment, n);
    return assignment;
}

std::pair<Dendrogram, ClusterAssignment> hierarchical(const EmbeddingMatrix& X,
                                                      const CutRule& cut) {
    Dendrogram dendro = agglomerate_average_linkage(X);
    ClusterAssignment assignment = cut_dendrogram(dendro, cut);
    return {std::move(dendro), std::move(assignment)};
}

}  // namespace ftb
