#include "cluster/clustering.hpp"

#include <string>

#include "core/errors.hpp"

namespace ftb {

void validate_assignment(const ClusterAssignment& assignment, std::size_t n_rows) {
    if (assignment.k <= 0) {
        raise(errc::internal, "assignment has non-positive k");
    }
    if (assignment.labels.size() != n_rows) {
        raise(errc::internal, "assignment label count " + std::to_string(assignment.labels.size()) +
                                  " != row count " + std::to_string(n_rows));
    }
    std::vector<std::size_t> sizes(static_cast<std::size_t>(assignment.k), 0);
    for (int label : assignment.labels) {
        if (label < 0 || label >= assignment.k) {
            raise(errc::internal, "label " + std::to_string(label) + " outside [0," +
                                      std::to_string(assignment.k) + ")");
        }
        ++sizes[static_cast<std::size_t>(label)];
    }
    for (int c = 0; c < assignment.k; ++c) {
        if (sizes[static_cast<std::size_t>(c)] == 0) {
            raise(errc::internal, "cluster " + std::to_string(c) + " is empty");
        }
    }
}

}  // namespace ftb
