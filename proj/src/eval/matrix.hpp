#ifndef FTB_EVAL_MATRIX_HPP
#define FTB_EVAL_MATRIX_HPP

#include <string>
#include <vector>

#include "core/json.hpp"
#include "ingest/artifact.hpp"
#include "tree/solution.hpp"

namespace ftb {

struct MatrixRow {
    std::string embedder;  // ET column label
    std::string algo;      // CA
    std::string cn;        // CN
    bool ok = false;
    std::string error;          // set when !ok
    int layers = 0;             // levels including the leaf level
    int nodes = 0;              // node count including leaves
    double silhouette = 0.0;    // SS
    double gvalue = 0.0;        // GS (surrogate)
    double wall_time_s = 0.0;
};

struct MatrixReport {
    std::vector<MatrixRow> rows;  // exactly the 24 solutions, embedder-major
};

// Builds and scores one tree per enumerated solution. A failing row records
// its error and the run continues. Rows may build in parallel.
MatrixReport run_matrix(const ArtifactLibrary& library, const SolutionConfig& base,
                        std::size_t jobs = 1);

// Wall time is environment noise; leave it out when comparing reruns.
json matrix_report_json(const MatrixReport& report, bool include_wall_time = true);

// Aligned text table with the ET/CA/CN/#L/#N/SS/GS columns.
std::string matrix_report_table(const MatrixReport& report);

}  // namespace ftb

#endif
