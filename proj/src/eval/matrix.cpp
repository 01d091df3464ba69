#include "eval/matrix.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <sstream>

#include "core/parallel.hpp"
#include "metrics/tree_metrics.hpp"
#include "tree/tree.hpp"

namespace ftb {

MatrixReport run_matrix(const ArtifactLibrary& library, const SolutionConfig& base,
                        std::size_t jobs) {
    const std::vector<SolutionConfig> solutions = enumerate_solutions(base);
    MatrixReport report;
    report.rows.resize(solutions.size());

    parallel_for_indexed(solutions.size(), jobs, [&](std::size_t i) {
        const SolutionConfig& config = solutions[i];
        MatrixRow& row = report.rows[i];
        row.embedder = embedder_label(config.embedder);
        row.algo = cluster_algo_name(config.algo);
        row.cn = cn_kind_name(config.cn.kind);

        const auto start = std::chrono::steady_clock::now();
        try {
            FeatureTree tree = build_tree(library, config);
            TreeStats stats = tree_stats(tree);
            TreeScore score = score_tree(tree, config.embedder);
            row.layers = stats.layers_with_leaves;
            row.nodes = stats.node_count;
            row.silhouette = score.silhouette;
            row.gvalue = score.gvalue;
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        row.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
    });
    return report;
}

json matrix_report_json(const MatrixReport& report, bool include_wall_time) {
    json rows = json::array();
    for (const MatrixRow& row : report.rows) {
        json item;
        item["embedder"] = row.embedder;
        item["algo"] = row.algo;
        item["cn"] = row.cn;
        item["ok"] = row.ok;
        if (row.ok) {
            item["layers"] = row.layers;
            item["nodes"] = row.nodes;
            item["silhouette"] = row.silhouette;
            item["gvalue_surrogate"] = row.gvalue;
        } else {
            item["error"] = row.error;
        }
        if (include_wall_time) item["wall_time_s"] = row.wall_time_s;
        rows.push_back(std::move(item));
    }
    json doc;
    doc["rows"] = std::move(rows);
    return doc;
}

std::string matrix_report_table(const MatrixReport& report) {
    struct Cells {
        std::string et, ca, cn, l, n, ss, gs;
    };
    std::vector<Cells> body;
    body.reserve(report.rows.size());
    auto fixed3 = [](double v) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(3) << v;
        return s.str();
    };
    for (const MatrixRow& row : report.rows) {
        Cells cells;
        cells.et = row.embedder;
        cells.ca = row.algo;
        cells.cn = row.cn;
        if (row.ok) {
            cells.l = std::to_string(row.layers);
            cells.n = std::to_string(row.nodes);
            cells.ss = fixed3(row.silhouette);
            cells.gs = fixed3(row.gvalue);
        } else {
            cells.l = cells.n = cells.ss = cells.gs = "-";
        }
        body.push_back(std::move(cells));
    }

    const Cells header{"ET", "CA", "CN", "#L", "#N", "SS", "GS"};
    auto width = [&](auto proj) {
        std::size_t w = proj(header).size();
        for (const Cells& cells : body) w = std::max(w, proj(cells).size());
        return w;
    };
    const std::size_t w_et = width([](const Cells& c) -> const std::string& { return c.et; });
    const std::size_t w_ca = width([](const Cells& c) -> const std::string& { return c.ca; });
    const std::size_t w_cn = width([](const Cells& c) -> const std::string& { return c.cn; });
    const std::size_t w_l = width([](const Cells& c) -> const std::string& { return c.l; });
    const std::size_t w_n = width([](const Cells& c) -> const std::string& { return c.n; });
    const std::size_t w_ss = width([](const Cells& c) -> const std::string& { return c.ss; });
    const std::size_t w_gs = width([](const Cells& c) -> const std::string& { return c.gs; });

    std::ostringstream out;
    auto emit = [&](const Cells& cells) {
        out << std::left << std::setw(static_cast<int>(w_et)) << cells.et << "  "
            << std::setw(static_cast<int>(w_ca)) << cells.ca << "  "
            << std::setw(static_cast<int>(w_cn)) << cells.cn << "  " << std::right
            << std::setw(static_cast<int>(w_l)) << cells.l << "  "
            << std::setw(static_cast<int>(w_n)) << cells.n << "  "
            << std::setw(static_cast<int>(w_ss)) << cells.ss << "  "
            << std::setw(static_cast<int>(w_gs)) << cells.gs << "\n";
    };
    emit(header);
    out << std::string(w_et + w_ca + w_cn + w_l + w_n + w_ss + w_gs + 12, '-') << "\n";
    for (const Cells& cells : body) emit(cells);
    return out.str();
}

}  // namespace ftb
