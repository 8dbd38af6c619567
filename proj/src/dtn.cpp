#include "fracmono/dtn.hpp"

#include "fracmono/errors.hpp"
#include "fracmono/simd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace fracmono {

DtnMatrix dtn_matrix(const SystemMatrix& sys, const std::vector<std::size_t>& nodes) {
    if (nodes.empty()) throw ArgumentError("dtn_matrix: empty measurement node set");
    const Grid& grid = sys.grid();
    for (std::size_t node : nodes) {
        if (!std::binary_search(grid.exterior.begin(), grid.exterior.end(), node))
            throw ArgumentError("dtn_matrix: node " + std::to_string(node) +
                                " is not an exterior node");
    }
    const linalg::Matrix& a = sys.full();
    const linalg::Matrix a_ib = linalg::take(a, grid.interior, nodes);
    const linalg::Matrix a_bb = linalg::take(a, nodes, nodes);
    const linalg::Matrix x = sys.interior_factor().solve_columns(a_ib);

    const auto& kern = simd::kernels();
    const std::size_t nb = nodes.size();
    const linalg::Matrix a_ib_t = linalg::transpose(a_ib);
    const linalg::Matrix x_t = linalg::transpose(x);
    linalg::Matrix lam(nb, nb);
    for (std::size_t g = 0; g < nb; ++g)
        for (std::size_t f = 0; f < nb; ++f)
            lam(g, f) = a_bb(g, f) - kern.dot(a_ib_t.row(g), x_t.row(f), grid.interior.size());

    DtnMatrix out;
    out.raw_asymmetry = linalg::max_asymmetry(lam);
    const double scale = std::max(linalg::frobenius_norm(lam), 1e-300);
    if (out.raw_asymmetry > 1e-10 * scale)
        throw NumericalError("dtn_matrix: asymmetry " + std::to_string(out.raw_asymmetry) +
                             " exceeds 1e-10 relative");
    linalg::symmetrize(lam);
    out.m = std::move(lam);
    out.nodes = nodes;
    out.potential_id = sys.potential_id();
    out.grid_id = grid.id();
    return out;
}

DtnMatrix frechet_apply(const SolutionOperator& s_op, const std::vector<double>& r, double h) {
    const std::size_t ni = s_op.S.rows();
    const std::size_t nb = s_op.S.cols();
    if (r.size() != ni)
        throw ArgumentError("frechet_apply: weight vector does not match the interior size");
    if (!(h > 0.0)) throw ArgumentError("frechet_apply: spacing must be positive");

    const auto& kern = simd::kernels();
    const linalg::Matrix st = linalg::transpose(s_op.S); // rows = measurement directions
    linalg::Matrix out(nb, nb);
    for (std::size_t g = 0; g < nb; ++g) {
        for (std::size_t f = g; f < nb; ++f) {
            const double v = h * kern.weighted_dot(r.data(), st.row(g), st.row(f), ni);
            out(g, f) = v;
            out(f, g) = v;
        }
    }
    DtnMatrix d;
    d.m = std::move(out);
    d.nodes = s_op.column_nodes;
    d.potential_id = "frechet";
    d.raw_asymmetry = 0.0;
    return d;
}

TestOperator testing_operator(const SolutionOperator& s_op,
                              const std::vector<std::size_t>& mask, double h) {
    std::vector<double> r(s_op.S.rows(), 0.0);
    for (std::size_t node : mask) {
        const auto it = std::lower_bound(s_op.row_nodes.begin(), s_op.row_nodes.end(), node);
        if (it == s_op.row_nodes.end() || *it != node)
            throw ArgumentError("testing_operator: node " + std::to_string(node) +
                                " is not an interior node of the operator");
        r[static_cast<std::size_t>(it - s_op.row_nodes.begin())] = 1.0;
    }
    DtnMatrix d = frechet_apply(s_op, r, h);
    TestOperator t;
    t.m = std::move(d.m);
    t.nodes = s_op.column_nodes;
    t.mask = mask;
    std::sort(t.mask.begin(), t.mask.end());
    return t;
}

void write_matrix_csv(const std::string& path, const linalg::Matrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("write_matrix_csv: cannot open " + path);
    char buf[40];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw ArgumentError("write_matrix_csv: write failed for " + path);
}

linalg::Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("read_matrix_csv: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw ArgumentError("read_matrix_csv: ragged rows in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) return {};
    linalg::Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

} // namespace fracmono
