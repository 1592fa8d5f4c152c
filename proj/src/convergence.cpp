#include "rmhd/convergence.hpp"

#include <cmath>

#include "rmhd/quadrature.hpp"

namespace rmhd {

std::vector<ConvergenceRow> run_convergence(const RunConfig& config, Exec exec) {
    const Problem1D prob = make_problem_1d(config);
    if (!prob.exact) fail(Errc::no_exact_solution, "preset has no exact solution");
    if (config.cells.empty()) fail(Errc::config_error, "convergence study needs a cell list");

    const Eos eos(prob.gamma);
    const auto& q = gauss_rule(5);
    std::vector<ConvergenceRow> rows;

    for (int n : config.cells) {
        Solve1DOptions opt;
        opt.scheme = config.scheme == SchemeKind::lxf1 ? Scheme1D::LxF1 : Scheme1D::Muscl2;
        opt.n_cells = n;
        opt.cfl = config.cfl;
        opt.eps = config.eps;
        opt.limiter_on = config.limiter_enabled;
        opt.exec = exec;
        const Run1DResult result = solve_1d(prob, opt);
        if (!result.completed)
            fail(Errc::not_admissible, "convergence run aborted: " + result.failure);

        const Grid1D& grid = result.snapshots.back().grid;
        const double t = result.snapshots.back().t;
        double l1 = 0.0, l2 = 0.0;
        for (int j = 0; j < grid.n_cells; ++j) {
            const double v2_num = recover_primitives(grid.cell(j), eos).primitives.v.y;
            // reference through the same averaging operator as the
            // initializer, so only the evolution error remains
            PrimitiveState avg;
            const double xl = grid.x0 + j * grid.dx;
            for (size_t g = 0; g < q.nodes.size(); ++g) {
                const double x = xl + 0.5 * grid.dx * (1.0 + q.nodes[g]);
                const PrimitiveState ve = prob.exact(x, t);
                const double w = 0.5 * q.weights[g];
                avg.rho += w * ve.rho;
                avg.v += w * ve.v;
                avg.B += w * ve.B;
                avg.p += w * ve.p;
            }
            const double v2_ex =
                recover_primitives(primitive_to_conserved(avg, eos), eos).primitives.v.y;
            const double diff = std::fabs(v2_num - v2_ex);
            l1 += diff * grid.dx;
            l2 += diff * diff * grid.dx;
        }
        ConvergenceRow row;
        row.n_cells = n;
        row.l1 = l1;
        row.l2 = std::sqrt(l2);
        if (!rows.empty()) {
            const double ratio = std::log2(static_cast<double>(n) / rows.back().n_cells);
            row.order_l1 = std::log2(rows.back().l1 / row.l1) / ratio;
            row.order_l2 = std::log2(rows.back().l2 / row.l2) / ratio;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace rmhd
