#include "rmhd/solver1d.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "rmhd/quadrature.hpp"

namespace rmhd {

namespace {

double minmod(double a, double b) {
    if (a > 0.0 && b > 0.0) return std::min(a, b);
    if (a < 0.0 && b < 0.0) return std::max(a, b);
    return 0.0;
}

// monotonized-central slope: zero at extrema, the centered difference where
// the data allow it (plain minmod clips smooth extrema down to order ~1.5)
double mc_slope(double dm, double dp) {
    return minmod(0.5 * (dm + dp), 1.7 * minmod(dm, dp));
}

ConservedState mc_slope(const ConservedState& dm, const ConservedState& dp) {
    return {mc_slope(dm.D, dp.D),
            {mc_slope(dm.m.x, dp.m.x), mc_slope(dm.m.y, dp.m.y), mc_slope(dm.m.z, dp.m.z)},
            {mc_slope(dm.B.x, dp.B.x), mc_slope(dm.B.y, dp.B.y), mc_slope(dm.B.z, dp.B.z)},
            mc_slope(dm.E, dp.E)};
}

// Kahan-compensated accumulator for the conservation diagnostics.
struct KahanSum {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

} // namespace

Grid1D::Grid1D(int n, double dx_, double x0_, Bc1D bc_)
    : n_cells(n), dx(dx_), x0(x0_), bc(bc_), data(static_cast<size_t>(n) + 2 * ghost) {
    if (n < 4) fail(Errc::precondition_violated, "Grid1D requires at least 4 cells");
    if (!(dx_ > 0.0)) fail(Errc::precondition_violated, "Grid1D requires dx > 0");
}

void Grid1D::apply_bc() {
    const int n = n_cells;
    switch (bc) {
        case Bc1D::periodic:
            for (int g = 1; g <= ghost; ++g) {
                cell(-g) = cell(n - g);
                cell(n + g - 1) = cell(g - 1);
            }
            break;
        case Bc1D::outflow:
            for (int g = 1; g <= ghost; ++g) {
                cell(-g) = cell(0);
                cell(n + g - 1) = cell(n - 1);
            }
            break;
        case Bc1D::dirichlet:
            for (int g = 1; g <= ghost; ++g) {
                cell(-g) = dirichlet_left;
                cell(n + g - 1) = dirichlet_right;
            }
            break;
    }
}

double compute_dt(const Grid1D& grid, double cfl, Scheme1D scheme, double t, double t_final) {
    const double cap = scheme == Scheme1D::LxF1 ? 1.0 : 0.5;
    if (!(cfl > 0.0) || cfl > cap)
        fail(Errc::cfl_too_large, "cfl must lie in (0, " + std::to_string(cap) + "]");
    double dt = cfl * grid.dx;
    if (t + dt > t_final) dt = t_final - t;
    return dt;
}

namespace {

// Recovers primitives for cells [-1, n+1) into prim[j + 1].
std::vector<PrimitiveState> recover_band(const Grid1D& grid, const Eos& eos, Exec exec) {
    const int n = grid.n_cells;
    std::vector<PrimitiveState> prim(static_cast<size_t>(n) + 2);
    ErrorCapture ec;
    parallel_for(n + 2, exec, [&](int k) {
        ec.guard([&] { prim[k] = recover_primitives(grid.cell(k - 1), eos).primitives; });
    });
    ec.rethrow();
    return prim;
}

} // namespace

Grid1D step_lxf_1d_unchecked(const Grid1D& grid, double dt, const Eos& eos, Exec exec) {
    if (!(dt <= grid.dx * (1.0 + 1e-12)))
        fail(Errc::cfl_too_large, "first-order LxF scheme requires dt <= dx");
    Grid1D work = grid;
    work.apply_bc();
    const int n = work.n_cells;
    const double lambda = dt / work.dx;

    const auto prim = recover_band(work, eos, exec);
    std::vector<ConservedState> fhat(static_cast<size_t>(n) + 1);
    parallel_for(n + 1, exec, [&](int i) {
        fhat[i] = lax_friedrichs_flux_from_primitives(work.cell(i - 1), prim[i], work.cell(i),
                                                      prim[i + 1], 1.0, Axis(1));
    });

    Grid1D out = grid;
    parallel_for(n, exec, [&](int j) { out.cell(j) = work.cell(j) - lambda * (fhat[j + 1] - fhat[j]); });
    out.apply_bc();
    return out;
}

Grid1D step_lxf_1d(const Grid1D& grid, double dt, const Eos& eos, Exec exec) {
    Grid1D out = step_lxf_1d_unchecked(grid, dt, eos, exec);
    std::atomic<bool> bad{false};
    parallel_for(out.n_cells, exec, [&](int j) {
        if (!is_admissible_first_form(out.cell(j)).admissible) bad.store(true);
    });
    if (bad.load())
        fail(Errc::not_admissible, "LxF step produced an inadmissible average (precondition violated)");
    return out;
}

MusclTraces reconstruct_muscl(const Grid1D& grid) {
    Grid1D work = grid;
    work.apply_bc();
    const int n = work.n_cells;
    MusclTraces tr;
    tr.left.resize(static_cast<size_t>(n) + 2);
    tr.right.resize(static_cast<size_t>(n) + 2);
    for (int k = 0; k < n + 2; ++k) {
        const int j = k - 1;
        const ConservedState delta =
            mc_slope(work.cell(j) - work.cell(j - 1), work.cell(j + 1) - work.cell(j));
        tr.left[k] = work.cell(j) - 0.5 * delta;
        tr.right[k] = work.cell(j) + 0.5 * delta;
    }
    return tr;
}

namespace {

Grid1D muscl_euler_stage(const Grid1D& grid, double dt, const Eos& eos, double eps,
                         bool limiter_on, Exec exec, std::atomic<long>* limited) {
    Grid1D work = grid;
    work.apply_bc();
    const int n = work.n_cells;
    const double lambda = dt / work.dx;

    MusclTraces tr = reconstruct_muscl(work);

    if (limiter_on) {
        ErrorCapture ec;
        parallel_for(n + 2, exec, [&](int k) {
            ec.guard([&] {
                auto [limited_data, thetas] =
                    pcp_limit({work.cell(k - 1), {tr.left[k], tr.right[k]}}, eps);
                tr.left[k] = limited_data.node_values[0];
                tr.right[k] = limited_data.node_values[1];
                const int j = k - 1;
                if (limited && j >= 0 && j < n && thetas.active())
                    limited->fetch_add(1, std::memory_order_relaxed);
            });
        });
        ec.rethrow();
    }

    std::vector<PrimitiveState> prim_left(tr.left.size()), prim_right(tr.right.size());
    {
        ErrorCapture ec;
        parallel_for(n + 2, exec, [&](int k) {
            ec.guard([&] {
                prim_left[k] = recover_primitives(tr.left[k], eos).primitives;
                prim_right[k] = recover_primitives(tr.right[k], eos).primitives;
            });
        });
        ec.rethrow();
    }

    std::vector<ConservedState> fhat(static_cast<size_t>(n) + 1);
    parallel_for(n + 1, exec, [&](int i) {
        fhat[i] = lax_friedrichs_flux_from_primitives(tr.right[i], prim_right[i], tr.left[i + 1],
                                                      prim_left[i + 1], 1.0, Axis(1));
    });

    Grid1D out = grid;
    parallel_for(n, exec, [&](int j) { out.cell(j) = work.cell(j) - lambda * (fhat[j + 1] - fhat[j]); });
    out.apply_bc();
    return out;
}

} // namespace

Grid1D step_muscl_pcp_1d(const Grid1D& grid, double dt, const Eos& eos, double eps,
                         bool limiter_on, Exec exec, MusclStepStats* stats) {
    if (!(dt <= 0.5 * grid.dx * (1.0 + 1e-12)))
        fail(Errc::cfl_too_large, "MUSCL scheme requires dt <= dx/2");
    std::atomic<long> limited{0};
    std::atomic<long>* counter = stats ? &limited : nullptr;

    // SSP-RK3: convex combination of three forward-Euler stages
    const Grid1D u1 = muscl_euler_stage(grid, dt, eos, eps, limiter_on, exec, counter);
    Grid1D u2 = muscl_euler_stage(u1, dt, eos, eps, limiter_on, exec, counter);
    parallel_for(grid.n_cells, exec,
                 [&](int j) { u2.cell(j) = 0.75 * grid.cell(j) + 0.25 * u2.cell(j); });
    u2.apply_bc();
    Grid1D out = muscl_euler_stage(u2, dt, eos, eps, limiter_on, exec, counter);
    parallel_for(grid.n_cells, exec, [&](int j) {
        out.cell(j) = (1.0 / 3.0) * grid.cell(j) + (2.0 / 3.0) * out.cell(j);
    });
    out.apply_bc();

    if (stats) stats->limited_cells += limited.load();
    return out;
}

Grid1D init_cell_averages_1d(const Problem1D& problem, int n_cells, int quad_order) {
    const double dx = (problem.x_max - problem.x_min) / n_cells;
    Grid1D grid(n_cells, dx, problem.x_min, problem.bc);
    const Eos eos(problem.gamma);
    const auto& q = gauss_rule(quad_order);

    auto cell_average = [&](int j) {
        const double xl = grid.x0 + j * dx;
        PrimitiveState avg;
        for (size_t g = 0; g < q.nodes.size(); ++g) {
            const double x = xl + 0.5 * dx * (1.0 + q.nodes[g]);
            const PrimitiveState v = problem.initial(x);
            const double w = 0.5 * q.weights[g];
            avg.rho += w * v.rho;
            avg.v += w * v.v;
            avg.B += w * v.B;
            avg.p += w * v.p;
        }
        return avg;
    };

    for (int j = -Grid1D::ghost; j < n_cells + Grid1D::ghost; ++j)
        grid.cell(j) = primitive_to_conserved(cell_average(j), eos);
    grid.dirichlet_left = grid.cell(-1);
    grid.dirichlet_right = grid.cell(n_cells);
    grid.apply_bc();
    return grid;
}

Run1DResult solve_1d(const Problem1D& problem, const Solve1DOptions& options) {
    Run1DResult result;
    const Eos eos(problem.gamma);
    Grid1D grid = init_cell_averages_1d(problem, options.n_cells);
    result.snapshots.push_back({0.0, grid});

    double t = 0.0;
    long step = 0;
    while (t < problem.t_final * (1.0 - 1e-14) &&
           (options.max_steps == 0 || step < options.max_steps)) {
        double dt = 0.0;
        MusclStepStats stats;
        try {
            dt = compute_dt(grid, options.cfl, options.scheme, t, problem.t_final);
            grid = options.scheme == Scheme1D::LxF1
                       ? step_lxf_1d_unchecked(grid, dt, eos, options.exec)
                       : step_muscl_pcp_1d(grid, dt, eos, options.eps, options.limiter_on,
                                           options.exec, &stats);
        } catch (const Error& e) {
            result.failed_step = step;
            result.failure = e.what();
            if (e.code() == Errc::no_convergence) ++result.recovery_failures;
            return result;
        }
        t += dt;
        ++step;

        // admissibility assertion and per-step statistics in one pass
        StepLogRow1D row{step, t, dt, 0.0, 0.0, 0.0, stats.limited_cells};
        try {
            const auto prim = recover_band(grid, eos, options.exec);
            double min_rho = prim[1].rho, min_p = prim[1].p, max_v = 0.0;
            for (int j = 0; j < grid.n_cells; ++j) {
                min_rho = std::min(min_rho, prim[j + 1].rho);
                min_p = std::min(min_p, prim[j + 1].p);
                max_v = std::max(max_v, norm(prim[j + 1].v));
            }
            row.min_rho = min_rho;
            row.min_p = min_p;
            row.max_abs_v = max_v;
        } catch (const Error& e) {
            result.failed_step = step;
            result.failure = e.what();
            if (e.code() == Errc::no_convergence) ++result.recovery_failures;
            return result;
        }
        result.log.push_back(row);
    }

    if (step > 0) result.snapshots.push_back({t, grid});
    result.completed = true;
    return result;
}

GridTotals conserved_totals(const Grid1D& grid) {
    KahanSum d, mx, my, mz, e;
    for (int j = 0; j < grid.n_cells; ++j) {
        const ConservedState& u = grid.cell(j);
        d.add(u.D);
        mx.add(u.m.x);
        my.add(u.m.y);
        mz.add(u.m.z);
        e.add(u.E);
    }
    return {d.sum, {mx.sum, my.sum, mz.sum}, e.sum};
}

} // namespace rmhd
