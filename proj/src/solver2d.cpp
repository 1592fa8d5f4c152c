#include "rmhd/solver2d.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "rmhd/quadrature.hpp"

namespace rmhd {

namespace {

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

Grid2D::Grid2D(int nx_, int ny_, double dx_, double dy_, double x0_, double y0_)
    : nx(nx_), ny(ny_), dx(dx_), dy(dy_), x0(x0_), y0(y0_),
      data(static_cast<size_t>(nx_ + 2 * ghost) * (ny_ + 2 * ghost)) {
    if (nx_ < 4 || ny_ < 4) fail(Errc::precondition_violated, "Grid2D requires at least 4x4 cells");
    if (!(dx_ > 0.0) || !(dy_ > 0.0)) fail(Errc::precondition_violated, "Grid2D requires dx, dy > 0");
}

void Grid2D::apply_bc() {
    if ((bc_west == Bc2D::periodic) != (bc_east == Bc2D::periodic) ||
        (bc_south == Bc2D::periodic) != (bc_north == Bc2D::periodic))
        fail(Errc::precondition_violated, "periodic boundaries must be paired");

    for (int j = 0; j < ny; ++j)
        for (int g = 1; g <= ghost; ++g) {
            if (bc_west == Bc2D::periodic)
                cell(-g, j) = cell(nx - g, j);
            else if (bc_west == Bc2D::outflow)
                cell(-g, j) = cell(0, j);
            if (bc_east == Bc2D::periodic)
                cell(nx + g - 1, j) = cell(g - 1, j);
            else if (bc_east == Bc2D::outflow)
                cell(nx + g - 1, j) = cell(nx - 1, j);
        }
    // corners are filled from the already-extended rows
    for (int i = -ghost; i < nx + ghost; ++i)
        for (int g = 1; g <= ghost; ++g) {
            if (bc_south == Bc2D::periodic)
                cell(i, -g) = cell(i, ny - g);
            else if (bc_south == Bc2D::outflow)
                cell(i, -g) = cell(i, 0);
            if (bc_north == Bc2D::periodic)
                cell(i, ny + g - 1) = cell(i, g - 1);
            else if (bc_north == Bc2D::outflow)
                cell(i, ny + g - 1) = cell(i, ny - 1);
        }
}

double discrete_divergence(const Grid2D& grid, int i, int j) {
    if (i < 0 || i >= grid.nx || j < 0 || j >= grid.ny)
        fail(Errc::index_out_of_range, "discrete_divergence requires an interior cell");
    return (grid.cell(i + 1, j).B.x - grid.cell(i - 1, j).B.x) / (2.0 * grid.dx) +
           (grid.cell(i, j + 1).B.y - grid.cell(i, j - 1).B.y) / (2.0 * grid.dy);
}

double divergence_error_sup(const Grid2D& grid) {
    double sup = 0.0;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            sup = std::max(sup, std::fabs(discrete_divergence(grid, i, j)));
    return sup;
}

Grid2D init_cell_averages_2d(const std::function<PrimitiveState(double, double)>& initial,
                             int nx, int ny, double x_min, double x_max, double y_min,
                             double y_max, const Eos& eos, int quad_order) {
    Grid2D grid(nx, ny, (x_max - x_min) / nx, (y_max - y_min) / ny, x_min, y_min);
    const auto& q = gauss_rule(quad_order);
    const double dx = grid.dx, dy = grid.dy;

    auto area_average = [&](int i, int j) {
        const double xl = x_min + i * dx;
        const double yl = y_min + j * dy;
        PrimitiveState avg;
        for (size_t a = 0; a < q.nodes.size(); ++a)
            for (size_t b = 0; b < q.nodes.size(); ++b) {
                const double x = xl + 0.5 * dx * (1.0 + q.nodes[a]);
                const double y = yl + 0.5 * dy * (1.0 + q.nodes[b]);
                const double w = 0.25 * q.weights[a] * q.weights[b];
                const PrimitiveState v = initial(x, y);
                avg.rho += w * v.rho;
                avg.v += w * v.v;
                avg.B.z += w * v.B.z;
                avg.p += w * v.p;
            }
        return avg;
    };

    // line averages over [s - h, s + h] split into two panels of width h
    auto line_average = [&](double h, double s, const std::function<double(double)>& f) {
        double acc = 0.0;
        for (int panel = -1; panel <= 1; panel += 2)
            for (size_t g = 0; g < q.nodes.size(); ++g) {
                const double u = s + 0.5 * h * (panel + q.nodes[g]);
                acc += 0.25 * q.weights[g] * f(u); // (h/2 * w) / (2h)
            }
        return acc;
    };

    ErrorCapture ec;
    const int width = nx + 2 * Grid2D::ghost;
    const int height = ny + 2 * Grid2D::ghost;
    parallel_for(width * height, Exec::parallel, [&](int idx) {
        ec.guard([&] {
            const int i = idx % width - Grid2D::ghost;
            const int j = idx / width - Grid2D::ghost;
            PrimitiveState avg = area_average(i, j);
            const double xi = grid.x_center(i);
            const double yj = grid.y_center(j);
            avg.B.x = line_average(dy, yj, [&](double y) { return initial(xi, y).B.x; });
            avg.B.y = line_average(dx, xi, [&](double x) { return initial(x, yj).B.y; });
            grid.cell(i, j) = primitive_to_conserved(avg, eos);
        });
    });
    ec.rethrow();
    return grid;
}

Grid2D step_lxf_2d_unchecked(const Grid2D& grid, double dt, const Eos& eos, Exec exec) {
    if (!(dt * (1.0 / grid.dx + 1.0 / grid.dy) <= 1.0 + 1e-12))
        fail(Errc::cfl_too_large, "2D LxF scheme requires dt (1/dx + 1/dy) <= 1");
    Grid2D work = grid;
    work.apply_bc();
    const int nx = work.nx, ny = work.ny;
    const double lx = dt / work.dx, ly = dt / work.dy;

    // primitives for the interior plus one ghost ring
    const int pw = nx + 2, ph = ny + 2;
    std::vector<PrimitiveState> prim(static_cast<size_t>(pw) * ph);
    auto prim_at = [&](int i, int j) -> PrimitiveState& {
        return prim[static_cast<size_t>(j + 1) * pw + (i + 1)];
    };
    {
        ErrorCapture ec;
        parallel_for(pw * ph, exec, [&](int idx) {
            ec.guard([&] {
                const int i = idx % pw - 1;
                const int j = idx / pw - 1;
                prim_at(i, j) = recover_primitives(work.cell(i, j), eos).primitives;
            });
        });
        ec.rethrow();
    }

    Grid2D out = grid;
    parallel_for(nx * ny, exec, [&](int idx) {
        const int i = idx % nx;
        const int j = idx / nx;
        const ConservedState fe = lax_friedrichs_flux_from_primitives(
            work.cell(i, j), prim_at(i, j), work.cell(i + 1, j), prim_at(i + 1, j), 1.0, Axis(1));
        const ConservedState fw = lax_friedrichs_flux_from_primitives(
            work.cell(i - 1, j), prim_at(i - 1, j), work.cell(i, j), prim_at(i, j), 1.0, Axis(1));
        const ConservedState fn = lax_friedrichs_flux_from_primitives(
            work.cell(i, j), prim_at(i, j), work.cell(i, j + 1), prim_at(i, j + 1), 1.0, Axis(2));
        const ConservedState fs = lax_friedrichs_flux_from_primitives(
            work.cell(i, j - 1), prim_at(i, j - 1), work.cell(i, j), prim_at(i, j), 1.0, Axis(2));
        out.cell(i, j) = work.cell(i, j) - lx * (fe - fw) - ly * (fn - fs);
    });
    out.apply_bc();
    return out;
}

Grid2D step_lxf_2d(const Grid2D& grid, double dt, const Eos& eos, Exec exec) {
    Grid2D out = step_lxf_2d_unchecked(grid, dt, eos, exec);
    std::atomic<bool> bad{false};
    parallel_for(out.nx * out.ny, exec, [&](int idx) {
        if (!is_admissible_first_form(out.cell(idx % out.nx, idx / out.nx)).admissible)
            bad.store(true);
    });
    if (bad.load())
        fail(Errc::not_admissible,
             "2D LxF step produced an inadmissible average (divergence-free precondition violated?)");
    return out;
}

DivInOut div_in_out_diagnostics(const CellEdgeTraces& traces, const std::vector<double>& weights,
                                double dx, double dy) {
    const size_t q = weights.size();
    double wsum = 0.0;
    for (double w : weights) wsum += w;
    if (std::fabs(wsum - 1.0) > 1e-12)
        fail(Errc::weight_mismatch, "Gauss weights must sum to 1");
    const auto check = [&](const std::vector<double>& v) {
        if (v.size() != q) fail(Errc::weight_mismatch, "trace array size differs from weights");
    };
    check(traces.b1_east_in); check(traces.b1_east_out);
    check(traces.b1_west_in); check(traces.b1_west_out);
    check(traces.b2_north_in); check(traces.b2_north_out);
    check(traces.b2_south_in); check(traces.b2_south_out);

    DivInOut d;
    for (size_t g = 0; g < q; ++g) {
        d.div_in += weights[g] * ((traces.b1_east_in[g] - traces.b1_west_in[g]) / dx +
                                  (traces.b2_north_in[g] - traces.b2_south_in[g]) / dy);
        d.div_out += weights[g] * ((traces.b1_east_out[g] - traces.b1_west_out[g]) / dx +
                                   (traces.b2_north_out[g] - traces.b2_south_out[g]) / dy);
    }
    return d;
}

Run2DResult solve_2d(const Problem2D& problem, const Solve2DOptions& options) {
    Run2DResult result;
    const Eos eos(problem.gamma);
    Grid2D grid;
    try {
        grid = init_cell_averages_2d(problem.initial, options.nx, options.ny, problem.x_min,
                                     problem.x_max, problem.y_min, problem.y_max, eos,
                                     options.quad_order);
        grid.bc_west = grid.bc_east = problem.bc_x;
        grid.bc_south = grid.bc_north = problem.bc_y;
        grid.apply_bc();
    } catch (const Error& e) {
        result.failure = e.what();
        return result;
    }
    result.snapshots.push_back({0.0, grid});

    const double dt_base = options.cfl / (1.0 / grid.dx + 1.0 / grid.dy);
    double t = 0.0;
    long step = 0;
    while (t < problem.t_final * (1.0 - 1e-14) &&
           (options.max_steps == 0 || step < options.max_steps)) {
        double dt = std::min(dt_base, problem.t_final - t);
        StepLogRow2D row;
        try {
            grid = step_lxf_2d_unchecked(grid, dt, eos, options.exec);
            t += dt;
            ++step;

            std::vector<double> rho(grid.nx * grid.ny), pg(grid.nx * grid.ny),
                w(grid.nx * grid.ny);
            ErrorCapture ec;
            parallel_for(grid.nx * grid.ny, options.exec, [&](int idx) {
                ec.guard([&] {
                    const auto rec =
                        recover_primitives(grid.cell(idx % grid.nx, idx / grid.nx), eos);
                    rho[idx] = rec.primitives.rho;
                    pg[idx] = rec.primitives.p;
                    w[idx] = rec.primitives.lorentz();
                });
            });
            ec.rethrow();
            row = {step,
                   t,
                   dt,
                   divergence_error_sup(grid),
                   *std::min_element(rho.begin(), rho.end()),
                   *std::min_element(pg.begin(), pg.end()),
                   *std::max_element(w.begin(), w.end())};
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

GridTotals2D conserved_totals(const Grid2D& grid) {
    KahanSum d, mx, my, mz, e;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const ConservedState& u = grid.cell(i, j);
            d.add(u.D);
            mx.add(u.m.x);
            my.add(u.m.y);
            mz.add(u.m.z);
            e.add(u.E);
        }
    return {d.sum, {mx.sum, my.sum, mz.sum}, e.sum};
}

} // namespace rmhd
