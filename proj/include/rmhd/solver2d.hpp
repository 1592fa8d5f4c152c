#ifndef RMHD_SOLVER2D_HPP
#define RMHD_SOLVER2D_HPP

#include <functional>
#include <string>
#include <vector>

#include "rmhd/flux.hpp"
#include "rmhd/parallel.hpp"
#include "rmhd/state_core.hpp"

namespace rmhd {

enum class Bc2D { periodic, outflow, dirichlet };

// Uniform rectangular mesh of cell-average states, two ghost layers per side.
// Periodic sides must be paired; dirichlet ghosts stay frozen at their
// initialization values.
struct Grid2D {
    int nx = 0, ny = 0;
    double dx = 0.0, dy = 0.0;
    double x0 = 0.0, y0 = 0.0;
    Bc2D bc_west = Bc2D::outflow, bc_east = Bc2D::outflow;
    Bc2D bc_south = Bc2D::outflow, bc_north = Bc2D::outflow;
    std::vector<ConservedState> data;

    static constexpr int ghost = 2;

    Grid2D() = default;
    Grid2D(int nx_, int ny_, double dx_, double dy_, double x0_, double y0_);

    ConservedState& cell(int i, int j) {
        return data[static_cast<size_t>(j + ghost) * (nx + 2 * ghost) + (i + ghost)];
    }
    const ConservedState& cell(int i, int j) const {
        return data[static_cast<size_t>(j + ghost) * (nx + 2 * ghost) + (i + ghost)];
    }
    double x_center(int i) const { return x0 + (i + 0.5) * dx; }
    double y_center(int j) const { return y0 + (j + 0.5) * dy; }

    void apply_bc();
};

// Central-difference divergence of the cell-average magnetic field:
// ((B1)_{i+1,j} - (B1)_{i-1,j}) / (2 dx) + ((B2)_{i,j+1} - (B2)_{i,j-1}) / (2 dy).
double discrete_divergence(const Grid2D& grid, int i, int j);

// Sup-norm of discrete_divergence over the interior.
double divergence_error_sup(const Grid2D& grid);

// Cell averages of the initial primitives (rho, v, B3, p over the cell area;
// B1 line-averaged over x = x_i, y in [y_{j-1}, y_{j+1}]; B2 over the
// transposed segment).  Exactly solenoidal initial fields give a discrete
// divergence at quadrature-exactness level.
Grid2D init_cell_averages_2d(const std::function<PrimitiveState(double, double)>& initial,
                             int nx, int ny, double x_min, double x_max, double y_min,
                             double y_max, const Eos& eos, int quad_order = 5);

// One forward-Euler step of the 2D LxF scheme under dt (1/dx + 1/dy) <= 1.
// The checked variant verifies all updated averages; when the input grid is
// not discretely divergence-free the update can leave the admissible set
// (that failure mode is itself exercised in the tests).
Grid2D step_lxf_2d(const Grid2D& grid, double dt, const Eos& eos, Exec exec = Exec::parallel);
Grid2D step_lxf_2d_unchecked(const Grid2D& grid, double dt, const Eos& eos,
                             Exec exec = Exec::parallel);

// Interface-quadrature divergence diagnostics of one cell's edge traces.
// in: traces taken from within the cell; out: traces from the neighbors.
struct CellEdgeTraces {
    std::vector<double> b1_east_in, b1_east_out; // B1 at x_{i+1/2} Gauss points
    std::vector<double> b1_west_in, b1_west_out; // B1 at x_{i-1/2}
    std::vector<double> b2_north_in, b2_north_out; // B2 at y_{j+1/2}
    std::vector<double> b2_south_in, b2_south_out; // B2 at y_{j-1/2}
};

struct DivInOut {
    double div_in = 0.0;
    double div_out = 0.0;
};

DivInOut div_in_out_diagnostics(const CellEdgeTraces& traces, const std::vector<double>& weights,
                                double dx, double dy);

struct StepLogRow2D {
    long step = 0;
    double t = 0.0, dt = 0.0;
    double e_inf = 0.0; // sup-norm discrete divergence
    double min_rho = 0.0, min_p = 0.0, max_lorentz = 0.0;
};

struct Snapshot2D {
    double t = 0.0;
    Grid2D grid;
};

struct Run2DResult {
    std::vector<Snapshot2D> snapshots;
    std::vector<StepLogRow2D> log;
    bool completed = false;
    long failed_step = -1;
    std::string failure;
    long recovery_failures = 0;
};

struct Problem2D {
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    double t_final = 0.0;
    double gamma = 5.0 / 3.0;
    Bc2D bc_x = Bc2D::outflow; // west/east pair
    Bc2D bc_y = Bc2D::outflow; // south/north pair
    std::function<PrimitiveState(double, double)> initial;
};

struct Solve2DOptions {
    int nx = 100, ny = 100;
    double cfl = 0.15;
    Exec exec = Exec::parallel;
    long max_steps = 0;
    int quad_order = 5;
};

// First-order LxF evolution with per-step admissibility and divergence
// diagnostics; dt = cfl / (1/dx + 1/dy) clipped to land on t_final.
Run2DResult solve_2d(const Problem2D& problem, const Solve2DOptions& options);

struct GridTotals2D {
    double D = 0.0;
    Vec3 m{};
    double E = 0.0;
};
GridTotals2D conserved_totals(const Grid2D& grid);

} // namespace rmhd

#endif
