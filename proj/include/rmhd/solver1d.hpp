#ifndef RMHD_SOLVER1D_HPP
#define RMHD_SOLVER1D_HPP

#include <functional>
#include <string>
#include <vector>

#include "rmhd/flux.hpp"
#include "rmhd/limiter.hpp"
#include "rmhd/parallel.hpp"
#include "rmhd/state_core.hpp"

namespace rmhd {

enum class Bc1D { periodic, outflow, dirichlet };

// Uniform 1D mesh of cell-average states with two ghost layers per side.
struct Grid1D {
    int n_cells = 0;
    double dx = 0.0;
    double x0 = 0.0; // left edge of the domain
    Bc1D bc = Bc1D::outflow;
    ConservedState dirichlet_left{};
    ConservedState dirichlet_right{};
    std::vector<ConservedState> data;

    static constexpr int ghost = 2;

    Grid1D() = default;
    Grid1D(int n, double dx_, double x0_, Bc1D bc_);

    ConservedState& cell(int j) { return data[static_cast<size_t>(j + ghost)]; }
    const ConservedState& cell(int j) const { return data[static_cast<size_t>(j + ghost)]; }
    double x_center(int j) const { return x0 + (j + 0.5) * dx; }

    void apply_bc();
};

enum class Scheme1D { LxF1, Muscl2 };

// dt = cfl * dx (c = 1), clipped so t + dt never overshoots t_final.
// LxF1 admits cfl <= 1, Muscl2 cfl <= 1/2 (the Gauss-Lobatto endpoint weight).
double compute_dt(const Grid1D& grid, double cfl, Scheme1D scheme, double t = 0.0,
                  double t_final = std::numeric_limits<double>::infinity());

// One forward-Euler step of the first-order LxF scheme.  Output averages are
// verified admissible (guaranteed by the scheme under dt <= dx and constant
// B1); the _unchecked variant skips that verification.
Grid1D step_lxf_1d(const Grid1D& grid, double dt, const Eos& eos, Exec exec = Exec::parallel);
Grid1D step_lxf_1d_unchecked(const Grid1D& grid, double dt, const Eos& eos,
                             Exec exec = Exec::parallel);

// Minmod-limited linear traces of the conservative variables.  Entry k holds
// the traces of cell j = k - 1 (one ghost cell per side included):
// left  = value at the cell's left edge  (the interface's + side),
// right = value at the cell's right edge (the interface's - side).
struct MusclTraces {
    std::vector<ConservedState> left;
    std::vector<ConservedState> right;
};
MusclTraces reconstruct_muscl(const Grid1D& grid);

struct MusclStepStats {
    long limited_cells = 0; // cells with any limiter theta < 1, summed over RK stages
};

// One SSP-RK3 step of the second-order MUSCL scheme.  Every stage applies the
// PCP limiter to the endpoint traces of each cell (pass limiter_on = false to
// reproduce the failure mode of the raw scheme).
Grid1D step_muscl_pcp_1d(const Grid1D& grid, double dt, const Eos& eos, double eps,
                         bool limiter_on = true, Exec exec = Exec::parallel,
                         MusclStepStats* stats = nullptr);

struct StepLogRow1D {
    long step = 0;
    double t = 0.0, dt = 0.0;
    double min_rho = 0.0, min_p = 0.0, max_abs_v = 0.0;
    long limiter_activations = 0;
};

struct Snapshot1D {
    double t = 0.0;
    Grid1D grid;
};

struct Run1DResult {
    std::vector<Snapshot1D> snapshots; // initial and final states
    std::vector<StepLogRow1D> log;
    bool completed = false;
    long failed_step = -1;
    std::string failure;
    long recovery_failures = 0;
};

struct Problem1D {
    double x_min = 0.0, x_max = 1.0;
    double t_final = 0.0;
    double gamma = 5.0 / 3.0;
    Bc1D bc = Bc1D::outflow;
    std::function<PrimitiveState(double)> initial;                 // x -> V
    std::function<PrimitiveState(double, double)> exact;           // (x, t) -> V, smooth only
};

struct Solve1DOptions {
    Scheme1D scheme = Scheme1D::LxF1;
    int n_cells = 200;
    double cfl = 0.15;
    double eps = 1e-13;
    bool limiter_on = true;
    Exec exec = Exec::parallel;
    long max_steps = 0; // 0: run to t_final
};

// Advances a problem to its final time, recording per-step admissibility
// statistics; aborts (completed = false) on the first inadmissible average
// or recovery failure.
Run1DResult solve_1d(const Problem1D& problem, const Solve1DOptions& options);

// Cell averages of the initial primitives by composite Gauss quadrature,
// converted cellwise; ghosts included (dirichlet keeps them frozen).
Grid1D init_cell_averages_1d(const Problem1D& problem, int n_cells, int quad_order = 5);

// Kahan-compensated totals of the conserved quantities over interior cells.
struct GridTotals {
    double D = 0.0;
    Vec3 m{};
    double E = 0.0;
};
GridTotals conserved_totals(const Grid1D& grid);

} // namespace rmhd

#endif
