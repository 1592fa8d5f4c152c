#ifndef RMHD_CONVERGENCE_HPP
#define RMHD_CONVERGENCE_HPP

#include <vector>

#include "rmhd/presets.hpp"

namespace rmhd {

struct ConvergenceRow {
    int n_cells = 0;
    double l1 = 0.0, l2 = 0.0;
    double order_l1 = 0.0, order_l2 = 0.0; // log2 ratio against the previous row
};

// Runs the configured scheme on each mesh of config.cells and measures the
// l1/l2 errors of the transverse velocity v2 against the preset's exact
// solution at t_final.  Requires a smooth preset (NoExactSolution otherwise).
std::vector<ConvergenceRow> run_convergence(const RunConfig& config, Exec exec = Exec::parallel);

} // namespace rmhd

#endif
