// Throughput comparison of the serial reference kernels against the OpenMP
// paths: primitive recovery, the 1D MUSCL step, and the 2D LxF step.
//
//   rmhd_bench [cells_1d] [cells_2d_per_side] [reps]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "rmhd/parallel.hpp"
#include "rmhd/presets.hpp"
#include "rmhd/solver1d.hpp"
#include "rmhd/solver2d.hpp"
#include "rmhd/verify.hpp"

using namespace rmhd;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock_type::now();
        f();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

void report(const char* name, double n_items, double serial_s, double parallel_s) {
    std::printf("%-22s %12.3e items/s serial   %12.3e items/s omp   speedup %.2fx\n", name,
                n_items / serial_s, n_items / parallel_s, serial_s / parallel_s);
}

} // namespace

int main(int argc, char** argv) {
    const int n1d = argc > 1 ? std::atoi(argv[1]) : 4096;
    const int n2d = argc > 2 ? std::atoi(argv[2]) : 192;
    const int reps = argc > 3 ? std::atoi(argv[3]) : 5;
    const Eos eos(5.0 / 3.0);

    std::printf("threads available: %d\n", hardware_threads());

    // recovery throughput on a mixed batch of admissible states
    {
        const int n = 200000;
        std::vector<ConservedState> states(n);
        for (int k = 0; k < n; ++k) {
            TrialRng rng(7u, static_cast<uint64_t>(k));
            states[k] = sample_admissible(rng, k % 2 ? Extremity::ultra : Extremity::mild, eos);
        }
        std::vector<double> out(n);
        auto pass = [&](Exec exec) {
            parallel_for(n, exec,
                         [&](int k) { out[k] = recover_primitives(states[k], eos).primitives.p; });
        };
        const double ts = time_best_of(reps, [&] { pass(Exec::serial); });
        const double tp = time_best_of(reps, [&] { pass(Exec::parallel); });
        report("recover_primitives", n, ts, tp);
    }

    // one SSP-RK3 MUSCL step on the smooth 1D problem
    {
        RunConfig config;
        config.preset = Preset::alfven1d;
        const Problem1D prob = make_problem_1d(config);
        const Grid1D grid = init_cell_averages_1d(prob, n1d);
        const double dt = compute_dt(grid, 0.15, Scheme1D::Muscl2);
        const double ts =
            time_best_of(reps, [&] { step_muscl_pcp_1d(grid, dt, eos, 1e-13, true, Exec::serial); });
        const double tp = time_best_of(
            reps, [&] { step_muscl_pcp_1d(grid, dt, eos, 1e-13, true, Exec::parallel); });
        report("step_muscl_pcp_1d", n1d, ts, tp);
    }

    // one 2D LxF step on the rotor
    {
        RunConfig config;
        config.preset = Preset::rotor;
        const Problem2D prob = make_problem_2d(config);
        Grid2D grid = init_cell_averages_2d(prob.initial, n2d, n2d, prob.x_min, prob.x_max,
                                            prob.y_min, prob.y_max, eos);
        grid.apply_bc();
        const double dt = 0.15 / (1.0 / grid.dx + 1.0 / grid.dy);
        const double ts = time_best_of(reps, [&] { step_lxf_2d(grid, dt, eos, Exec::serial); });
        const double tp = time_best_of(reps, [&] { step_lxf_2d(grid, dt, eos, Exec::parallel); });
        report("step_lxf_2d", static_cast<double>(n2d) * n2d, ts, tp);
    }

    return 0;
}
