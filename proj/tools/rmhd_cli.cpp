// Experiment driver: problem presets, convergence studies, and the property
// verification suite.  All numerics live in the library; this is a thin
// shell around it (config in, CSV/JSON out, exit codes for scripting).
//
// Exit codes: 0 success, 1 config error, 2 admissibility failure during a
// run, 3 verification-suite failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "rmhd/convergence.hpp"
#include "rmhd/io.hpp"
#include "rmhd/parallel.hpp"
#include "rmhd/presets.hpp"
#include "rmhd/verify.hpp"

namespace fs = std::filesystem;
using namespace rmhd;

namespace {

void apply_thread_settings(int threads_flag) {
    if (const char* env = std::getenv("RMHD_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            set_thread_count(n);
            return;
        }
    }
    if (threads_flag > 0) set_thread_count(threads_flag);
}

int cmd_run(const std::string& config_path) {
    RunConfig config;
    try {
        config = parse_config_file(config_path);
    } catch (const Error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    }

    try {
        fs::create_directories(config.output_dir);
        const std::string base = config.output_dir + "/" + to_string(config.preset);

        if (config.scheme == SchemeKind::lxf2d) {
            if (is_1d(config.preset)) fail(Errc::config_error, "lxf2d needs a 2D preset");
            const Problem2D prob = make_problem_2d(config);
            const Eos eos(prob.gamma);
            Solve2DOptions opt;
            opt.nx = config.nx;
            opt.ny = config.ny;
            opt.cfl = config.cfl;
            const Run2DResult result = solve_2d(prob, opt);
            if (!result.snapshots.empty())
                write_snapshot_csv(base + "_initial.csv", result.snapshots.front().grid, eos);
            write_step_log_csv(base + "_log.csv", result.log);
            if (!result.completed) {
                std::fprintf(stderr, "admissibility failure at step %ld: %s\n",
                             result.failed_step, result.failure.c_str());
                return 2;
            }
            write_snapshot_csv(base + "_final.csv", result.snapshots.back().grid, eos);
            std::printf("completed %zu steps to t = %s; outputs in %s\n", result.log.size(),
                        format17(result.snapshots.back().t).c_str(), config.output_dir.c_str());
        } else {
            if (!is_1d(config.preset)) fail(Errc::config_error, "1D scheme needs a 1D preset");
            const Problem1D prob = make_problem_1d(config);
            const Eos eos(prob.gamma);
            Solve1DOptions opt;
            opt.scheme = config.scheme == SchemeKind::lxf1 ? Scheme1D::LxF1 : Scheme1D::Muscl2;
            opt.n_cells = config.n_cells;
            opt.cfl = config.cfl;
            opt.eps = config.eps;
            opt.limiter_on = config.limiter_enabled;
            const Run1DResult result = solve_1d(prob, opt);
            if (!result.snapshots.empty())
                write_snapshot_csv(base + "_initial.csv", result.snapshots.front().grid, eos);
            write_step_log_csv(base + "_log.csv", result.log);
            if (!result.completed) {
                std::fprintf(stderr, "admissibility failure at step %ld: %s\n",
                             result.failed_step, result.failure.c_str());
                return 2;
            }
            write_snapshot_csv(base + "_final.csv", result.snapshots.back().grid, eos);
            std::printf("completed %zu steps to t = %s; outputs in %s\n", result.log.size(),
                        format17(result.snapshots.back().t).c_str(), config.output_dir.c_str());
        }
    } catch (const Error& e) {
        if (e.code() == Errc::config_error) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 1;
        }
        std::fprintf(stderr, "admissibility failure: %s\n", e.what());
        return 2;
    }
    return 0;
}

int cmd_convergence(const std::string& config_path) {
    try {
        RunConfig config = parse_config_file(config_path);
        if (config.cells.empty() && config.n_cells >= 4) config.cells = {config.n_cells};
        const auto rows = run_convergence(config);
        std::printf("%8s %16s %16s %8s %8s\n", "N", "l1_error", "l2_error", "l1_ord", "l2_ord");
        for (size_t k = 0; k < rows.size(); ++k) {
            if (k == 0)
                std::printf("%8d %16.8e %16.8e %8s %8s\n", rows[k].n_cells, rows[k].l1,
                            rows[k].l2, "-", "-");
            else
                std::printf("%8d %16.8e %16.8e %8.3f %8.3f\n", rows[k].n_cells, rows[k].l1,
                            rows[k].l2, rows[k].order_l1, rows[k].order_l2);
        }
        fs::create_directories(config.output_dir);
        write_convergence_csv(config.output_dir + "/convergence.csv", rows);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

int cmd_verify(uint64_t seed, long trials, const std::string& report_path) {
    if (trials <= 0) {
        std::fprintf(stderr, "config error: trials must be positive\n");
        return 1;
    }
    const long glf_trials = std::min<long>(trials, 1000);

    std::vector<TrialReport> reports;
    reports.push_back(check_key_inequality(trials, Extremity::mild, seed));
    reports.push_back(check_key_inequality(trials, Extremity::ultra, seed));
    reports.push_back(counterexample_lxf());
    reports.push_back(counterexample_2d_scheme());
    reports.push_back(check_glf_splitting(SplitDim::d1, glf_trials, seed));
    reports.push_back(check_glf_splitting(SplitDim::d2, glf_trials, seed));
    reports.push_back(check_glf_splitting(SplitDim::d3, glf_trials, seed));
    reports.push_back(check_glf_splitting(SplitDim::polygon, glf_trials, seed));
    for (auto& r : check_set_properties(trials, seed)) reports.push_back(std::move(r));

    bool all_pass = true;
    for (const auto& r : reports) {
        const bool expected_trigger = r.name.rfind("counterexample", 0) == 0;
        std::printf("%-4s %-28s trials=%-6ld failures=%-4ld worst_margin=% .3e seed=%llu%s\n",
                    r.passed() ? "PASS" : "FAIL", r.name.c_str(), r.trials, r.failures,
                    r.worst_margin, static_cast<unsigned long long>(r.seed),
                    expected_trigger ? "  [expected-fail-of-admissibility: must trigger]" : "");
        all_pass = all_pass && r.passed();
    }
    try {
        write_verify_report_json(report_path, reports);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    std::printf("%s (%zu properties, report: %s)\n", all_pass ? "ALL PASS" : "FAILURES PRESENT",
                reports.size(), report_path.c_str());
    return all_pass ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"physical-constraints-preserving RMHD solver and verification harness"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker thread count (RMHD_THREADS overrides)");

    std::string run_config, conv_config;
    auto* run = app.add_subcommand("run", "run a solver preset from a JSON config");
    run->add_option("config", run_config, "path to config.json")->required();

    auto* conv = app.add_subcommand("convergence", "mesh-refinement accuracy study");
    conv->add_option("config", conv_config, "path to config.json")->required();

    uint64_t seed = 20240711ULL;
    long trials = 10000;
    std::string report_path = "verify_report.json";
    auto* verify = app.add_subcommand("verify", "run the property verification suite");
    verify->add_option("--seed", seed, "master RNG seed");
    verify->add_option("--trials", trials, "trials per property");
    verify->add_option("--output", report_path, "report JSON path");

    CLI11_PARSE(app, argc, argv);
    apply_thread_settings(threads);

    if (run->parsed()) return cmd_run(run_config);
    if (conv->parsed()) return cmd_convergence(conv_config);
    return cmd_verify(seed, trials, report_path);
}
