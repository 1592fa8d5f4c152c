#ifndef RMHD_IO_HPP
#define RMHD_IO_HPP

#include <string>
#include <vector>

#include "rmhd/convergence.hpp"
#include "rmhd/presets.hpp"
#include "rmhd/verify.hpp"

namespace rmhd {

// JSON config file with flat keys matching the RunConfig fields; eps accepts
// a number or "off" (limiter disabled).
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_json(const std::string& text);

// All CSV output carries a header row and 17-significant-digit doubles.
std::string format17(double x);

void write_snapshot_csv(const std::string& path, const Grid1D& grid, const Eos& eos);
void write_step_log_csv(const std::string& path, const std::vector<StepLogRow1D>& log);
void write_snapshot_csv(const std::string& path, const Grid2D& grid, const Eos& eos);
void write_step_log_csv(const std::string& path, const std::vector<StepLogRow2D>& log);
void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows);
void write_verify_report_json(const std::string& path, const std::vector<TrialReport>& reports);

} // namespace rmhd

#endif
