#ifndef RMHD_PRESETS_HPP
#define RMHD_PRESETS_HPP

#include <optional>
#include <string>
#include <vector>

#include "rmhd/solver1d.hpp"
#include "rmhd/solver2d.hpp"

namespace rmhd {

enum class Preset { alfven1d, sine2d_init, rp1, rp2, rp3, rotor, blast, custom };
enum class SchemeKind { lxf1, muscl2_pcp, lxf2d };

Preset preset_from_string(const std::string& s);
SchemeKind scheme_from_string(const std::string& s);
const char* to_string(Preset p);
const char* to_string(SchemeKind s);

struct RunConfig {
    Preset preset = Preset::rp1;
    SchemeKind scheme = SchemeKind::lxf1;
    int n_cells = 200;
    int nx = 100, ny = 100;
    double cfl = 0.15;
    std::optional<double> t_final;  // preset default when unset
    double eps = 1e-13;
    bool limiter_enabled = true;    // eps: "off" in the config file
    std::optional<double> gamma;    // preset default when unset
    uint64_t seed = 20240711ULL;
    std::string output_dir = "out";
    std::vector<int> cells;         // convergence studies
    double rotor_alpha = 9.95;
    double blast_b = 0.1;
    // custom preset: a 1D Riemann problem
    PrimitiveState custom_left, custom_right;
    double custom_split = 0.0, custom_x_min = -0.5, custom_x_max = 0.5;
};

bool is_1d(Preset p);

// Periodically propagating circularly polarized wave; the exact solution of
// the smooth 1D accuracy test.  kappa = sqrt(1 + rho h W^2).
PrimitiveState alfven_exact(double x, double t, double gamma);

Problem1D make_problem_1d(const RunConfig& config);
Problem2D make_problem_2d(const RunConfig& config);

} // namespace rmhd

#endif
