#include "rmhd/presets.hpp"

#include <cmath>

namespace rmhd {

Preset preset_from_string(const std::string& s) {
    if (s == "alfven1d") return Preset::alfven1d;
    if (s == "sine2d-init") return Preset::sine2d_init;
    if (s == "rp1") return Preset::rp1;
    if (s == "rp2") return Preset::rp2;
    if (s == "rp3") return Preset::rp3;
    if (s == "rotor") return Preset::rotor;
    if (s == "blast") return Preset::blast;
    if (s == "custom") return Preset::custom;
    fail(Errc::config_error, "unknown preset '" + s + "'");
}

SchemeKind scheme_from_string(const std::string& s) {
    if (s == "lxf1") return SchemeKind::lxf1;
    if (s == "muscl2-pcp") return SchemeKind::muscl2_pcp;
    if (s == "lxf2d") return SchemeKind::lxf2d;
    fail(Errc::config_error, "unknown scheme '" + s + "'");
}

const char* to_string(Preset p) {
    switch (p) {
        case Preset::alfven1d: return "alfven1d";
        case Preset::sine2d_init: return "sine2d-init";
        case Preset::rp1: return "rp1";
        case Preset::rp2: return "rp2";
        case Preset::rp3: return "rp3";
        case Preset::rotor: return "rotor";
        case Preset::blast: return "blast";
        case Preset::custom: return "custom";
    }
    return "?";
}

const char* to_string(SchemeKind s) {
    switch (s) {
        case SchemeKind::lxf1: return "lxf1";
        case SchemeKind::muscl2_pcp: return "muscl2-pcp";
        case SchemeKind::lxf2d: return "lxf2d";
    }
    return "?";
}

bool is_1d(Preset p) {
    return p == Preset::alfven1d || p == Preset::rp1 || p == Preset::rp2 || p == Preset::rp3 ||
           p == Preset::custom;
}

PrimitiveState alfven_exact(double x, double t, double gamma) {
    const double amp = 0.99;
    const double rho = 1.0, p = 0.01;
    const double w2 = 1.0 / (1.0 - amp * amp); // |v|^2 = amp^2 at every point
    const double rhoh = rho + gamma / (gamma - 1.0) * p;
    const double kappa = std::sqrt(1.0 + rhoh * w2);
    const double phase = 2.0 * M_PI * (x + t / kappa);
    PrimitiveState v;
    v.rho = rho;
    v.p = p;
    v.v = {0.0, amp * std::sin(phase), amp * std::cos(phase)};
    v.B = {1.0, kappa * v.v.y, kappa * v.v.z};
    return v;
}

namespace {

PrimitiveState riemann_state(double rho, double v1, double b1, double b2, double b3, double p) {
    PrimitiveState v;
    v.rho = rho;
    v.v = {v1, 0.0, 0.0};
    v.B = {b1, b2, b3};
    v.p = p;
    return v;
}

struct RiemannData {
    PrimitiveState left, right;
};

RiemannData riemann_preset(Preset p) {
    switch (p) {
        case Preset::rp1:
            return {riemann_state(1, 0, 5, 26, 26, 30), riemann_state(1, 0, 5, 0.7, 0.7, 1)};
        case Preset::rp2:
            return {riemann_state(1, 0, 10, 7, 7, 1e4), riemann_state(1, 0, 10, 0.7, 0.7, 1e-8)};
        case Preset::rp3:
        default:
            return {riemann_state(1, 0.99999, 100, 70, 70, 0.1),
                    riemann_state(1, -0.99999, 100, -70, -70, 0.1)};
    }
}

} // namespace

Problem1D make_problem_1d(const RunConfig& config) {
    Problem1D prob;
    prob.gamma = config.gamma.value_or(5.0 / 3.0);

    switch (config.preset) {
        case Preset::alfven1d: {
            prob.x_min = 0.0;
            prob.x_max = 1.0;
            prob.bc = Bc1D::periodic;
            prob.t_final = config.t_final.value_or(1.0);
            const double gamma = prob.gamma;
            prob.initial = [gamma](double x) { return alfven_exact(x, 0.0, gamma); };
            prob.exact = [gamma](double x, double t) { return alfven_exact(x, t, gamma); };
            break;
        }
        case Preset::rp1:
        case Preset::rp2:
        case Preset::rp3: {
            const RiemannData data = riemann_preset(config.preset);
            prob.x_min = -0.5;
            prob.x_max = 0.5;
            prob.bc = Bc1D::outflow;
            prob.t_final = config.t_final.value_or(0.4);
            prob.initial = [data](double x) { return x < 0.0 ? data.left : data.right; };
            break;
        }
        case Preset::custom: {
            prob.x_min = config.custom_x_min;
            prob.x_max = config.custom_x_max;
            prob.bc = Bc1D::outflow;
            prob.t_final = config.t_final.value_or(0.4);
            const PrimitiveState left = config.custom_left, right = config.custom_right;
            const double split = config.custom_split;
            prob.initial = [=](double x) { return x < split ? left : right; };
            break;
        }
        default:
            fail(Errc::config_error, std::string("preset '") + to_string(config.preset) +
                                         "' is not a 1D problem");
    }
    return prob;
}

Problem2D make_problem_2d(const RunConfig& config) {
    Problem2D prob;

    switch (config.preset) {
        case Preset::sine2d_init: {
            prob.x_min = prob.y_min = 0.0;
            prob.x_max = prob.y_max = 1.0;
            prob.bc_x = prob.bc_y = Bc2D::periodic;
            prob.gamma = config.gamma.value_or(5.0 / 3.0);
            prob.t_final = config.t_final.value_or(0.2);
            prob.initial = [](double x, double y) {
                PrimitiveState v;
                v.rho = 1.0 + 0.99999999 * std::sin(2.0 * M_PI * (x + y));
                v.v = {0.9, 0.2, 0.0};
                v.B = {1.0, 1.0, 1.0};
                v.p = 0.01;
                return v;
            };
            break;
        }
        case Preset::rotor: {
            prob.x_min = prob.y_min = -0.5;
            prob.x_max = prob.y_max = 0.5;
            prob.bc_x = prob.bc_y = Bc2D::outflow;
            prob.gamma = config.gamma.value_or(5.0 / 3.0);
            prob.t_final = config.t_final.value_or(0.1);
            const double alpha = config.rotor_alpha;
            prob.initial = [alpha](double x, double y) {
                const double r = std::hypot(x, y);
                PrimitiveState v;
                v.B = {1.0, 0.0, 0.0};
                v.p = 1.0;
                if (r < 0.1) {
                    v.rho = 10.0;
                    v.v = {-alpha * y, alpha * x, 0.0};
                } else if (r <= 0.115) {
                    // speed tapers linearly from the rim value alpha * 0.1
                    // down to zero at r = 0.115
                    const double delta = (0.115 - r) / 0.015;
                    v.rho = 1.0 + 9.0 * delta;
                    const double v_phi = alpha * 0.1 * delta;
                    v.v = {-v_phi * y / r, v_phi * x / r, 0.0};
                } else {
                    v.rho = 1.0;
                }
                return v;
            };
            break;
        }
        case Preset::blast: {
            prob.x_min = prob.y_min = -6.0;
            prob.x_max = prob.y_max = 6.0;
            prob.bc_x = prob.bc_y = Bc2D::outflow;
            prob.gamma = config.gamma.value_or(4.0 / 3.0);
            prob.t_final = config.t_final.value_or(0.5);
            const double ba = config.blast_b;
            prob.initial = [ba](double x, double y) {
                const double r = std::hypot(x, y);
                const double rho_in = 1e-2, p_in = 1.0;
                const double rho_out = 1e-4, p_out = 5e-4;
                PrimitiveState v;
                v.B = {ba, 0.0, 0.0};
                if (r < 0.8) {
                    v.rho = rho_in;
                    v.p = p_in;
                } else if (r <= 1.0) {
                    const double s = (r - 0.8) / 0.2; // linear taper
                    v.rho = rho_in + s * (rho_out - rho_in);
                    v.p = p_in + s * (p_out - p_in);
                } else {
                    v.rho = rho_out;
                    v.p = p_out;
                }
                return v;
            };
            break;
        }
        default:
            fail(Errc::config_error, std::string("preset '") + to_string(config.preset) +
                                         "' is not a 2D problem");
    }
    return prob;
}

} // namespace rmhd
