#include "rmhd/state_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rmhd {

namespace {

constexpr double kRootRelTol = 1e-14;
constexpr int kRootMaxIter = 200;
// below this |B|^2 the B = 0 closed-form roots are used (avoids 0/0 in the
// |B| != 0 bracketing quantities)
constexpr double kTinyB2 = 1e-300;

double sqr(double x) { return x * x; }

// Bisection for a function known to be <= 0 at lo and > 0 at hi, with the
// sign change unique in [lo, hi].
template <typename F>
double bisect(F&& f, double lo, double hi) {
    for (int it = 0; it < kRootMaxIter && (hi - lo) > kRootRelTol * std::fabs(hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // interval at rounding resolution
        if (f(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double f_omega(double xi, double b2, double m2, double mb2) {
    return sqr(xi) * sqr(xi + b2) - (sqr(xi) * m2 + (2.0 * xi + b2) * mb2);
}

double phi_squared(const ConservedState& u) {
    const double b2 = norm2(u.B);
    return sqr(b2 - u.E) + 3.0 * (sqr(u.E) - sqr(u.D) - norm2(u.m));
}

// Psi for a state already known to satisfy q >= 0; radicands that round
// below zero are clamped (the analysis shows they are nonnegative exactly).
double psi_raw(const ConservedState& u) {
    const double b2 = norm2(u.B);
    const double mb = dot(u.m, u.B);
    const double phi = std::sqrt(std::max(phi_squared(u), 0.0));
    const double radicand = std::max(phi + b2 - u.E, 0.0);
    return (phi - 2.0 * (b2 - u.E)) * std::sqrt(radicand) -
           std::sqrt(13.5 * (sqr(u.D) * b2 + sqr(mb)));
}

double xi_omega_root(const ConservedState& u) {
    const double b2 = norm2(u.B);
    const double am = norm(u.m);
    if (b2 < kTinyB2) return am;
    const double mb = dot(u.m, u.B);
    if (mb == 0.0) return std::max(0.0, am - b2);

    const double zeta0 = std::fabs(mb) / std::sqrt(b2);
    if (f_omega(zeta0, b2, norm2(u.m), sqr(mb)) > 0.0) return zeta0; // m parallel to B edge
    double hi = zeta0 + b2 + am + 1.0;
    while (f_omega(hi, b2, norm2(u.m), sqr(mb)) <= 0.0) hi *= 2.0;
    return bisect([&](double xi) { return f_omega(xi, b2, norm2(u.m), sqr(mb)); }, zeta0, hi);
}

double xi4_root(const ConservedState& u) {
    const double b2 = norm2(u.B);
    if (b2 < kTinyB2) return std::sqrt(sqr(u.D) + norm2(u.m));
    const double mb = dot(u.m, u.B);
    const double xi0 = std::sqrt(sqr(u.D) + sqr(mb) / b2);
    auto f4 = [&](double xi) { return eval_aux_polynomial(AuxPolynomial::Quartic4, xi, u); };
    if (f4(xi0) > 0.0) return xi0;
    double hi = xi0 + b2 + norm(u.m) + 1.0;
    while (f4(hi) <= 0.0) hi *= 2.0;
    return bisect(f4, xi0, hi);
}

double xi3_root(const ConservedState& u) {
    const double b2 = norm2(u.B);
    if (b2 < kTinyB2) return u.E;
    auto f3 = [&](double xi) { return eval_aux_polynomial(AuxPolynomial::Cubic3, xi, u); };
    const double c = 0.5 * (b2 * sqr(u.D) + sqr(dot(u.m, u.B)));
    double lo = std::cbrt(c);
    while (f3(lo) >= 0.0) lo *= 0.5; // f_3 -> -c < 0 as xi -> 0+
    double hi = std::max(u.E - b2, 0.0) + std::cbrt(c) + 1.0;
    while (f3(hi) <= 0.0) hi *= 2.0;
    return bisect(f3, lo, hi);
}

} // namespace

double q_fn(const ConservedState& u) {
    return u.E - std::sqrt(sqr(u.D) + norm2(u.m));
}

double eval_aux_polynomial(AuxPolynomial kind, double xi, const ConservedState& u) {
    const double b2 = norm2(u.B);
    const double m2 = norm2(u.m);
    const double mb2 = sqr(dot(u.m, u.B));
    switch (kind) {
        case AuxPolynomial::Omega:
            return f_omega(xi, b2, m2, mb2);
        case AuxPolynomial::Quartic4:
            return f_omega(xi, b2, m2, mb2) - sqr(u.D) * sqr(xi + b2);
        case AuxPolynomial::Cubic3:
            return xi * xi * (xi + (b2 - u.E)) - 0.5 * (b2 * sqr(u.D) + mb2);
        case AuxPolynomial::Quad2:
        default:
            return 3.0 * sqr(xi) + 4.0 * (b2 - u.E) * xi + sqr(b2) + sqr(u.D) + m2 -
                   2.0 * b2 * u.E;
    }
}

AuxRoots aux_roots(const ConservedState& u) {
    if (!(u.D > 0.0) || !(q_fn(u) > 0.0))
        fail(Errc::precondition_violated, "aux_roots requires D > 0 and q(U) > 0");
    const double b2 = norm2(u.B);
    const double phi = std::sqrt(std::max(phi_squared(u), 0.0));
    return AuxRoots{xi_omega_root(u), xi4_root(u), xi3_root(u), (phi - 2.0 * (b2 - u.E)) / 3.0};
}

std::pair<double, double> psi_fn(const ConservedState& u) {
    if (!(q_fn(u) > 0.0)) fail(Errc::precondition_violated, "psi_fn requires q(U) > 0");
    const double phi = std::sqrt(std::max(phi_squared(u), 0.0));
    return {phi, psi_raw(u)};
}

std::pair<double, double> hat_tilde_q(const ConservedState& u) {
    const double b2 = norm2(u.B);
    const double eb = u.E - b2;
    const double phi2 = phi_squared(u);
    const double inner = eb * eb * eb + 13.5 * (b2 * sqr(u.D) + sqr(dot(u.m, u.B))) -
                         9.0 * (sqr(u.E) - sqr(u.D) - norm2(u.m)) * eb;
    // q_tilde = Phi^6 - (...)^2 involves only even powers of Phi, so it stays
    // real even where Phi itself is not; q_hat has no real value there and is
    // reported as -inf (the constraint cannot hold).
    const double q_tilde = phi2 * phi2 * phi2 - sqr(inner);
    const double q_hat = phi2 >= 0.0 ? std::sqrt(phi2) + 2.0 * eb
                                     : -std::numeric_limits<double>::infinity();
    return {q_hat, q_tilde};
}

AdmissibilityReport is_admissible_first_form(const ConservedState& u) {
    AdmissibilityReport r;
    r.d_positive = u.D > 0.0;
    r.q_value = q_fn(u);
    if (r.q_value > 0.0) {
        r.psi_value = psi_raw(u);
    } else {
        const auto [q_hat, q_tilde] = hat_tilde_q(u);
        r.psi_value = std::min(q_hat, q_tilde);
    }
    r.admissible = r.d_positive && r.q_value > 0.0 && r.psi_value > 0.0;
    return r;
}

bool is_admissible_eps(const ConservedState& u, double eps) {
    if (!(u.D >= eps)) return false;
    if (!(q_fn(u) >= eps)) return false;
    ConservedState shifted = u;
    shifted.E -= eps;
    return psi_raw(shifted) >= 0.0;
}

double second_form_margin(const ConservedState& u, const Vec3& v_star, const Vec3& b_star) {
    const double vs2 = norm2(v_star);
    if (!(vs2 < 1.0)) fail(Errc::invalid_direction, "|v*| must be < 1");
    const double vb = dot(v_star, b_star);
    const double pm_star = 0.5 * ((1.0 - vs2) * norm2(b_star) + sqr(vb));
    return u.E - u.D * std::sqrt(1.0 - vs2) - dot(u.m, v_star) -
           dot(u.B, (1.0 - vs2) * b_star + vb * v_star) + pm_star;
}

ConservedState scale_state(const ConservedState& u, double lambda) {
    if (!(lambda > 0.0)) fail(Errc::nonpositive_scale, "scale factor must be positive");
    return {lambda * u.D, lambda * u.m, std::sqrt(lambda) * u.B, lambda * u.E};
}

ConservedState rotate_state(const ConservedState& u, const Mat3& t3) {
    if (t3.orthogonality_defect() > 1e-12)
        fail(Errc::not_orthogonal, "T3 is not orthogonal to 1e-12");
    return {u.D, t3 * u.m, t3 * u.B, u.E};
}

ConservedState primitive_to_conserved(const PrimitiveState& v, const Eos& eos) {
    if (!v.valid())
        fail(Errc::invalid_primitive, "primitive state requires rho > 0, p > 0, |v| < 1");
    const double w2 = 1.0 / (1.0 - norm2(v.v));
    const double rhohw2 = eos.rho_enthalpy(v.rho, v.p) * w2;
    const double vb = dot(v.v, v.B);
    const double b2 = norm2(v.B);
    ConservedState u;
    u.D = v.rho * std::sqrt(w2);
    u.m = (rhohw2 + b2) * v.v - vb * v.B;
    u.E = rhohw2 - (v.p + 0.5 * (b2 / w2 + sqr(vb))) + b2;
    u.B = v.B;
    return u;
}

double eval_fU(double xi, const ConservedState& u, const Eos& eos) {
    const double b2 = norm2(u.B);
    const double mb = dot(u.m, u.B);
    const double fom = f_omega(xi, b2, norm2(u.m), sqr(mb));
    if (!(fom > 0.0)) fail(Errc::outside_domain, "xi outside Omega_f");
    const double w2inv = fom / (sqr(xi) * sqr(xi + b2));
    const double winv = std::sqrt(w2inv);
    const double g = eos.gamma();
    return xi - (g - 1.0) / g * (xi * w2inv - u.D * winv) + b2 -
           0.5 * (b2 * w2inv + sqr(mb) / sqr(xi)) - u.E;
}

double eval_fU_deriv(double xi, const ConservedState& u, const Eos& eos) {
    const double b2 = norm2(u.B);
    const double m2 = norm2(u.m);
    const double mb2 = sqr(dot(u.m, u.B));
    const double fom = f_omega(xi, b2, m2, mb2);
    if (!(fom > 0.0)) fail(Errc::outside_domain, "xi outside Omega_f");
    const double w2inv = fom / (sqr(xi) * sqr(xi + b2));
    const double winv = std::sqrt(w2inv);
    // W'/W^3 is the rounding-robust combination entering every term
    const double wp_w3 = -(mb2 * (3.0 * sqr(xi) + 3.0 * xi * b2 + sqr(b2)) + m2 * xi * sqr(xi)) /
                         (xi * sqr(xi) * sqr(xi + b2) * (xi + b2));
    const double cap_xi = 1.0 + b2 * wp_w3 + mb2 / (xi * sqr(xi));
    const double g = eos.gamma();
    // W' = W^3 * wp_w3; 1/W = winv, so W'/W^2 = wp_w3 / winv
    return cap_xi - (g - 1.0) / g * (w2inv - 2.0 * xi * wp_w3 + u.D * wp_w3 / winv);
}

RecoveryResult recover_primitives_unchecked(const ConservedState& u, const Eos& eos) {
    const double b2 = norm2(u.B);
    const double mb = dot(u.m, u.B);
    const double gamma = eos.gamma();

    const double xi_om = xi_omega_root(u);
    const double xi4 = xi4_root(u);
    double lo = std::max(xi4, xi_om * (1.0 + 1e-15));
    double hi = gamma * u.E;
    if (!(hi > lo)) fail(Errc::no_convergence, "empty recovery bracket");
    for (int k = 0; k < 8 && eval_fU(hi, u, eos) <= 0.0; ++k) hi *= 2.0;

    // safeguarded Newton within the monotone bracket, narrowed to a few ulps
    // of the root itself (the primitives are read off functions of xi whose
    // conditioning follows the relative, not absolute, xi error)
    double x = 0.5 * (lo + hi);
    double fx = eval_fU(x, u, eos);
    const double res_tol = 1e-12 * std::max(1.0, std::fabs(u.E));
    int it = 0;
    for (; it < 500; ++it) {
        if (fx <= 0.0)
            lo = x;
        else
            hi = x;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * lo) break;
        const double dfx = eval_fU_deriv(x, u, eos);
        double x_next = dfx != 0.0 ? x - fx / dfx : 0.5 * (lo + hi);
        if (!(x_next > lo) || !(x_next < hi)) x_next = 0.5 * (lo + hi);
        if (x_next == x) break;
        x = x_next;
        fx = eval_fU(x, u, eos);
    }
    if (it >= 500 && std::fabs(fx) > res_tol)
        fail(Errc::no_convergence, "xi iteration exhausted without meeting residual tolerance");

    const double w2inv = std::min(
        f_omega(x, b2, norm2(u.m), sqr(mb)) / (sqr(x) * sqr(x + b2)), 1.0);
    const double w = 1.0 / std::sqrt(w2inv);
    RecoveryResult out;
    out.xi_star = x;
    out.primitives.v = (u.m + (mb / x) * u.B) / (x + b2);
    out.primitives.B = u.B;
    out.primitives.rho = u.D / w;
    out.primitives.p = (gamma - 1.0) / gamma * w2inv * (x - u.D * w);
    return out;
}

RecoveryResult recover_primitives(const ConservedState& u, const Eos& eos) {
    if (!is_admissible_first_form(u).admissible)
        fail(Errc::not_admissible, "cannot recover primitives of an inadmissible state");
    return recover_primitives_unchecked(u, eos);
}

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::invalid_primitive: return "InvalidPrimitive";
        case Errc::outside_domain: return "OutsideDomain";
        case Errc::precondition_violated: return "PreconditionViolated";
        case Errc::not_admissible: return "NotAdmissible";
        case Errc::no_convergence: return "NoConvergence";
        case Errc::nonpositive_scale: return "NonpositiveScale";
        case Errc::not_orthogonal: return "NotOrthogonal";
        case Errc::invalid_direction: return "InvalidDirection";
        case Errc::not_unit_normal: return "NotUnitNormal";
        case Errc::cfl_too_large: return "CflTooLarge";
        case Errc::average_not_admissible: return "AverageNotAdmissible";
        case Errc::index_out_of_range: return "IndexOutOfRange";
        case Errc::weight_mismatch: return "WeightMismatch";
        case Errc::constraint_infeasible: return "ConstraintInfeasible";
        case Errc::no_exact_solution: return "NoExactSolution";
        case Errc::config_error: return "ConfigError";
    }
    return "Error";
}

} // namespace rmhd
