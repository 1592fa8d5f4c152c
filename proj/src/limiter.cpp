#include "rmhd/limiter.hpp"

#include <algorithm>
#include <cmath>

namespace rmhd {

namespace {

// Third G_eps constraint in isolation: Psi(D, m, B, E - eps) >= 0, with the
// shifted state required to keep q nonnegative for Psi to make sense.
bool psi_eps_ok(const ConservedState& u, double eps) {
    if (!(q_fn(u) - eps >= 0.0)) return false;
    ConservedState shifted = u;
    shifted.E -= eps;
    const double b2 = norm2(shifted.B);
    const double phi2 = std::max(
        (b2 - shifted.E) * (b2 - shifted.E) +
            3.0 * (shifted.E * shifted.E - shifted.D * shifted.D - norm2(shifted.m)),
        0.0);
    const double phi = std::sqrt(phi2);
    const double radicand = std::max(phi + b2 - shifted.E, 0.0);
    const double mb = dot(shifted.m, shifted.B);
    const double psi = (phi - 2.0 * (b2 - shifted.E)) * std::sqrt(radicand) -
                       std::sqrt(13.5 * (shifted.D * shifted.D * b2 + mb * mb));
    return psi >= 0.0;
}

ConservedState blend(const ConservedState& average, const ConservedState& node, double t) {
    return (1.0 - t) * average + t * node;
}

} // namespace

double solve_theta(const ConservedState& average, const ConservedState& candidate, double eps) {
    if (!psi_eps_ok(average, eps))
        fail(Errc::precondition_violated, "solve_theta requires Psi_eps(average) >= 0");
    if (psi_eps_ok(candidate, eps))
        fail(Errc::precondition_violated, "solve_theta requires Psi_eps(candidate) < 0");
    double lo = 0.0; // admissible side
    double hi = 1.0;
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (psi_eps_ok(blend(average, candidate, mid), eps))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

std::pair<CellNodeData, LimiterThetas> pcp_limit(const CellNodeData& data, double eps) {
    const ConservedState& avg = data.average;
    const double eps_psi = eps * std::max(1.0, std::fabs(avg.E));
    const double q_avg = q_fn(avg);
    if (!(avg.D >= eps) || !(q_avg >= eps) || !psi_eps_ok(avg, eps_psi))
        fail(Errc::average_not_admissible, "cell average is outside the strengthened set");

    CellNodeData out = data;
    LimiterThetas thetas;

    // Step (i): density
    double d_min = avg.D;
    for (const auto& u : out.node_values) d_min = std::min(d_min, u.D);
    if (d_min < eps) {
        const double denom = avg.D - d_min;
        thetas.theta1 = denom > 0.0 ? (avg.D - eps) / denom : 0.0;
        for (auto& u : out.node_values) u.D = thetas.theta1 * (u.D - avg.D) + avg.D;
    }

    // Step (ii): q(U); B is left untouched
    double q_min = q_avg;
    for (const auto& u : out.node_values) q_min = std::min(q_min, q_fn(u));
    if (q_min < eps) {
        const double denom = q_avg - q_min;
        thetas.theta2 = denom > 0.0 ? (q_avg - eps) / denom : 0.0;
        for (auto& u : out.node_values) {
            u.D = thetas.theta2 * (u.D - avg.D) + avg.D;
            u.m = thetas.theta2 * (u.m - avg.m) + avg.m;
            u.E = thetas.theta2 * (u.E - avg.E) + avg.E;
        }
    }

    // Step (iii): Psi_eps, one scalar theta for the whole cell
    double theta3 = 1.0;
    for (const auto& u : out.node_values)
        if (!psi_eps_ok(u, eps_psi)) theta3 = std::min(theta3, solve_theta(avg, u, eps_psi));
    if (theta3 < 1.0) {
        thetas.theta3 = theta3;
        for (auto& u : out.node_values) u = blend(avg, u, theta3);
    }

    return {std::move(out), thetas};
}

} // namespace rmhd
