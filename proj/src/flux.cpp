#include "rmhd/flux.hpp"

#include <cmath>

namespace rmhd {

ConservedState physical_flux_from_primitives(const ConservedState& u, const PrimitiveState& v,
                                             Axis axis) {
    const int i = axis.index() - 1;
    const double w2inv = 1.0 - norm2(v.v);
    const double vb = dot(v.v, v.B);
    const double p_tot = v.p + 0.5 * (w2inv * norm2(v.B) + vb * vb);
    const double vi = v.v[i];
    const double bi = v.B[i];

    ConservedState f;
    f.D = u.D * vi;
    f.m = vi * u.m - bi * (w2inv * v.B + vb * v.v);
    f.m[i] += p_tot;
    f.B = vi * v.B - bi * v.v; // component i cancels exactly
    f.E = u.m[i];
    return f;
}

ConservedState physical_flux(const ConservedState& u, const Eos& eos, Axis axis) {
    const auto rec = recover_primitives(u, eos);
    return physical_flux_from_primitives(u, rec.primitives, axis);
}

ConservedState lax_friedrichs_flux_from_primitives(const ConservedState& u_minus,
                                                   const PrimitiveState& v_minus,
                                                   const ConservedState& u_plus,
                                                   const PrimitiveState& v_plus,
                                                   double rho_spectral, Axis axis) {
    const ConservedState fm = physical_flux_from_primitives(u_minus, v_minus, axis);
    const ConservedState fp = physical_flux_from_primitives(u_plus, v_plus, axis);
    return 0.5 * (fm + fp - rho_spectral * (u_plus - u_minus));
}

ConservedState lax_friedrichs_flux(const ConservedState& u_minus, const ConservedState& u_plus,
                                   double rho_spectral, const Eos& eos, Axis axis) {
    if (!(rho_spectral >= 1.0))
        fail(Errc::precondition_violated, "spectral radius bound must be >= c = 1");
    const auto rm = recover_primitives(u_minus, eos);
    const auto rp = recover_primitives(u_plus, eos);
    return lax_friedrichs_flux_from_primitives(u_minus, rm.primitives, u_plus, rp.primitives,
                                               rho_spectral, axis);
}

namespace {

void check_unit_normal(double n1, double n2) {
    if (std::fabs(n1 * n1 + n2 * n2 - 1.0) > 1e-12)
        fail(Errc::not_unit_normal, "(N1, N2) must be a unit vector");
}

} // namespace

ConservedState rotated_flux(const ConservedState& u, const Eos& eos, double n1, double n2) {
    check_unit_normal(n1, n2);
    const auto rec = recover_primitives(u, eos);
    const ConservedState f1 = physical_flux_from_primitives(u, rec.primitives, Axis(1));
    const ConservedState f2 = physical_flux_from_primitives(u, rec.primitives, Axis(2));
    return n1 * f1 + n2 * f2;
}

ConservedState rotated_flux_via_rotation(const ConservedState& u, const Eos& eos, double n1,
                                         double n2) {
    check_unit_normal(n1, n2);
    Mat3 t3;
    t3.a[0][0] = n1;  t3.a[0][1] = n2; t3.a[0][2] = 0.0;
    t3.a[1][0] = -n2; t3.a[1][1] = n1; t3.a[1][2] = 0.0;
    t3.a[2][0] = 0.0; t3.a[2][1] = 0.0; t3.a[2][2] = 1.0;
    const ConservedState rotated = rotate_state(u, t3);
    const ConservedState f1 = physical_flux(rotated, eos, Axis(1));
    return rotate_state(f1, t3.transposed());
}

} // namespace rmhd
