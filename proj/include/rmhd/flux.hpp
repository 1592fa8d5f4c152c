#ifndef RMHD_FLUX_HPP
#define RMHD_FLUX_HPP

#include "rmhd/state_core.hpp"

namespace rmhd {

// Coordinate direction of a physical flux, 1-based as in F_1, F_2, F_3.
class Axis {
  public:
    explicit Axis(int index) : index_(index) {
        if (index < 1 || index > 3) fail(Errc::precondition_violated, "axis index must be 1..3");
    }
    int index() const { return index_; }

  private:
    int index_;
};

// F_i(U) = (D v_i, v_i m - B_i (W^-2 B + (v.B) v) + p_tot e_i, v_i B - B_i v, m_i)
// evaluated from already-recovered primitives.  The B_i component of F_i is
// identically zero.
ConservedState physical_flux_from_primitives(const ConservedState& u, const PrimitiveState& v,
                                             Axis axis);

// Recovers the primitives internally; requires an admissible state.
ConservedState physical_flux(const ConservedState& u, const Eos& eos, Axis axis);

// F_hat_i(U-, U+) = (F_i(U-) + F_i(U+) - rho (U+ - U-)) / 2 with rho >= 1 an
// upper bound of the spectral radius (rho = c = 1 suffices).
ConservedState lax_friedrichs_flux(const ConservedState& u_minus, const ConservedState& u_plus,
                                   double rho_spectral, const Eos& eos, Axis axis);

ConservedState lax_friedrichs_flux_from_primitives(const ConservedState& u_minus,
                                                   const PrimitiveState& v_minus,
                                                   const ConservedState& u_plus,
                                                   const PrimitiveState& v_plus,
                                                   double rho_spectral, Axis axis);

// Edge-normal flux F_1(U) N1 + F_2(U) N2 for a unit in-plane normal.
ConservedState rotated_flux(const ConservedState& u, const Eos& eos, double n1, double n2);

// Same quantity computed as T^-1 F_1(T U) with the rotation
// T = diag{1, T3, T3, 1}, T3 = [[N1, N2, 0], [-N2, N1, 0], [0, 0, 1]];
// agrees with rotated_flux to rounding (rotational invariance).
ConservedState rotated_flux_via_rotation(const ConservedState& u, const Eos& eos, double n1,
                                         double n2);

} // namespace rmhd

#endif
