#ifndef RMHD_STATE_CORE_HPP
#define RMHD_STATE_CORE_HPP

#include <cstdint>
#include <utility>

#include "rmhd/error.hpp"
#include "rmhd/vec.hpp"

/* Special relativistic MHD state algebra (units with c = 1).
 *
 * Conservative vector  U = (D, m1, m2, m3, B1, B2, B3, E)
 *   D = rho*W                               mass density
 *   m = (rho*h*W^2 + |B|^2) v - (v.B) B     momentum density
 *   E = rho*h*W^2 - p_tot + |B|^2           energy density
 *
 * Primitive vector     V = (rho, v1, v2, v3, B1, B2, B3, p)
 *   W     = 1/sqrt(1 - |v|^2)               Lorentz factor
 *   h     = 1 + e + p/rho                   specific enthalpy
 *   p_m   = ((|B|/W)^2 + (v.B)^2)/2         magnetic pressure
 *   p_tot = p + p_m
 *
 * A state is admissible when rho > 0, p > 0 and |v| < 1.  Admissibility is
 * decided directly on U through the explicit constraints D > 0, q(U) > 0,
 * Psi(U) > 0; no nonlinear solve is needed for the test itself.
 */

namespace rmhd {

// Gamma-law equation of state, p = (Gamma - 1) rho e with Gamma in (1, 2].
class Eos {
  public:
    explicit Eos(double gamma) : gamma_(gamma) {
        if (!(gamma > 1.0) || !(gamma <= 2.0))
            fail(Errc::precondition_violated, "adiabatic index must be in (1, 2]");
    }
    double gamma() const { return gamma_; }
    // rho*h = rho + Gamma/(Gamma-1) * p
    double rho_enthalpy(double rho, double p) const { return rho + gamma_ / (gamma_ - 1.0) * p; }

  private:
    double gamma_;
};

struct PrimitiveState {
    double rho = 0.0;
    Vec3 v{};
    Vec3 B{};
    double p = 0.0;

    bool valid() const { return rho > 0.0 && p > 0.0 && norm2(v) < 1.0; }
    double lorentz() const { return 1.0 / std::sqrt(1.0 - norm2(v)); }
    double magnetic_pressure() const {
        const double w2inv = 1.0 - norm2(v);
        const double vb = dot(v, B);
        return 0.5 * (w2inv * norm2(B) + vb * vb);
    }
};

// May be inadmissible; admissibility is a predicate, not a type invariant.
struct ConservedState {
    double D = 0.0;
    Vec3 m{};
    Vec3 B{};
    double E = 0.0;

    // componentwise vector-space operations (also used for flux 8-vectors)
    ConservedState operator+(const ConservedState& o) const {
        return {D + o.D, m + o.m, B + o.B, E + o.E};
    }
    ConservedState operator-(const ConservedState& o) const {
        return {D - o.D, m - o.m, B - o.B, E - o.E};
    }
    ConservedState operator*(double s) const { return {D * s, m * s, B * s, E * s}; }
    ConservedState& operator+=(const ConservedState& o) {
        D += o.D; m += o.m; B += o.B; E += o.E;
        return *this;
    }
    bool operator==(const ConservedState& o) const = default;

    double operator[](int i) const {
        switch (i) {
            case 0: return D;
            case 1: return m.x;
            case 2: return m.y;
            case 3: return m.z;
            case 4: return B.x;
            case 5: return B.y;
            case 6: return B.z;
            default: return E;
        }
    }
};

inline ConservedState operator*(double s, const ConservedState& u) { return u * s; }

struct AdmissibilityReport {
    bool d_positive = false;
    double q_value = 0.0;
    // Psi(U) when q > 0; otherwise min(q_hat, q_tilde), which carries the
    // same sign information (Psi itself is undefined there).
    double psi_value = 0.0;
    bool admissible = false;
};

// q(U) = E - sqrt(D^2 + |m|^2); positive on every admissible state.
double q_fn(const ConservedState& u);

// Auxiliary polynomials in xi entering the admissibility analysis and the
// primitive recovery bracket.
enum class AuxPolynomial { Omega, Quartic4, Cubic3, Quad2 };

double eval_aux_polynomial(AuxPolynomial kind, double xi, const ConservedState& u);

struct AuxRoots {
    double xi_omega; // biggest nonnegative root of f_Omega; Omega_f = (xi_omega, inf)
    double xi_4;     // unique positive root of f_4
    double xi_3;     // unique positive root of f_3
    double xi_2R;    // right root of f_2, in closed form
};

// Requires D > 0 and q(U) > 0.  xi_4 and xi_3 are found by safeguarded
// bracketed bisection to relative tolerance 1e-14.
AuxRoots aux_roots(const ConservedState& u);

// phi = sqrt((|B|^2 - E)^2 + 3(E^2 - D^2 - |m|^2))
// psi = (phi - 2(|B|^2 - E)) sqrt(phi + |B|^2 - E)
//       - sqrt(27/2 (D^2 |B|^2 + (m.B)^2))
// Requires q(U) > 0 (makes the radicand nonnegative; tiny negative values
// from rounding are clamped to zero).
std::pair<double, double> psi_fn(const ConservedState& u);

// Polynomial-only reformulation of the Psi constraint: under D > 0, q > 0,
// Psi > 0 is equivalent to q_hat > 0 and q_tilde > 0.  Total functions.
std::pair<double, double> hat_tilde_q(const ConservedState& u);

// Explicit admissibility test: D > 0, q(U) > 0, Psi(U) > 0.
AdmissibilityReport is_admissible_first_form(const ConservedState& u);

// Epsilon-strengthened test: D >= eps, q >= eps, Psi(D, m, B, E - eps) >= 0.
bool is_admissible_eps(const ConservedState& u, double eps);

// Linear-constraint form: U.n* + p_m* with
//   n*   = (-sqrt(1-|v*|^2), -v*, -(1-|v*|^2)B* - (v*.B*)v*, 1)
//   p_m* = ((1-|v*|^2)|B*|^2 + (v*.B*)^2)/2
// Positive for every admissible U and every direction with |v*| < 1.
double second_form_margin(const ConservedState& u, const Vec3& v_star, const Vec3& b_star);

// U_lambda = (lambda D, lambda m, sqrt(lambda) B, lambda E); preserves
// admissibility for any lambda > 0.
ConservedState scale_state(const ConservedState& u, double lambda);

// Applies diag{1, T3, T3, 1}; T3 must be orthogonal to 1e-12.
ConservedState rotate_state(const ConservedState& u, const Mat3& t3);

ConservedState primitive_to_conserved(const PrimitiveState& v, const Eos& eos);

// The scalar equation f_U(xi) = 0 whose root xi* = rho h W^2 determines the
// primitives.  xi must lie in Omega_f so that W(xi) is real.
double eval_fU(double xi, const ConservedState& u, const Eos& eos);

// d f_U / d xi, valid on Omega_f; used to polish the bisection root.
double eval_fU_deriv(double xi, const ConservedState& u, const Eos& eos);

struct RecoveryResult {
    PrimitiveState primitives;
    double xi_star = 0.0;
};

// Inverts primitive_to_conserved for admissible U.  The root is bracketed in
// (max(xi_4, xi_omega), Gamma E] where f_U is strictly increasing.
RecoveryResult recover_primitives(const ConservedState& u, const Eos& eos);

// Internal entry point that skips the admissibility gate; kept public for
// the verification harness which probes states near the boundary.
RecoveryResult recover_primitives_unchecked(const ConservedState& u, const Eos& eos);

} // namespace rmhd

#endif
