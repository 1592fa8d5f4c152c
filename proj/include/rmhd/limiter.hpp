#ifndef RMHD_LIMITER_HPP
#define RMHD_LIMITER_HPP

#include <vector>

#include "rmhd/state_core.hpp"

namespace rmhd {

/* PCP limiter: scales the check-node values of a cell's polynomial data
 * toward the (admissible) cell average until every node value lies in the
 * eps-strengthened admissible set.  Three stages:
 *
 *   (i)   density:   D_hat = theta1 (D - Dbar) + Dbar         (D only)
 *   (ii)  q(U):      scales D, m, E toward the average, B untouched
 *   (iii) Psi_eps:   scales the full state, theta3 from the scalar root of
 *                    Psi_eps((1 - t) Ubar + t U_node) = 0
 *
 * The cell average is preserved exactly and the limiter is the identity on
 * data already inside the set (all thetas = 1).
 */

struct CellNodeData {
    ConservedState average;
    std::vector<ConservedState> node_values;
};

struct LimiterThetas {
    double theta1 = 1.0;
    double theta2 = 1.0;
    double theta3 = 1.0;
    bool active() const { return theta1 < 1.0 || theta2 < 1.0 || theta3 < 1.0; }
};

// eps guards the D and q constraints; the Psi constraint uses the
// scale-aware slack eps * max(1, Ebar) so that E >> 1 states keep headroom.
// Throws AverageNotAdmissible when the cell average itself is outside the
// strengthened set (a non-PCP base scheme or a CFL violation).
std::pair<CellNodeData, LimiterThetas> pcp_limit(const CellNodeData& data, double eps);

// Root of Psi_eps((1 - t) average + t candidate) = 0 in t within [0, 1),
// found by bisection (valid by convexity); |t - root| <= 1e-12 and the
// returned t is on the admissible side.
double solve_theta(const ConservedState& average, const ConservedState& candidate, double eps);

} // namespace rmhd

#endif
