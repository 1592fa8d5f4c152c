#ifndef RMHD_QUADRATURE_HPP
#define RMHD_QUADRATURE_HPP

#include <vector>

#include "rmhd/error.hpp"

namespace rmhd {

// Gauss-Legendre rule on [-1, 1]; orders 1..5.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights; // sum to 2
};

inline const GaussRule& gauss_rule(int order) {
    static const GaussRule rules[5] = {
        {{0.0}, {2.0}},
        {{-0.57735026918962576, 0.57735026918962576}, {1.0, 1.0}},
        {{-0.77459666924148338, 0.0, 0.77459666924148338},
         {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}},
        {{-0.86113631159405258, -0.33998104358485626, 0.33998104358485626,
          0.86113631159405258},
         {0.34785484513745386, 0.65214515486254614, 0.65214515486254614,
          0.34785484513745386}},
        {{-0.90617984593866399, -0.53846931010568309, 0.0, 0.53846931010568309,
          0.90617984593866399},
         {0.23692688505618909, 0.47862867049936647, 0.56888888888888889,
          0.47862867049936647, 0.23692688505618909}},
    };
    if (order < 1 || order > 5)
        fail(Errc::precondition_violated, "Gauss quadrature order must be 1..5");
    return rules[order - 1];
}

} // namespace rmhd

#endif
