#pragma once

#include <array>
#include <vector>

namespace rsfem {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes ascending (Newton on P_n).
[[nodiscard]] const GaussRule& gauss_legendre(int n);

/// Symmetric 7-point rule on the reference triangle (0,0),(1,0),(0,1),
/// exact for polynomials of degree 5. Weights sum to 1/2.
struct TriangleRule {
    std::array<std::array<double, 2>, 7> points;
    std::array<double, 7> weights;
};

[[nodiscard]] const TriangleRule& triangle_rule_deg5();

} // namespace rsfem
