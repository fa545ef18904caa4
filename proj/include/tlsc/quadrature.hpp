#pragma once

#include <array>
#include <vector>

namespace tlsc {

/// Symmetric quadrature rule on the reference triangle in barycentric form.
/// Weights are normalized to sum to 1; a physical integral over triangle T is
/// area(T) * sum_q w_q f(x_q).
struct TriangleRule {
    struct Node {
        std::array<double, 3> barycentric;
        double weight;
    };
    std::vector<Node> nodes;
    int exactness_degree = 0;
};

/// Six-point rule exact for polynomials of total degree <= 4.
const TriangleRule& triangle_rule_degree4();

}  // namespace tlsc
