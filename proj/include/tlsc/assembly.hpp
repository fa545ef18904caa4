#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tlsc/mesh.hpp"
#include "tlsc/sparse.hpp"

namespace tlsc {

/// Deterministic pointwise coefficient/forcing/weight field on the domain.
using ScalarField = std::function<double(Vec2)>;

/// Stiffness matrix (a grad phi_j, grad phi_i) on the full vertex set.
/// The coefficient is sampled at quadrature points and must be positive
/// there; a nonpositive sample raises CoercivityError naming the point.
CsrMatrix assemble_stiffness(const Mesh& mesh, const ScalarField& a);

/// Weighted mass matrix (w phi_j, phi_i).
CsrMatrix assemble_weighted_mass(const Mesh& mesh, const ScalarField& w);

/// Load vector with entries (s, phi_i).
std::vector<double> assemble_load(const Mesh& mesh, const ScalarField& s);

/// System reduced to interior vertices by symmetric elimination of the
/// homogeneous Dirichlet rows/columns.
struct ReducedSystem {
    CsrMatrix matrix;
    std::vector<double> rhs;
    std::vector<int> interior;  // reduced index -> full vertex index
    int full_size = 0;

    /// Expand a reduced vector to the full vertex set, zeros on the boundary.
    std::vector<double> expand(std::span<const double> reduced) const;
    /// Restrict a full vector to the interior index set.
    std::vector<double> restrict_vector(std::span<const double> full) const;
};

ReducedSystem apply_dirichlet(const CsrMatrix& A, std::span<const double> b, const Mesh& mesh);

/// P1 vertex quadrature weights w_i = integral of phi_i (lumped mass diagonal).
std::vector<double> p1_vertex_weights(const Mesh& mesh);

}  // namespace tlsc
