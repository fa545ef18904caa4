#pragma once

#include <span>
#include <vector>

namespace tlsc {

/// One-dimensional Gauss-Legendre rule on [-1,1]. Weights are normalized for
/// the uniform density 1/2, so they sum to 1 and the rule integrates
/// x^j * (1/2) exactly for j <= 2n-1.
struct GaussRule {
    std::vector<double> nodes;    // ascending, symmetric about 0
    std::vector<double> weights;  // positive, sum to 1
};

GaussRule gauss_legendre(int point_count);

/// Tensor-product Gauss-Legendre collocation grid over Gamma = [-1,1]^N.
/// Points are flattened lexicographically with dimension 1 slowest.
class TensorGrid {
public:
    explicit TensorGrid(std::vector<int> degrees);

    int dimension() const { return static_cast<int>(degrees_.size()); }
    const std::vector<int>& degrees() const { return degrees_; }
    int point_count() const { return point_count_; }  // N_p = prod(p_n + 1)

    const GaussRule& rule(int dim) const { return rules_[static_cast<std::size_t>(dim)]; }

    std::vector<int> multi_index(int flat) const;
    int flat_index(std::span<const int> multi) const;

    /// Coordinates of collocation point k.
    std::vector<double> point(int flat) const;
    /// Tensor quadrature weight of collocation point k.
    double weight(int flat) const;

    /// Collapsed Lagrange weights c_k(y): interpolate(values, y) equals
    /// sum_k c_k(y) values[k]. Exact indicator at grid points.
    std::vector<double> interpolation_weights(std::span<const double> y) const;

private:
    std::vector<int> degrees_;
    std::vector<GaussRule> rules_;
    std::vector<std::vector<double>> barycentric_;  // per dimension
    int point_count_ = 0;
};

TensorGrid build_tensor_grid(std::vector<int> degrees);

/// Tensor barycentric Lagrange interpolation of per-point scalars at y.
double interpolate(const TensorGrid& grid, std::span<const double> values,
                   std::span<const double> y);

/// Interpolation of per-point nodal vectors: sum_k c_k(y) vectors[k].
std::vector<double> interpolate_vectors(const TensorGrid& grid,
                                        std::span<const std::vector<double>> vectors,
                                        std::span<const double> y);

/// E[values] = sum_k w_k values[k] with tensor weights.
double expectation(const TensorGrid& grid, std::span<const double> values);

}  // namespace tlsc
