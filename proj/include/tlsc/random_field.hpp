#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "tlsc/assembly.hpp"
#include "tlsc/collocation.hpp"
#include "tlsc/mesh.hpp"

namespace tlsc {

/// Random diffusion coefficient a(y, x) parametrized over Gamma = [-1,1]^N.
class CoefficientField {
public:
    virtual ~CoefficientField() = default;
    virtual int dimension() const = 0;
    virtual double evaluate(std::span<const double> y, Vec2 x) const = 0;

protected:
    static void check_parameter(std::span<const double> y, int n);
};

/// a(y, x) = mean(x) + sum_n coeff_n(x) * y_n, exact affine form.
class AffineCoefficient : public CoefficientField {
public:
    AffineCoefficient(ScalarField mean, std::vector<ScalarField> coefficients);

    int dimension() const override { return static_cast<int>(coefficients_.size()); }
    double evaluate(std::span<const double> y, Vec2 x) const override;

private:
    ScalarField mean_;
    std::vector<ScalarField> coefficients_;
};

using CovarianceFn = std::function<double(Vec2, Vec2)>;

/// Truncated Karhunen-Loeve expansion discretized on its own grid. The mean
/// field and eigenfunctions are nodal on kl_grid and interpolated off it with
/// P1 evaluation. Eigenfunctions are L2(D)-orthonormal in the vertex-weight
/// inner product.
class KLExpansion : public CoefficientField {
public:
    KLExpansion(Mesh kl_grid, std::vector<double> mean,
                std::vector<double> eigenvalues,
                std::vector<std::vector<double>> eigenfunctions);

    int dimension() const override { return static_cast<int>(eigenvalues_.size()); }
    double evaluate(std::span<const double> y, Vec2 x) const override;

    const Mesh& kl_grid() const { return kl_grid_; }
    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    const std::vector<std::vector<double>>& eigenfunctions() const { return eigenfunctions_; }

    double mean_at(Vec2 x) const;
    double eigenfunction_at(int n, Vec2 x) const;

    void set_mean(const ScalarField& mean);

private:
    Mesh kl_grid_;
    std::vector<double> mean_;        // nodal on kl_grid
    std::vector<double> eigenvalues_; // nonincreasing, nonnegative
    std::vector<std::vector<double>> eigenfunctions_;  // nodal on kl_grid
};

/// Nystrom discretization of the covariance eigenproblem: eigen-decompose
/// W^{1/2} K W^{1/2} over kl-grid vertices (K the kernel matrix, W the P1
/// vertex quadrature weights) and keep the top `truncation` pairs. The mean
/// field of the returned expansion is zero; set it afterwards.
KLExpansion compute_kl(const CovarianceFn& kernel, const Rect& domain,
                       int kl_subdivisions, int truncation);

/// Minimum of the coefficient over all collocation points of `grid` times all
/// assembly quadrature points of `mesh`. Throws CoercivityError if <= 0.
double verify_coercivity(const CoefficientField& field, const TensorGrid& grid,
                         const Mesh& mesh);

}  // namespace tlsc
