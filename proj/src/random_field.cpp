#include "tlsc/random_field.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tlsc/errors.hpp"
#include "tlsc/quadrature.hpp"

namespace tlsc {

void CoefficientField::check_parameter(std::span<const double> y, int n) {
    if (y.size() != static_cast<std::size_t>(n))
        throw Error("coefficient: parameter dimension mismatch");
    for (double yn : y)
        if (yn < -1.0 - 1e-12 || yn > 1.0 + 1e-12)
            throw Error("coefficient: parameter outside Gamma = [-1,1]^N");
}

AffineCoefficient::AffineCoefficient(ScalarField mean, std::vector<ScalarField> coefficients)
    : mean_(std::move(mean)), coefficients_(std::move(coefficients)) {}

double AffineCoefficient::evaluate(std::span<const double> y, Vec2 x) const {
    check_parameter(y, dimension());
    double a = mean_(x);
    for (std::size_t n = 0; n < coefficients_.size(); ++n) a += coefficients_[n](x) * y[n];
    return a;
}

KLExpansion::KLExpansion(Mesh kl_grid, std::vector<double> mean,
                         std::vector<double> eigenvalues,
                         std::vector<std::vector<double>> eigenfunctions)
    : kl_grid_(std::move(kl_grid)),
      mean_(std::move(mean)),
      eigenvalues_(std::move(eigenvalues)),
      eigenfunctions_(std::move(eigenfunctions)) {
    if (mean_.size() != static_cast<std::size_t>(kl_grid_.vertex_count()))
        throw Error("KLExpansion: mean length != kl grid vertex count");
    if (eigenvalues_.size() != eigenfunctions_.size())
        throw Error("KLExpansion: eigenvalue/eigenfunction count mismatch");
    for (std::size_t n = 1; n < eigenvalues_.size(); ++n)
        if (eigenvalues_[n] > eigenvalues_[n - 1] + 1e-12)
            throw Error("KLExpansion: eigenvalues not sorted nonincreasing");
}

double KLExpansion::mean_at(Vec2 x) const { return evaluate_p1(kl_grid_, mean_, x); }

double KLExpansion::eigenfunction_at(int n, Vec2 x) const {
    return evaluate_p1(kl_grid_, eigenfunctions_[static_cast<std::size_t>(n)], x);
}

double KLExpansion::evaluate(std::span<const double> y, Vec2 x) const {
    check_parameter(y, dimension());
    const TriangleLocation loc = kl_grid_.locate(x);
    const auto& tri = kl_grid_.triangles()[static_cast<std::size_t>(loc.triangle)];
    const auto p1 = [&](const std::vector<double>& nodal) {
        double v = 0.0;
        for (int k = 0; k < 3; ++k)
            v += loc.barycentric[static_cast<std::size_t>(k)] * nodal[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
        return v;
    };
    double a = p1(mean_);
    for (std::size_t n = 0; n < eigenvalues_.size(); ++n)
        a += std::sqrt(eigenvalues_[n]) * p1(eigenfunctions_[n]) * y[n];
    return a;
}

void KLExpansion::set_mean(const ScalarField& mean) {
    for (int v = 0; v < kl_grid_.vertex_count(); ++v)
        mean_[static_cast<std::size_t>(v)] = mean(kl_grid_.vertices()[static_cast<std::size_t>(v)]);
}

KLExpansion compute_kl(const CovarianceFn& kernel, const Rect& domain,
                       int kl_subdivisions, int truncation) {
    Mesh grid = build_uniform_mesh(domain, kl_subdivisions);
    const int m = grid.vertex_count();
    if (truncation < 0 || truncation > m)
        throw Error("compute_kl: truncation exceeds kl-grid vertex count");

    const std::vector<double> w = p1_vertex_weights(grid);
    std::vector<double> sqrt_w(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) sqrt_w[i] = std::sqrt(w[i]);

    // B = W^{1/2} K W^{1/2}, symmetric positive semidefinite for a valid kernel.
    std::vector<double> B(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        const Vec2 xi = grid.vertices()[static_cast<std::size_t>(i)];
        for (int j = i; j < m; ++j) {
            const Vec2 xj = grid.vertices()[static_cast<std::size_t>(j)];
            const double v = sqrt_w[static_cast<std::size_t>(i)] * kernel(xi, xj) * sqrt_w[static_cast<std::size_t>(j)];
            B[static_cast<std::size_t>(i) * m + j] = v;
            B[static_cast<std::size_t>(j) * m + i] = v;
        }
    }

    std::vector<double> eigs(static_cast<std::size_t>(m));
    const int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'V', 'U', m, B.data(), m, eigs.data());
    if (info != 0) {
        std::ostringstream os;
        os << "compute_kl: symmetric eigensolve failed, info = " << info;
        throw Error(os.str());
    }
    // LAPACK returns ascending eigenvalues; columns of B are eigenvectors.
    const double lambda_max = eigs[static_cast<std::size_t>(m) - 1];
    if (eigs[0] < -1e-10 * std::max(lambda_max, 1e-300)) {
        std::ostringstream os;
        os << "compute_kl: kernel not positive semidefinite (lambda_min = "
           << eigs[0] << ", lambda_max = " << lambda_max << ")";
        throw Error(os.str());
    }

    std::vector<double> eigenvalues(static_cast<std::size_t>(truncation));
    std::vector<std::vector<double>> eigenfunctions(static_cast<std::size_t>(truncation));
    for (int n = 0; n < truncation; ++n) {
        const int col = m - 1 - n;
        eigenvalues[static_cast<std::size_t>(n)] = std::max(eigs[static_cast<std::size_t>(col)], 0.0);
        std::vector<double> b(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i)
            b[static_cast<std::size_t>(i)] = B[static_cast<std::size_t>(i) * m + col] / sqrt_w[static_cast<std::size_t>(i)];
        // Unit L2(D) norm in the vertex-weight inner product, sign fixed by
        // the largest-magnitude node.
        double norm_sq = 0.0;
        int peak = 0;
        for (int i = 0; i < m; ++i) {
            norm_sq += w[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
            if (std::abs(b[static_cast<std::size_t>(i)]) > std::abs(b[static_cast<std::size_t>(peak)])) peak = i;
        }
        double scale = 1.0 / std::sqrt(norm_sq);
        if (b[static_cast<std::size_t>(peak)] < 0.0) scale = -scale;
        for (double& v : b) v *= scale;
        eigenfunctions[static_cast<std::size_t>(n)] = std::move(b);
    }

    std::vector<double> zero_mean(static_cast<std::size_t>(m), 0.0);
    return KLExpansion(std::move(grid), std::move(zero_mean), std::move(eigenvalues),
                       std::move(eigenfunctions));
}

double verify_coercivity(const CoefficientField& field, const TensorGrid& grid,
                         const Mesh& mesh) {
    const TriangleRule& rule = triangle_rule_degree4();
    double min_value = std::numeric_limits<double>::infinity();
    std::vector<double> min_y;
    Vec2 min_x{};
    for (int k = 0; k < grid.point_count(); ++k) {
        const std::vector<double> y = grid.point(k);
        for (int t = 0; t < mesh.triangle_count(); ++t) {
            const auto& tri = mesh.triangles()[static_cast<std::size_t>(t)];
            for (const auto& node : rule.nodes) {
                Vec2 x{0.0, 0.0};
                for (int c = 0; c < 3; ++c) {
                    const Vec2 v = mesh.vertices()[static_cast<std::size_t>(tri[static_cast<std::size_t>(c)])];
                    x.x += node.barycentric[static_cast<std::size_t>(c)] * v.x;
                    x.y += node.barycentric[static_cast<std::size_t>(c)] * v.y;
                }
                const double a = field.evaluate(y, x);
                if (a < min_value) {
                    min_value = a;
                    min_y = y;
                    min_x = x;
                }
            }
        }
    }
    if (!(min_value > 0.0)) {
        std::ostringstream os;
        os << "coercivity violated: min coefficient " << min_value << " at y = (";
        for (std::size_t i = 0; i < min_y.size(); ++i) os << (i ? ", " : "") << min_y[i];
        os << "), x = (" << min_x.x << ", " << min_x.y << ")";
        throw CoercivityError(os.str());
    }
    return min_value;
}

}  // namespace tlsc
