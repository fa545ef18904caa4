// Test-only oracles, kept independent of the implementation paths they check:
// dense brute-force assembly via per-triangle affine basis solves, dense LU,
// and a small Lanczos probe for extremal Ritz values.
#pragma once

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "tlsc/assembly.hpp"
#include "tlsc/mesh.hpp"
#include "tlsc/sparse.hpp"

namespace oracle {

struct DenseMatrix {
    int n = 0;
    std::vector<double> a;

    explicit DenseMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}
    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

/// LU with partial pivoting.
inline std::vector<double> dense_solve(DenseMatrix m, std::vector<double> b) {
    const int n = m.n;
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(m.at(i, k)) > std::abs(m.at(pivot, k))) pivot = i;
        if (m.at(pivot, k) == 0.0) throw std::runtime_error("dense_solve: singular");
        if (pivot != k) {
            for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(pivot, j));
            std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(pivot)]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = m.at(i, k) / m.at(k, k);
            m.at(i, k) = 0.0;
            for (int j = k + 1; j < n; ++j) m.at(i, j) -= f * m.at(k, j);
            b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(k)];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) s -= m.at(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / m.at(i, i);
    }
    return x;
}

/// Affine nodal basis of a triangle: phi_k(x, y) = c0 + c1 x + c2 y with
/// phi_k(vertex_m) = delta_km, obtained by Cramer's rule.
struct AffineBasis {
    std::array<std::array<double, 3>, 3> coeff;  // coeff[k] = {c0, c1, c2}

    double value(int k, tlsc::Vec2 p) const {
        return coeff[static_cast<std::size_t>(k)][0] + coeff[static_cast<std::size_t>(k)][1] * p.x +
               coeff[static_cast<std::size_t>(k)][2] * p.y;
    }
    tlsc::Vec2 gradient(int k) const {
        return {coeff[static_cast<std::size_t>(k)][1], coeff[static_cast<std::size_t>(k)][2]};
    }
};

inline AffineBasis affine_basis(const tlsc::Mesh& mesh, int t) {
    const auto& tri = mesh.triangles()[static_cast<std::size_t>(t)];
    std::array<tlsc::Vec2, 3> v;
    for (int k = 0; k < 3; ++k) v[static_cast<std::size_t>(k)] = mesh.vertices()[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
    AffineBasis basis{};
    for (int k = 0; k < 3; ++k) {
        // Solve [1 x_m y_m] c = e_k by Cramer's rule on the Vandermonde rows.
        std::array<double, 3> rhs{0.0, 0.0, 0.0};
        rhs[static_cast<std::size_t>(k)] = 1.0;
        const auto det3 = [](std::array<std::array<double, 3>, 3> m) {
            return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        };
        std::array<std::array<double, 3>, 3> base{{{1.0, v[0].x, v[0].y},
                                                   {1.0, v[1].x, v[1].y},
                                                   {1.0, v[2].x, v[2].y}}};
        for (int c = 0; c < 3; ++c) {
            std::array<std::array<double, 3>, 3> m = base;
            for (int r = 0; r < 3; ++r) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = rhs[static_cast<std::size_t>(r)];
            basis.coeff[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)] = det3(m) / det3(base);
        }
    }
    return basis;
}

// The same six-node degree-4 rule as the implementation, applied through the
// affine-basis path so quadrature samples agree point for point.
struct QuadNode {
    std::array<double, 3> bary;
    double weight;
};

inline const std::vector<QuadNode>& quad_nodes() {
    static const std::vector<QuadNode> nodes = [] {
        std::vector<QuadNode> out;
        const double a1 = 0.44594849091596488632, w1 = 0.22338158967801146570;
        const double a2 = 0.09157621350977074346, w2 = 0.10995174365532186764;
        for (const auto& [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
            const double b = 1.0 - 2.0 * a;
            out.push_back({{b, a, a}, w});
            out.push_back({{a, b, a}, w});
            out.push_back({{a, a, b}, w});
        }
        return out;
    }();
    return nodes;
}

inline DenseMatrix dense_stiffness(const tlsc::Mesh& mesh, const tlsc::ScalarField& a) {
    DenseMatrix m(mesh.vertex_count());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles()[static_cast<std::size_t>(t)];
        const AffineBasis basis = affine_basis(mesh, t);
        const double area = mesh.triangle_area(t);
        for (const QuadNode& node : quad_nodes()) {
            tlsc::Vec2 x{0.0, 0.0};
            for (int k = 0; k < 3; ++k) {
                const tlsc::Vec2 v = mesh.vertices()[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
                x.x += node.bary[static_cast<std::size_t>(k)] * v.x;
                x.y += node.bary[static_cast<std::size_t>(k)] * v.y;
            }
            const double av = node.weight * area * a(x);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    m.at(tri[static_cast<std::size_t>(i)], tri[static_cast<std::size_t>(j)]) +=
                        av * tlsc::dot(basis.gradient(i), basis.gradient(j));
        }
    }
    return m;
}

inline DenseMatrix dense_weighted_mass(const tlsc::Mesh& mesh, const tlsc::ScalarField& w) {
    DenseMatrix m(mesh.vertex_count());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles()[static_cast<std::size_t>(t)];
        const AffineBasis basis = affine_basis(mesh, t);
        const double area = mesh.triangle_area(t);
        for (const QuadNode& node : quad_nodes()) {
            tlsc::Vec2 x{0.0, 0.0};
            for (int k = 0; k < 3; ++k) {
                const tlsc::Vec2 v = mesh.vertices()[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
                x.x += node.bary[static_cast<std::size_t>(k)] * v.x;
                x.y += node.bary[static_cast<std::size_t>(k)] * v.y;
            }
            const double wv = node.weight * area * w(x);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    m.at(tri[static_cast<std::size_t>(i)], tri[static_cast<std::size_t>(j)]) +=
                        wv * basis.value(i, x) * basis.value(j, x);
        }
    }
    return m;
}

inline std::vector<double> dense_load(const tlsc::Mesh& mesh, const tlsc::ScalarField& s) {
    std::vector<double> load(static_cast<std::size_t>(mesh.vertex_count()), 0.0);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles()[static_cast<std::size_t>(t)];
        const AffineBasis basis = affine_basis(mesh, t);
        const double area = mesh.triangle_area(t);
        for (const QuadNode& node : quad_nodes()) {
            tlsc::Vec2 x{0.0, 0.0};
            for (int k = 0; k < 3; ++k) {
                const tlsc::Vec2 v = mesh.vertices()[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
                x.x += node.bary[static_cast<std::size_t>(k)] * v.x;
                x.y += node.bary[static_cast<std::size_t>(k)] * v.y;
            }
            const double sv = node.weight * area * s(x);
            for (int i = 0; i < 3; ++i)
                load[static_cast<std::size_t>(tri[static_cast<std::size_t>(i)])] += sv * basis.value(i, x);
        }
    }
    return load;
}

inline DenseMatrix to_dense(const tlsc::CsrMatrix& A) {
    DenseMatrix m(A.rows());
    for (int i = 0; i < A.rows(); ++i)
        for (int k = A.row_offsets()[static_cast<std::size_t>(i)]; k < A.row_offsets()[static_cast<std::size_t>(i) + 1]; ++k)
            m.at(i, A.column_indices()[static_cast<std::size_t>(k)]) = A.values()[static_cast<std::size_t>(k)];
    return m;
}

/// Smallest Ritz value of A from `steps` Lanczos iterations (fixed seed),
/// with the tridiagonal eigenvalue found by Sturm bisection.
inline double lanczos_smallest_ritz(const tlsc::CsrMatrix& A, int steps) {
    const int n = A.rows();
    std::mt19937 rng(12345u);
    std::normal_distribution<double> gauss;
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = gauss(rng);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;

    std::vector<double> v_prev(static_cast<std::size_t>(n), 0.0);
    std::vector<double> alpha, beta;
    double beta_prev = 0.0;
    for (int j = 0; j < steps; ++j) {
        std::vector<double> w = A.multiply(v);
        double a = 0.0;
        for (int i = 0; i < n; ++i) a += w[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        alpha.push_back(a);
        for (int i = 0; i < n; ++i)
            w[static_cast<std::size_t>(i)] -= a * v[static_cast<std::size_t>(i)] + beta_prev * v_prev[static_cast<std::size_t>(i)];
        double b = 0.0;
        for (double x : w) b += x * x;
        b = std::sqrt(b);
        if (b < 1e-14) break;
        beta.push_back(b);
        v_prev = v;
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / b;
        beta_prev = b;
    }

    const int m = static_cast<int>(alpha.size());
    const auto sturm_count = [&](double x) {
        // number of eigenvalues of the tridiagonal below x
        int count = 0;
        double d = 1.0;
        for (int i = 0; i < m; ++i) {
            const double b2 = i > 0 ? beta[static_cast<std::size_t>(i) - 1] * beta[static_cast<std::size_t>(i) - 1] : 0.0;
            d = alpha[static_cast<std::size_t>(i)] - x - (i > 0 ? b2 / d : 0.0);
            if (d == 0.0) d = -1e-300;
            if (d < 0.0) ++count;
        }
        return count;
    };
    double lo = alpha[0], hi = alpha[0];
    for (int i = 0; i < m; ++i) {
        const double b = (i > 0 ? beta[static_cast<std::size_t>(i) - 1] : 0.0) +
                         (i + 1 < m ? beta[static_cast<std::size_t>(i)] : 0.0);
        lo = std::min(lo, alpha[static_cast<std::size_t>(i)] - b);
        hi = std::max(hi, alpha[static_cast<std::size_t>(i)] + b);
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle
