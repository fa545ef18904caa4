#include "tlsc/collocation.hpp"

#include <cmath>
#include <numbers>

#include "tlsc/errors.hpp"

namespace tlsc {

namespace {

// Legendre P_n and derivative at x via the three-term recurrence.
struct LegendreEval {
    double value;
    double derivative;
};

LegendreEval legendre(int n, double x) {
    double p_prev = 1.0;  // P_0
    double p = x;         // P_1
    if (n == 0) return {1.0, 0.0};
    for (int k = 1; k < n; ++k) {
        const double p_next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
        p_prev = p;
        p = p_next;
    }
    const double d = n * (x * p - p_prev) / (x * x - 1.0);
    return {p, d};
}

}  // namespace

GaussRule gauss_legendre(int n) {
    if (n < 1) throw Error("gauss_legendre: point count must be >= 1");
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 1.0;
        return rule;
    }
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess, refined by Newton on P_n.
        double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const LegendreEval e = legendre(n, x);
            const double dx = e.value / e.derivative;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = x;
    }
    // Enforce exact symmetry about 0, then derive weights.
    for (int i = 0; i < n / 2; ++i) {
        const double s = 0.5 * (rule.nodes[static_cast<std::size_t>(i)] - rule.nodes[static_cast<std::size_t>(n - 1 - i)]);
        rule.nodes[static_cast<std::size_t>(i)] = s;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = -s;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;

    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rule.nodes[static_cast<std::size_t>(i)];
        const double d = legendre(n, x).derivative;
        // Standard weight 2/((1-x^2) P_n'^2), halved for the density 1/2.
        rule.weights[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - x * x) * d * d);
        sum += rule.weights[static_cast<std::size_t>(i)];
    }
    for (double& w : rule.weights) w /= sum;
    for (int i = 0; i < n / 2; ++i) {
        const double w = 0.5 * (rule.weights[static_cast<std::size_t>(i)] + rule.weights[static_cast<std::size_t>(n - 1 - i)]);
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

TensorGrid::TensorGrid(std::vector<int> degrees) : degrees_(std::move(degrees)) {
    if (degrees_.empty()) throw Error("TensorGrid: empty degree vector");
    point_count_ = 1;
    for (int p : degrees_) {
        if (p < 0) throw Error("TensorGrid: negative degree");
        rules_.push_back(gauss_legendre(p + 1));
        point_count_ *= p + 1;
    }
    for (const GaussRule& r : rules_) {
        const std::size_t m = r.nodes.size();
        std::vector<double> bw(m, 1.0);
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k)
                if (k != j) bw[j] /= r.nodes[j] - r.nodes[k];
        barycentric_.push_back(std::move(bw));
    }
}

TensorGrid build_tensor_grid(std::vector<int> degrees) { return TensorGrid(std::move(degrees)); }

std::vector<int> TensorGrid::multi_index(int flat) const {
    std::vector<int> m(degrees_.size());
    for (int d = dimension() - 1; d >= 0; --d) {
        const int len = degrees_[static_cast<std::size_t>(d)] + 1;
        m[static_cast<std::size_t>(d)] = flat % len;
        flat /= len;
    }
    return m;
}

int TensorGrid::flat_index(std::span<const int> multi) const {
    int flat = 0;
    for (int d = 0; d < dimension(); ++d) {
        const int len = degrees_[static_cast<std::size_t>(d)] + 1;
        const int m = multi[static_cast<std::size_t>(d)];
        if (m < 0 || m >= len) throw Error("TensorGrid: multi-index out of range");
        flat = flat * len + m;
    }
    return flat;
}

std::vector<double> TensorGrid::point(int flat) const {
    const std::vector<int> m = multi_index(flat);
    std::vector<double> y(degrees_.size());
    for (int d = 0; d < dimension(); ++d)
        y[static_cast<std::size_t>(d)] = rules_[static_cast<std::size_t>(d)].nodes[static_cast<std::size_t>(m[static_cast<std::size_t>(d)])];
    return y;
}

double TensorGrid::weight(int flat) const {
    const std::vector<int> m = multi_index(flat);
    double w = 1.0;
    for (int d = 0; d < dimension(); ++d)
        w *= rules_[static_cast<std::size_t>(d)].weights[static_cast<std::size_t>(m[static_cast<std::size_t>(d)])];
    return w;
}

std::vector<double> TensorGrid::interpolation_weights(std::span<const double> y) const {
    if (y.size() != degrees_.size())
        throw Error("interpolation_weights: query dimension mismatch");

    // Per-dimension Lagrange weights via the barycentric form.
    std::vector<std::vector<double>> lambda(degrees_.size());
    for (int d = 0; d < dimension(); ++d) {
        const double yd = y[static_cast<std::size_t>(d)];
        if (yd < -1.0 - 1e-12 || yd > 1.0 + 1e-12)
            throw Error("interpolation_weights: query outside Gamma = [-1,1]^N");
        const GaussRule& r = rules_[static_cast<std::size_t>(d)];
        const std::vector<double>& bw = barycentric_[static_cast<std::size_t>(d)];
        std::vector<double> lam(r.nodes.size(), 0.0);
        int hit = -1;
        for (std::size_t j = 0; j < r.nodes.size(); ++j) {
            if (std::abs(yd - r.nodes[j]) < 1e-13) {
                hit = static_cast<int>(j);
                break;
            }
        }
        if (hit >= 0) {
            lam[static_cast<std::size_t>(hit)] = 1.0;
        } else {
            double denom = 0.0;
            for (std::size_t j = 0; j < r.nodes.size(); ++j) {
                lam[j] = bw[j] / (yd - r.nodes[j]);
                denom += lam[j];
            }
            for (double& l : lam) l /= denom;
        }
        lambda[static_cast<std::size_t>(d)] = std::move(lam);
    }

    std::vector<double> weights(static_cast<std::size_t>(point_count_));
    std::vector<int> m(degrees_.size(), 0);
    for (int k = 0; k < point_count_; ++k) {
        double c = 1.0;
        for (int d = 0; d < dimension(); ++d)
            c *= lambda[static_cast<std::size_t>(d)][static_cast<std::size_t>(m[static_cast<std::size_t>(d)])];
        weights[static_cast<std::size_t>(k)] = c;
        // lexicographic increment, last dimension fastest
        for (int d = dimension() - 1; d >= 0; --d) {
            if (++m[static_cast<std::size_t>(d)] <= degrees_[static_cast<std::size_t>(d)]) break;
            m[static_cast<std::size_t>(d)] = 0;
        }
    }
    return weights;
}

double interpolate(const TensorGrid& grid, std::span<const double> values,
                   std::span<const double> y) {
    if (values.size() != static_cast<std::size_t>(grid.point_count()))
        throw Error("interpolate: values size != point count");
    const std::vector<double> c = grid.interpolation_weights(y);
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * values[k];
    return s;
}

std::vector<double> interpolate_vectors(const TensorGrid& grid,
                                        std::span<const std::vector<double>> vectors,
                                        std::span<const double> y) {
    if (vectors.size() != static_cast<std::size_t>(grid.point_count()))
        throw Error("interpolate_vectors: vector count != point count");
    const std::vector<double> c = grid.interpolation_weights(y);
    std::vector<double> out(vectors.empty() ? 0 : vectors[0].size(), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0.0) continue;
        const std::vector<double>& v = vectors[k];
        if (v.size() != out.size()) throw Error("interpolate_vectors: ragged vectors");
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[k] * v[i];
    }
    return out;
}

double expectation(const TensorGrid& grid, std::span<const double> values) {
    if (values.size() != static_cast<std::size_t>(grid.point_count()))
        throw Error("expectation: values size != point count");
    double s = 0.0;
    for (int k = 0; k < grid.point_count(); ++k)
        s += grid.weight(k) * values[static_cast<std::size_t>(k)];
    return s;
}

}  // namespace tlsc
