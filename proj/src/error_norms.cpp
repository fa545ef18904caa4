#include "tlsc/error_norms.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "tlsc/errors.hpp"
#include "tlsc/quadrature.hpp"

namespace tlsc {

ReferenceSolution ReferenceSolution::analytic(
    std::function<double(std::span<const double>, Vec2)> value,
    std::function<Vec2(std::span<const double>, Vec2)> gradient) {
    ReferenceSolution ref;
    ref.value_ = std::move(value);
    ref.gradient_ = std::move(gradient);
    return ref;
}

ReferenceSolution ReferenceSolution::from_solution(StochasticSolution solution) {
    ReferenceSolution ref;
    ref.numeric_ = std::make_shared<const StochasticSolution>(std::move(solution));
    return ref;
}

void verify_analytic_gradient(const ReferenceSolution& ref, const Rect& domain,
                              int dimension, int samples) {
    if (ref.is_numeric()) return;
    std::mt19937 rng(20240517u);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    // Keep x away from the boundary so central differences stay inside D.
    std::uniform_real_distribution<double> px(domain.x0 + 0.05 * domain.width(),
                                              domain.x1 - 0.05 * domain.width());
    std::uniform_real_distribution<double> py(domain.y0 + 0.05 * domain.height(),
                                              domain.y1 - 0.05 * domain.height());
    const double step = 1e-6;
    for (int s = 0; s < samples; ++s) {
        std::vector<double> y(static_cast<std::size_t>(dimension));
        for (double& yn : y) yn = unit(rng);
        const Vec2 x{px(rng), py(rng)};
        const Vec2 g = ref.gradient(y, x);
        const double fdx = (ref.value(y, {x.x + step, x.y}) - ref.value(y, {x.x - step, x.y})) / (2 * step);
        const double fdy = (ref.value(y, {x.x, x.y + step}) - ref.value(y, {x.x, x.y - step})) / (2 * step);
        const double scale = std::max({std::abs(g.x), std::abs(g.y), 1.0});
        if (std::abs(g.x - fdx) > 1e-5 * scale || std::abs(g.y - fdy) > 1e-5 * scale) {
            std::ostringstream os;
            os << "analytic reference gradient disagrees with finite differences at ("
               << x.x << ", " << x.y << "): (" << g.x << ", " << g.y << ") vs ("
               << fdx << ", " << fdy << ")";
            throw Error(os.str());
        }
    }
}

double error_norm(const StochasticSolution& sol, const ReferenceSolution& ref,
                  ErrorNorm norm, const TensorGrid& validation_grid) {
    if (sol.nodal.size() != static_cast<std::size_t>(sol.grid.point_count()))
        throw Error("error_norm: solution vector count != grid point count");
    if (validation_grid.dimension() != sol.grid.dimension())
        throw Error("error_norm: validation grid dimension mismatch");
    for (int d = 0; d < sol.grid.dimension(); ++d) {
        if (validation_grid.degrees()[static_cast<std::size_t>(d)] <
            sol.grid.degrees()[static_cast<std::size_t>(d)] + 2)
            throw Error("error_norm: validation grid must exceed solution degrees by >= 2");
    }
    if (ref.is_numeric()) {
        const Mesh& rm = ref.numeric().mesh;
        const Rect& a = rm.domain();
        const Rect& b = sol.mesh.domain();
        if (a.x0 != b.x0 || a.y0 != b.y0 || a.x1 != b.x1 || a.y1 != b.y1)
            throw Error("error_norm: reference mesh domain differs from solution mesh");
        if (rm.subdivisions() % sol.mesh.subdivisions() != 0)
            throw Error("error_norm: reference mesh is not a nested refinement");
    }

    const TriangleRule& rule = triangle_rule_degree4();
    const Mesh& mesh = sol.mesh;
    double total = 0.0;

    for (int k = 0; k < validation_grid.point_count(); ++k) {
        const std::vector<double> y = validation_grid.point(k);
        const double wy = validation_grid.weight(k);
        const std::vector<double> u_at_y = interpolate_vectors(sol.grid, sol.nodal, y);
        std::vector<double> ref_at_y;
        if (ref.is_numeric())
            ref_at_y = interpolate_vectors(ref.numeric().grid, ref.numeric().nodal, y);

        double integral = 0.0;
        for (int t = 0; t < mesh.triangle_count(); ++t) {
            const auto& tri = mesh.triangles()[static_cast<std::size_t>(t)];
            const double area = mesh.triangle_area(t);
            Vec2 grad_u{};
            if (norm == ErrorNorm::H1_0) grad_u = p1_triangle_gradient(mesh, t, u_at_y);
            for (const auto& node : rule.nodes) {
                Vec2 x{0.0, 0.0};
                double u = 0.0;
                for (int c = 0; c < 3; ++c) {
                    const Vec2 vc = mesh.vertices()[static_cast<std::size_t>(tri[static_cast<std::size_t>(c)])];
                    const double bc = node.barycentric[static_cast<std::size_t>(c)];
                    x.x += bc * vc.x;
                    x.y += bc * vc.y;
                    u += bc * u_at_y[static_cast<std::size_t>(tri[static_cast<std::size_t>(c)])];
                }
                if (norm == ErrorNorm::L2) {
                    const double r = ref.is_numeric()
                                         ? evaluate_p1(ref.numeric().mesh, ref_at_y, x)
                                         : ref.value(y, x);
                    const double e = u - r;
                    integral += node.weight * area * e * e;
                } else {
                    const Vec2 gr = ref.is_numeric()
                                        ? evaluate_p1_gradient(ref.numeric().mesh, ref_at_y, x)
                                        : ref.gradient(y, x);
                    const double ex = grad_u.x - gr.x;
                    const double ey = grad_u.y - gr.y;
                    integral += node.weight * area * (ex * ex + ey * ey);
                }
            }
        }
        total += wy * integral;
    }
    return std::sqrt(total);
}

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw Error("fit_line: need >= 2 matching samples");
    const double n = double(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    LineFit fit;
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw Error("fit_line: degenerate abscissae");
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean_y = sy / n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double pred = fit.intercept + fit.slope * xs[i];
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

double fit_slope(std::span<const std::pair<double, double>> pairs, SlopeAxis axis) {
    if (pairs.size() < 3) throw Error("fit_slope: need >= 3 pairs");
    std::vector<double> xs, ys;
    xs.reserve(pairs.size());
    ys.reserve(pairs.size());
    for (const auto& [resolution, error] : pairs) {
        if (!(error > 0.0)) throw Error("fit_slope: errors must be positive");
        xs.push_back(axis == SlopeAxis::LogResolution ? std::log(resolution) : resolution);
        ys.push_back(std::log(error));
    }
    return fit_line(xs, ys).slope;
}

}  // namespace tlsc
