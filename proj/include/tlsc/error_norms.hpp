#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "tlsc/collocation.hpp"
#include "tlsc/mesh.hpp"
#include "tlsc/solvers.hpp"

namespace tlsc {

/// Comparison target for a stochastic solution: either an analytic map
/// (y, x) -> value with gradient, or a numeric solution on a finer mesh/grid.
class ReferenceSolution {
public:
    static ReferenceSolution analytic(
        std::function<double(std::span<const double>, Vec2)> value,
        std::function<Vec2(std::span<const double>, Vec2)> gradient);
    static ReferenceSolution from_solution(StochasticSolution solution);

    bool is_numeric() const { return numeric_ != nullptr; }
    const StochasticSolution& numeric() const { return *numeric_; }

    double value(std::span<const double> y, Vec2 x) const { return value_(y, x); }
    Vec2 gradient(std::span<const double> y, Vec2 x) const { return gradient_(y, x); }

private:
    std::function<double(std::span<const double>, Vec2)> value_;
    std::function<Vec2(std::span<const double>, Vec2)> gradient_;
    std::shared_ptr<const StochasticSolution> numeric_;
};

/// Finite-difference check of an analytic reference gradient at `samples`
/// deterministic pseudo-random (y, x) locations; throws beyond 1e-5 relative.
void verify_analytic_gradient(const ReferenceSolution& ref, const Rect& domain,
                              int dimension, int samples = 20);

enum class ErrorNorm { L2, H1_0 };

/// Norm of (sol - ref) in L2_rho(Gamma) (x) L2(D) or the H1_0 gradient
/// seminorm. The expectation over Gamma uses the validation grid, which must
/// exceed the solution grid by at least 2 degrees per dimension; spatial
/// integrals use the degree-4 triangle rule on the solution mesh. A numeric
/// reference must live on a nested refinement of the solution mesh.
double error_norm(const StochasticSolution& sol, const ReferenceSolution& ref,
                  ErrorNorm norm, const TensorGrid& validation_grid);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least-squares line through (x_i, y_i).
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

enum class SlopeAxis {
    LogResolution,  // log(error) vs log(resolution): algebraic order in h
    Resolution,     // log(error) vs resolution: exponential decay in p
};

/// Convergence-order fit from (resolution, error) pairs; needs >= 3 pairs
/// with positive errors.
double fit_slope(std::span<const std::pair<double, double>> pairs,
                 SlopeAxis axis = SlopeAxis::LogResolution);

}  // namespace tlsc
