#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tlsc/assembly.hpp"
#include "tlsc/collocation.hpp"
#include "tlsc/mesh.hpp"
#include "tlsc/random_field.hpp"

namespace tlsc {

/// Semilinear model problem -div(a(y,x) grad u) + f(u) + g(y,x) = 0 on a
/// rectangle with homogeneous Dirichlet data.
struct Problem {
    std::shared_ptr<const CoefficientField> coefficient;
    std::function<double(double)> f;
    std::function<double(double)> f_prime;
    /// Forcing g(y, x); may depend on the random parameter.
    std::function<double(std::span<const double>, Vec2)> forcing;
    Rect domain;
};

/// Problem with the built-in cubic nonlinearity f(u) = u^3.
Problem make_cubic_problem(std::shared_ptr<const CoefficientField> coefficient,
                           std::function<double(std::span<const double>, Vec2)> forcing,
                           const Rect& domain);

/// Finite-difference consistency check of f_prime against f at
/// u in {-1, 0, 1, 2}; throws on mismatch beyond 1e-6 relative.
void validate_problem(const Problem& problem);

enum class InitialGuess { Zero };

struct NewtonParams {
    double rel_tol = 1e-2;  // on ||U^{l+1} - U^l|| / ||U^{l+1}||
    int max_iters = 25;
    double cg_tol = 1e-9;
    InitialGuess initial_guess = InitialGuess::Zero;
};

struct NewtonResult {
    std::vector<double> nodal;
    int iterations = 0;
    std::vector<double> increment_history;  // relative increments per step
    long cg_iterations = 0;
};

/// Newton iteration for the semilinear problem at a frozen parameter y.
/// The stiffness matrix is assembled once; the Jacobian mass block and the
/// right-hand side are rebuilt each step from the current iterate.
NewtonResult solve_semilinear(const Mesh& mesh, const Problem& problem,
                              std::span<const double> y, const NewtonParams& params);

struct LinearizedResult {
    std::vector<double> nodal;
    int cg_iterations = 0;
};

/// One linearized solve about the spatial field v:
/// [A(y) + M(f'(v))] u = F(-f(v) - g + f'(v) v), Dirichlet-reduced.
LinearizedResult solve_linearized(const Mesh& mesh, const Problem& problem,
                                  std::span<const double> y, const ScalarField& v,
                                  double cg_tol = 1e-9);

enum class Provenance { CoarseNonlinear, DirectSc, TwoLevel };

/// One nodal coefficient vector per collocation point, grid-ordered.
/// Boundary entries are exactly zero.
struct StochasticSolution {
    TensorGrid grid;
    Mesh mesh;
    std::vector<std::vector<double>> nodal;
    Provenance provenance = Provenance::DirectSc;
};

struct StageWork {
    std::string stage;
    int points = 0;
    long newton_iterations = 0;
    long linear_solves = 0;
    double avg_cg_iterations = 0.0;
};

struct DirectScResult {
    StochasticSolution solution;
    StageWork work;
};

/// Standard stochastic collocation: one semilinear solve per grid point.
/// `threads` > 1 dispatches points over a worker pool; results are written
/// to grid-ordered slots either way.
DirectScResult run_direct_sc(const Mesh& mesh, const TensorGrid& grid,
                             const Problem& problem, const NewtonParams& params,
                             int threads = 1);

struct TwoLevelResult {
    StochasticSolution coarse;  // u_{H,P}
    StochasticSolution fine;    // u^{h,p}
    StageWork coarse_work;
    StageWork fine_work;
};

/// Two-level scheme: nonlinear solves on the coarse pair, then one linearized
/// solve per fine collocation point about the interpolated coarse solution
/// (interpolation in y first, then P1 evaluation in x).
TwoLevelResult run_two_level(const Mesh& coarse_mesh, const TensorGrid& coarse_grid,
                             const Mesh& fine_mesh, const TensorGrid& fine_grid,
                             const Problem& problem, const NewtonParams& params,
                             int threads = 1);

void write_work_report(std::span<const StageWork> stages, std::ostream& out);

}  // namespace tlsc
