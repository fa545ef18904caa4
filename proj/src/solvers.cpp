#include "tlsc/solvers.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "tlsc/errors.hpp"
#include "tlsc/parallel.hpp"

namespace tlsc {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

ScalarField freeze_coefficient(const Problem& problem, std::span<const double> y) {
    std::vector<double> yv(y.begin(), y.end());
    const CoefficientField* field = problem.coefficient.get();
    return [field, yv = std::move(yv)](Vec2 x) { return field->evaluate(yv, x); };
}

ScalarField freeze_forcing(const Problem& problem, std::span<const double> y) {
    std::vector<double> yv(y.begin(), y.end());
    const auto& g = problem.forcing;
    return [&g, yv = std::move(yv)](Vec2 x) { return g(yv, x); };
}

/// P1 evaluation of a nodal vector as a ScalarField.
ScalarField nodal_field(const Mesh& mesh, std::span<const double> nodal) {
    return [&mesh, nodal](Vec2 x) { return evaluate_p1(mesh, nodal, x); };
}

}  // namespace

Problem make_cubic_problem(std::shared_ptr<const CoefficientField> coefficient,
                           std::function<double(std::span<const double>, Vec2)> forcing,
                           const Rect& domain) {
    Problem p;
    p.coefficient = std::move(coefficient);
    p.f = [](double u) { return u * u * u; };
    p.f_prime = [](double u) { return 3.0 * u * u; };
    p.forcing = std::move(forcing);
    p.domain = domain;
    return p;
}

void validate_problem(const Problem& problem) {
    if (!problem.coefficient || !problem.f || !problem.f_prime || !problem.forcing)
        throw Error("validate_problem: incomplete problem definition");
    const double step = 1e-6;
    for (double u : {-1.0, 0.0, 1.0, 2.0}) {
        const double fd = (problem.f(u + step) - problem.f(u - step)) / (2.0 * step);
        const double fp = problem.f_prime(u);
        const double scale = std::max({std::abs(fd), std::abs(fp), 1.0});
        if (std::abs(fd - fp) > 1e-6 * scale) {
            std::ostringstream os;
            os << "validate_problem: f_prime(" << u << ") = " << fp
               << " disagrees with finite difference " << fd;
            throw Error(os.str());
        }
    }
}

NewtonResult solve_semilinear(const Mesh& mesh, const Problem& problem,
                              std::span<const double> y, const NewtonParams& params) {
    if (!(params.rel_tol > 0.0) || params.max_iters < 1)
        throw Error("solve_semilinear: invalid Newton parameters");

    const ScalarField a_y = freeze_coefficient(problem, y);
    const ScalarField g_y = freeze_forcing(problem, y);
    const CsrMatrix A = assemble_stiffness(mesh, a_y);

    NewtonResult result;
    result.nodal.assign(static_cast<std::size_t>(mesh.vertex_count()), 0.0);

    PcgOptions cg;
    cg.tol = params.cg_tol;

    for (int l = 0; l < params.max_iters; ++l) {
        const ScalarField u_l = nodal_field(mesh, result.nodal);
        const ScalarField jac_weight = [&](Vec2 x) { return problem.f_prime(u_l(x)); };
        const ScalarField rhs_field = [&](Vec2 x) {
            const double u = u_l(x);
            return -problem.f(u) - g_y(x) + problem.f_prime(u) * u;
        };
        const CsrMatrix J = assemble_weighted_mass(mesh, jac_weight);
        const std::vector<double> F = assemble_load(mesh, rhs_field);

        const ReducedSystem sys = apply_dirichlet(CsrMatrix::add(A, J), F, mesh);
        std::vector<double> next;
        if (sys.interior.empty()) {
            next.assign(result.nodal.size(), 0.0);  // no interior unknowns
        } else {
            const PcgResult lin = pcg_solve(sys.matrix, sys.rhs, cg);
            result.cg_iterations += lin.iterations;
            next = sys.expand(lin.x);
        }
        ++result.iterations;

        std::vector<double> diff(next.size());
        for (std::size_t i = 0; i < next.size(); ++i) diff[i] = next[i] - result.nodal[i];
        const double inc = norm2(diff);
        const double next_norm = norm2(next);
        result.nodal = std::move(next);

        if (next_norm < 1e-14) {
            result.increment_history.push_back(inc);
            if (inc < 1e-14) return result;
        } else {
            result.increment_history.push_back(inc / next_norm);
            if (inc / next_norm <= params.rel_tol) return result;
        }
    }

    std::ostringstream os;
    os << "solve_semilinear: Newton did not reach rel_tol " << params.rel_tol
       << " within " << params.max_iters << " iterations";
    throw ConvergenceError(os.str(), result.increment_history.back(),
                           result.increment_history);
}

LinearizedResult solve_linearized(const Mesh& mesh, const Problem& problem,
                                  std::span<const double> y, const ScalarField& v,
                                  double cg_tol) {
    const ScalarField a_y = freeze_coefficient(problem, y);
    const ScalarField g_y = freeze_forcing(problem, y);
    const ScalarField jac_weight = [&](Vec2 x) { return problem.f_prime(v(x)); };
    const ScalarField rhs_field = [&](Vec2 x) {
        const double vv = v(x);
        return -problem.f(vv) - g_y(x) + problem.f_prime(vv) * vv;
    };

    const CsrMatrix A = assemble_stiffness(mesh, a_y);
    const CsrMatrix J = assemble_weighted_mass(mesh, jac_weight);
    const std::vector<double> F = assemble_load(mesh, rhs_field);
    const ReducedSystem sys = apply_dirichlet(CsrMatrix::add(A, J), F, mesh);

    LinearizedResult result;
    if (sys.interior.empty()) {
        result.nodal.assign(static_cast<std::size_t>(mesh.vertex_count()), 0.0);
        return result;
    }
    PcgOptions cg;
    cg.tol = cg_tol;
    const PcgResult lin = pcg_solve(sys.matrix, sys.rhs, cg);
    result.cg_iterations = lin.iterations;
    result.nodal = sys.expand(lin.x);
    return result;
}

DirectScResult run_direct_sc(const Mesh& mesh, const TensorGrid& grid,
                             const Problem& problem, const NewtonParams& params,
                             int threads) {
    DirectScResult out{
        StochasticSolution{grid, mesh, {}, Provenance::DirectSc},
        StageWork{"direct_sc", grid.point_count(), 0, 0, 0.0}};
    out.solution.nodal.resize(static_cast<std::size_t>(grid.point_count()));

    std::vector<long> newton(static_cast<std::size_t>(grid.point_count()), 0);
    std::vector<long> cg(static_cast<std::size_t>(grid.point_count()), 0);
    parallel_for(grid.point_count(), threads, [&](int k) {
        const std::vector<double> y = grid.point(k);
        try {
            NewtonResult r = solve_semilinear(mesh, problem, y, params);
            newton[static_cast<std::size_t>(k)] = r.iterations;
            cg[static_cast<std::size_t>(k)] = r.cg_iterations;
            out.solution.nodal[static_cast<std::size_t>(k)] = std::move(r.nodal);
        } catch (const Error& e) {
            std::ostringstream os;
            os << "direct SC failed at collocation point " << k << ", y = (";
            for (std::size_t i = 0; i < y.size(); ++i) os << (i ? ", " : "") << y[i];
            os << "): " << e.what();
            throw Error(os.str());
        }
    });

    for (int k = 0; k < grid.point_count(); ++k) {
        out.work.newton_iterations += newton[static_cast<std::size_t>(k)];
        out.work.linear_solves += newton[static_cast<std::size_t>(k)];
        out.work.avg_cg_iterations += double(cg[static_cast<std::size_t>(k)]);
    }
    if (out.work.linear_solves > 0)
        out.work.avg_cg_iterations /= double(out.work.linear_solves);
    return out;
}

TwoLevelResult run_two_level(const Mesh& coarse_mesh, const TensorGrid& coarse_grid,
                             const Mesh& fine_mesh, const TensorGrid& fine_grid,
                             const Problem& problem, const NewtonParams& params,
                             int threads) {
    if (coarse_mesh.subdivisions() > fine_mesh.subdivisions())
        throw Error("run_two_level: coarse mesh finer than fine mesh");
    for (int d = 0; d < coarse_grid.dimension(); ++d) {
        if (coarse_grid.degrees()[static_cast<std::size_t>(d)] >
            fine_grid.degrees()[static_cast<std::size_t>(d)]) {
            std::fprintf(stderr,
                         "warning: coarse collocation degree exceeds fine degree "
                         "in dimension %d\n", d + 1);
        }
    }

    DirectScResult coarse = run_direct_sc(coarse_mesh, coarse_grid, problem, params, threads);
    coarse.solution.provenance = Provenance::CoarseNonlinear;
    coarse.work.stage = "two_level_coarse";

    TwoLevelResult out{std::move(coarse.solution),
                       StochasticSolution{fine_grid, fine_mesh, {}, Provenance::TwoLevel},
                       coarse.work,
                       StageWork{"two_level_fine", fine_grid.point_count(), 0, 0, 0.0}};
    out.fine.nodal.resize(static_cast<std::size_t>(fine_grid.point_count()));

    std::vector<long> cg(static_cast<std::size_t>(fine_grid.point_count()), 0);
    parallel_for(fine_grid.point_count(), threads, [&](int k) {
        const std::vector<double> y = fine_grid.point(k);
        try {
            // u_{H,P}(y_k, .): interpolate coarse nodal vectors in y first,
            // then evaluate spatially on the coarse mesh.
            const std::vector<double> coarse_at_y =
                interpolate_vectors(out.coarse.grid, out.coarse.nodal, y);
            const ScalarField v = [&](Vec2 x) {
                return evaluate_p1(out.coarse.mesh, coarse_at_y, x);
            };
            LinearizedResult r = solve_linearized(fine_mesh, problem, y, v, params.cg_tol);
            cg[static_cast<std::size_t>(k)] = r.cg_iterations;
            out.fine.nodal[static_cast<std::size_t>(k)] = std::move(r.nodal);
        } catch (const Error& e) {
            std::ostringstream os;
            os << "two-level fine stage failed at collocation point " << k << ", y = (";
            for (std::size_t i = 0; i < y.size(); ++i) os << (i ? ", " : "") << y[i];
            os << "): " << e.what();
            throw Error(os.str());
        }
    });

    out.fine_work.linear_solves = fine_grid.point_count();
    for (long c : cg) out.fine_work.avg_cg_iterations += double(c);
    if (out.fine_work.linear_solves > 0)
        out.fine_work.avg_cg_iterations /= double(out.fine_work.linear_solves);
    return out;
}

void write_work_report(std::span<const StageWork> stages, std::ostream& out) {
    out << "stage, points, newton_iters_total, linear_solves, avg_cg_iters\n";
    for (const StageWork& s : stages) {
        out << s.stage << ", " << s.points << ", " << s.newton_iterations << ", "
            << s.linear_solves << ", " << s.avg_cg_iterations << "\n";
    }
}

}  // namespace tlsc
