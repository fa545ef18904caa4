#include "tlsc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "tlsc/errors.hpp"

namespace tlsc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Rect kUnitSquare{-1.0, -1.0, 1.0, 1.0};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + value + "'");
    }
}

std::string method_name(Method m) {
    switch (m) {
        case Method::DirectSc: return "direct_sc";
        case Method::TwoLevel: return "two_level";
        case Method::CoarseOnly: return "coarse_only";
    }
    return {};
}

std::string example_name(ExampleKind e) {
    switch (e) {
        case ExampleKind::Example1: return "example1";
        case ExampleKind::Example2: return "example2";
        case ExampleKind::Custom: return "custom";
    }
    return {};
}

struct ProblemSetup {
    Problem problem;
    std::optional<ReferenceSolution> analytic;
};

ProblemSetup build_problem(const ExperimentConfig& config) {
    switch (config.example) {
        case ExampleKind::Example1: {
            Example1Definition def = define_example1();
            return {std::move(def.problem), std::move(def.reference)};
        }
        case ExampleKind::Example2: {
            KlConfig kl = config.kl;
            kl.truncation = config.N;
            return {define_example2(kl, kUnitSquare), std::nullopt};
        }
        case ExampleKind::Custom: {
            std::vector<ScalarField> zero_coeffs(
                static_cast<std::size_t>(config.N), [](Vec2) { return 0.0; });
            auto coefficient = std::make_shared<AffineCoefficient>(
                [a = config.custom_a](Vec2) { return a; }, std::move(zero_coeffs));
            auto forcing = [g = config.custom_g](std::span<const double>, Vec2) { return g; };
            return {make_cubic_problem(std::move(coefficient), std::move(forcing), kUnitSquare),
                    std::nullopt};
        }
    }
    throw ConfigError("unknown example kind");
}

std::vector<int> isotropic(int degree, int dims) {
    return std::vector<int>(static_cast<std::size_t>(dims), degree);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ReferenceSolution build_reference(const ExperimentConfig& config, ProblemSetup& setup,
                                  std::vector<StageWork>& work) {
    switch (config.reference.kind) {
        case ReferenceSpec::Kind::Analytic:
            if (!setup.analytic)
                throw ConfigError("no analytic reference for " + example_name(config.example) +
                                  "; use reference = compute or cached:<path>");
            verify_analytic_gradient(*setup.analytic, setup.problem.domain, config.N);
            return *setup.analytic;
        case ReferenceSpec::Kind::Cached:
            return ReferenceSolution::from_solution(load_reference(config.reference.path));
        case ReferenceSpec::Kind::Compute: {
            const int h_ref = config.reference.h_ref > 0 ? config.reference.h_ref : 4 * config.h;
            const int p_ref = config.reference.p_ref > 0 ? config.reference.p_ref : config.p + 2;
            const Mesh mesh = build_uniform_mesh(setup.problem.domain, h_ref);
            const TensorGrid grid(isotropic(p_ref, config.N));
            verify_coercivity(*setup.problem.coefficient, grid, mesh);
            NewtonParams params{config.newton_eps, 25, config.cg_tol, InitialGuess::Zero};
            DirectScResult res = run_direct_sc(mesh, grid, setup.problem, params, config.threads);
            res.work.stage = "reference";
            work.push_back(res.work);
            if (!config.reference.path.empty()) {
                std::ostringstream meta;
                meta << "example = " << example_name(config.example) << "\n"
                     << "h_ref = " << h_ref << "\np_ref = " << p_ref << "\n"
                     << "N = " << config.N << "\n";
                cache_reference(res.solution, config.reference.path, meta.str());
            }
            return ReferenceSolution::from_solution(std::move(res.solution));
        }
    }
    throw ConfigError("unknown reference kind");
}

/// One measurement: solve with the configured method, evaluate both norms.
void run_single(const ExperimentConfig& config, const Problem& problem,
                const ReferenceSolution& reference, ExperimentResult& out) {
    NewtonParams params{config.newton_eps, 25, config.cg_tol, InitialGuess::Zero};

    const StochasticSolution* measured = nullptr;
    std::optional<DirectScResult> direct;
    std::optional<TwoLevelResult> two_level;
    long newton_total = 0;
    long linear_total = 0;
    int validation_degree = 0;

    const auto t0 = std::chrono::steady_clock::now();
    switch (config.method) {
        case Method::DirectSc: {
            const Mesh mesh = build_uniform_mesh(problem.domain, config.h);
            const TensorGrid grid(isotropic(config.p, config.N));
            verify_coercivity(*problem.coefficient, grid, mesh);
            direct = run_direct_sc(mesh, grid, problem, params, config.threads);
            out.work.push_back(direct->work);
            newton_total = direct->work.newton_iterations;
            linear_total = direct->work.linear_solves;
            measured = &direct->solution;
            validation_degree = config.p + config.validation_extra_degree;
            break;
        }
        case Method::TwoLevel: {
            const Mesh coarse_mesh = build_uniform_mesh(problem.domain, config.H);
            const Mesh fine_mesh = build_uniform_mesh(problem.domain, config.h);
            const TensorGrid coarse_grid(isotropic(config.P, config.N));
            const TensorGrid fine_grid(isotropic(config.p, config.N));
            verify_coercivity(*problem.coefficient, coarse_grid, coarse_mesh);
            verify_coercivity(*problem.coefficient, fine_grid, fine_mesh);
            two_level = run_two_level(coarse_mesh, coarse_grid, fine_mesh, fine_grid,
                                      problem, params, config.threads);
            out.work.push_back(two_level->coarse_work);
            out.work.push_back(two_level->fine_work);
            newton_total = two_level->coarse_work.newton_iterations;
            linear_total = two_level->coarse_work.linear_solves +
                           two_level->fine_work.linear_solves;
            measured = &two_level->fine;
            validation_degree = config.p + config.validation_extra_degree;
            break;
        }
        case Method::CoarseOnly: {
            const Mesh mesh = build_uniform_mesh(problem.domain, config.H);
            const TensorGrid grid(isotropic(config.P, config.N));
            verify_coercivity(*problem.coefficient, grid, mesh);
            direct = run_direct_sc(mesh, grid, problem, params, config.threads);
            direct->solution.provenance = Provenance::CoarseNonlinear;
            direct->work.stage = "coarse_only";
            out.work.push_back(direct->work);
            newton_total = direct->work.newton_iterations;
            linear_total = direct->work.linear_solves;
            measured = &direct->solution;
            validation_degree = config.P + config.validation_extra_degree;
            break;
        }
    }
    const double wall = seconds_since(t0);

    const TensorGrid validation(isotropic(validation_degree, config.N));
    for (ErrorNorm norm : {ErrorNorm::L2, ErrorNorm::H1_0}) {
        MeasurementRow row;
        row.example = example_name(config.example);
        row.method = method_name(config.method);
        row.H_sub = config.H;
        row.h_sub = config.h;
        row.P = config.P;
        row.p = config.p;
        row.norm = norm == ErrorNorm::L2 ? "L2" : "H1_0";
        row.error = error_norm(*measured, reference, norm, validation);
        row.newton_iters = newton_total;
        row.linear_solves = linear_total;
        row.wall_seconds = wall;
        out.rows.push_back(std::move(row));
    }
}

void write_reports(const ExperimentConfig& config, const ExperimentResult& result) {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    {
        std::ofstream csv(std::filesystem::path(config.output_dir) / "results.csv");
        write_results_csv(result.rows, csv);
    }
    {
        std::ofstream work(std::filesystem::path(config.output_dir) / "work.txt");
        write_work_report(result.work, work);
        if (result.exit_status != 0)
            work << "error: " << result.error_message << "\n";
    }
}

ExperimentResult run_guarded(const ExperimentConfig& config,
                             const std::function<void(ExperimentResult&)>& body) {
    ExperimentResult result;
    try {
        validate_config(config);
        body(result);
    } catch (const std::exception& e) {
        result.exit_status = 1;
        result.error_message = e.what();
        std::cerr << "error: " << e.what() << "\n";
    }
    write_reports(config, result);
    return result;
}

void write_slopes(const ExperimentConfig& config, const ExperimentResult& result,
                  SlopeAxis axis, const std::function<double(const MeasurementRow&)>& resolution) {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    std::ofstream out(std::filesystem::path(config.output_dir) / "slope.txt");
    for (const char* norm : {"L2", "H1_0"}) {
        std::vector<std::pair<double, double>> pairs;
        for (const MeasurementRow& row : result.rows)
            if (row.norm == norm) pairs.emplace_back(resolution(row), row.error);
        if (pairs.size() < 3) continue;
        out << norm << " slope " << fit_slope(pairs, axis) << "\n";
    }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "example") {
            if (value == "example1") config.example = ExampleKind::Example1;
            else if (value == "example2") config.example = ExampleKind::Example2;
            else if (value == "custom") config.example = ExampleKind::Custom;
            else throw ConfigError("config: unknown example '" + value + "'");
        } else if (key == "method") {
            if (value == "direct_sc") config.method = Method::DirectSc;
            else if (value == "two_level") config.method = Method::TwoLevel;
            else if (value == "coarse_only") config.method = Method::CoarseOnly;
            else throw ConfigError("config: unknown method '" + value + "'");
        } else if (key == "H") {
            config.H = parse_int(key, value);
        } else if (key == "h") {
            config.h = parse_int(key, value);
        } else if (key == "P") {
            config.P = parse_int(key, value);
        } else if (key == "p") {
            config.p = parse_int(key, value);
        } else if (key == "N") {
            config.N = parse_int(key, value);
        } else if (key == "newton_eps") {
            config.newton_eps = parse_double(key, value);
        } else if (key == "cg_tol") {
            config.cg_tol = parse_double(key, value);
        } else if (key == "validation_extra_degree") {
            config.validation_extra_degree = parse_int(key, value);
        } else if (key == "kl_n") {
            config.kl.kl_n = parse_int(key, value);
        } else if (key == "sigma") {
            config.kl.sigma = parse_double(key, value);
        } else if (key == "correlation_length") {
            config.kl.correlation_length = parse_double(key, value);
        } else if (key == "output_dir") {
            config.output_dir = value;
        } else if (key == "reference") {
            config.reference.explicitly_set = true;
            if (value == "analytic") {
                config.reference.kind = ReferenceSpec::Kind::Analytic;
            } else if (value == "compute") {
                config.reference.kind = ReferenceSpec::Kind::Compute;
            } else if (value.rfind("compute:", 0) == 0) {
                config.reference.kind = ReferenceSpec::Kind::Compute;
                config.reference.path = trim(value.substr(8));
            } else if (value.rfind("cached:", 0) == 0) {
                config.reference.kind = ReferenceSpec::Kind::Cached;
                config.reference.path = trim(value.substr(7));
            } else {
                throw ConfigError("config: reference must be analytic, compute[:path] or cached:path");
            }
        } else if (key == "h_ref") {
            config.reference.h_ref = parse_int(key, value);
        } else if (key == "p_ref") {
            config.reference.p_ref = parse_int(key, value);
        } else if (key == "custom_a") {
            config.custom_a = parse_double(key, value);
        } else if (key == "custom_g") {
            config.custom_g = parse_double(key, value);
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    if (!config.reference.explicitly_set && config.example != ExampleKind::Example1)
        config.reference.kind = ReferenceSpec::Kind::Compute;
    return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

void validate_config(const ExperimentConfig& config) {
    if (config.H < 1 || config.h < 1)
        throw ConfigError("config: subdivision counts must be >= 1");
    if (config.h % config.H != 0)
        throw ConfigError("config: fine subdivisions (h = " + std::to_string(config.h) +
                          ") must be a multiple of coarse subdivisions (H = " +
                          std::to_string(config.H) + ")");
    if (config.P < 0 || config.p < 0) throw ConfigError("config: degrees must be >= 0");
    if (config.N < 1) throw ConfigError("config: random dimension N must be >= 1");
    if (!(config.newton_eps > 0.0)) throw ConfigError("config: newton_eps must be positive");
    if (!(config.cg_tol > 0.0)) throw ConfigError("config: cg_tol must be positive");
    if (config.validation_extra_degree < 2)
        throw ConfigError("config: validation_extra_degree must be >= 2");
    if (config.kl.kl_n < 1) throw ConfigError("config: kl_n must be >= 1");
    if (!(config.kl.sigma > 0.0)) throw ConfigError("config: sigma must be positive");
    if (!(config.kl.correlation_length > 0.0))
        throw ConfigError("config: correlation_length must be positive");
    if (config.example == ExampleKind::Example2 && config.N != 2)
        throw ConfigError("config: example2 uses a two-term KL expansion (N = 2)");
    if (config.example == ExampleKind::Custom && !(config.custom_a > 0.0))
        throw ConfigError("config: custom_a must be positive");
    if (config.reference.kind == ReferenceSpec::Kind::Cached && config.reference.path.empty())
        throw ConfigError("config: cached reference needs a path");
    if (config.reference.kind == ReferenceSpec::Kind::Compute) {
        const int h_ref = config.reference.h_ref > 0 ? config.reference.h_ref : 4 * config.h;
        if (h_ref < config.h || h_ref % config.h != 0)
            throw ConfigError("config: h_ref must be a multiple of h");
    }
    if (config.threads < 1) throw ConfigError("config: threads must be >= 1");
}

Example1Definition define_example1() {
    auto coefficient = std::make_shared<AffineCoefficient>(
        ScalarField([](Vec2) { return 3.0; }),
        std::vector<ScalarField>{[](Vec2) { return 1.0; }, [](Vec2) { return 1.0; }});
    const auto u_exact = [](std::span<const double> y, Vec2 x) {
        return std::sin(kPi * x.x) * std::sin(kPi * x.y) / (3.0 + y[0] + y[1]);
    };
    auto forcing = [u_exact](std::span<const double> y, Vec2 x) {
        const double u = u_exact(y, x);
        return -(2.0 * kPi * kPi * std::sin(kPi * x.x) * std::sin(kPi * x.y) + u * u * u);
    };
    auto gradient = [](std::span<const double> y, Vec2 x) -> Vec2 {
        const double a = 3.0 + y[0] + y[1];
        return {kPi * std::cos(kPi * x.x) * std::sin(kPi * x.y) / a,
                kPi * std::sin(kPi * x.x) * std::cos(kPi * x.y) / a};
    };
    Example1Definition def{
        make_cubic_problem(std::move(coefficient), std::move(forcing), kUnitSquare),
        ReferenceSolution::analytic(u_exact, std::move(gradient))};
    validate_problem(def.problem);
    return def;
}

Problem define_example2(const KlConfig& kl, const Rect& domain) {
    if (kl.truncation != 2)
        throw ConfigError("example2 uses a KL truncation of exactly 2 terms");
    const double s2 = kl.sigma * kl.sigma;
    const double len = kl.correlation_length;
    CovarianceFn kernel = [s2, len](Vec2 a, Vec2 b) {
        return s2 * std::exp(-std::hypot(a.x - b.x, a.y - b.y) / len);
    };
    auto field = std::make_shared<KLExpansion>(
        compute_kl(kernel, domain, kl.kl_n, kl.truncation));
    field->set_mean([](Vec2) { return 1.0; });
    auto forcing = [](std::span<const double>, Vec2 x) {
        return 2.0 * (0.5 - x.x * x.x - x.y * x.y);
    };
    Problem problem = make_cubic_problem(std::move(field), std::move(forcing), domain);
    validate_problem(problem);
    return problem;
}

void write_results_csv(const std::vector<MeasurementRow>& rows, std::ostream& out) {
    out << "example,method,H_sub,h_sub,P,p,norm,error,newton_iters,linear_solves,wall_seconds\n";
    char buf[64];
    for (const MeasurementRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g", r.error);
        out << r.example << ',' << r.method << ',' << r.H_sub << ',' << r.h_sub << ','
            << r.P << ',' << r.p << ',' << r.norm << ',' << buf << ',' << r.newton_iters
            << ',' << r.linear_solves << ',';
        std::snprintf(buf, sizeof buf, "%.3f", r.wall_seconds);
        out << buf << '\n';
    }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    return run_guarded(config, [&](ExperimentResult& result) {
        ProblemSetup setup = build_problem(config);
        validate_problem(setup.problem);
        const ReferenceSolution reference = build_reference(config, setup, result.work);
        run_single(config, setup.problem, reference, result);
    });
}

ExperimentResult run_h_study(const ExperimentConfig& config) {
    return run_guarded(config, [&](ExperimentResult& result) {
        std::vector<std::pair<int, int>> ladder = {{4, 8}, {8, 32}, {16, 128}};
        if (config.full_scale) ladder.emplace_back(32, 512);

        ExperimentConfig rung = config;
        rung.P = 4;
        rung.p = 8;
        ProblemSetup setup = build_problem(rung);
        validate_problem(setup.problem);

        // A computed reference must be nested with every rung.
        if (rung.reference.kind == ReferenceSpec::Kind::Compute && rung.reference.h_ref == 0)
            rung.reference.h_ref = 4 * ladder.back().second;
        if (rung.reference.kind == ReferenceSpec::Kind::Compute && rung.reference.p_ref == 0)
            rung.reference.p_ref = rung.p + 2;
        rung.h = ladder.back().second;
        validate_config(rung);
        const ReferenceSolution reference = build_reference(rung, setup, result.work);

        for (const auto& [H_sub, h_sub] : ladder) {
            rung.H = H_sub;
            rung.h = h_sub;
            validate_config(rung);
            run_single(rung, setup.problem, reference, result);
        }
        write_slopes(rung, result, SlopeAxis::LogResolution, [](const MeasurementRow& r) {
            return 2.0 / (r.method == "coarse_only" ? r.H_sub : r.h_sub);
        });
    });
}

ExperimentResult run_p_study(const ExperimentConfig& config) {
    return run_guarded(config, [&](ExperimentResult& result) {
        const std::vector<std::pair<int, int>> ladder = {{1, 2}, {2, 4}, {3, 6}, {4, 8}};

        ExperimentConfig rung = config;
        if (config.full_scale) {
            rung.H = 64;
            rung.h = 2048;
            // published setting: reference on the fine study mesh itself
            if (rung.reference.kind == ReferenceSpec::Kind::Compute && rung.reference.h_ref == 0)
                rung.reference.h_ref = rung.h;
        }
        ProblemSetup setup = build_problem(rung);
        validate_problem(setup.problem);

        if (rung.reference.kind == ReferenceSpec::Kind::Compute && rung.reference.p_ref == 0)
            rung.reference.p_ref = ladder.back().second + 2;
        rung.P = ladder.back().first;
        rung.p = ladder.back().second;
        validate_config(rung);
        const ReferenceSolution reference = build_reference(rung, setup, result.work);

        for (const auto& [P_deg, p_deg] : ladder) {
            rung.P = P_deg;
            rung.p = p_deg;
            validate_config(rung);
            run_single(rung, setup.problem, reference, result);
        }
        write_slopes(rung, result, SlopeAxis::Resolution, [](const MeasurementRow& r) {
            return double(r.method == "coarse_only" ? r.P : r.p);
        });
    });
}

ExperimentResult run_table(const ExperimentConfig& config) {
    ExperimentResult result = run_guarded(config, [&](ExperimentResult& res) {
        ProblemSetup setup = build_problem(config);
        validate_problem(setup.problem);
        const ReferenceSolution reference = build_reference(config, setup, res.work);
        ExperimentConfig row_config = config;
        for (Method m : {Method::CoarseOnly, Method::TwoLevel, Method::DirectSc}) {
            row_config.method = m;
            run_single(row_config, setup.problem, reference, res);
        }
    });
    if (result.exit_status == 0) {
        std::cout << std::left << std::setw(14) << "method" << std::setw(16) << "L2"
                  << std::setw(16) << "H1_0" << "\n";
        for (std::size_t i = 0; i + 1 < result.rows.size(); i += 2) {
            std::cout << std::left << std::setw(14) << result.rows[i].method
                      << std::setw(16) << std::setprecision(6) << result.rows[i].error
                      << std::setw(16) << result.rows[i + 1].error << "\n";
        }
    }
    return result;
}

int run_kl_spectrum(const ExperimentConfig& config) {
    try {
        validate_config(config);
        const double s2 = config.kl.sigma * config.kl.sigma;
        const double len = config.kl.correlation_length;
        const CovarianceFn kernel = [s2, len](Vec2 a, Vec2 b) {
            return s2 * std::exp(-std::hypot(a.x - b.x, a.y - b.y) / len);
        };
        const int count = std::min(32, (config.kl.kl_n + 1) * (config.kl.kl_n + 1));
        const KLExpansion kl = compute_kl(kernel, kUnitSquare, config.kl.kl_n, count);
        std::filesystem::create_directories(config.output_dir);
        std::ofstream out(std::filesystem::path(config.output_dir) / "kl_spectrum.csv");
        out << "n,lambda_n\n";
        char buf[32];
        for (int n = 0; n < count; ++n) {
            std::snprintf(buf, sizeof buf, "%.17g", kl.eigenvalues()[static_cast<std::size_t>(n)]);
            out << n + 1 << ',' << buf << '\n';
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

namespace {

template <typename T>
void write_raw(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
void read_raw(std::istream& in, T& value) {
    in.read(reinterpret_cast<char*>(&value), sizeof value);
    if (!in) throw IoError("solution cache: truncated file");
}

constexpr char kCacheMagic[8] = {'T', 'L', 'S', 'C', '0', '0', '0', '1'};

}  // namespace

void cache_reference(const StochasticSolution& sol, const std::string& path,
                     const std::string& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("solution cache: cannot open " + path + " for writing");
    out.write(kCacheMagic, sizeof kCacheMagic);
    write_raw(out, static_cast<std::uint32_t>(sol.grid.dimension()));
    for (int d = 0; d < sol.grid.dimension(); ++d)
        write_raw(out, static_cast<std::uint32_t>(sol.grid.degrees()[static_cast<std::size_t>(d)]));
    write_raw(out, static_cast<std::uint32_t>(sol.mesh.subdivisions()));
    write_raw(out, static_cast<std::uint32_t>(sol.mesh.vertex_count()));
    for (int d = 0; d < sol.grid.dimension(); ++d)
        for (double node : sol.grid.rule(d).nodes) write_raw(out, node);
    for (const std::vector<double>& v : sol.nodal)
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!out) throw IoError("solution cache: write failed for " + path);
    if (!meta.empty()) {
        std::ofstream ms(path + ".meta");
        ms << meta;
    }
}

StochasticSolution load_reference(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("solution cache: cannot open " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kCacheMagic, sizeof magic) != 0)
        throw IoError("solution cache: bad magic in " + path);

    std::uint32_t dims = 0;
    read_raw(in, dims);
    if (dims == 0 || dims > 64) throw IoError("solution cache: implausible dimension");
    std::vector<int> degrees(dims);
    for (std::uint32_t d = 0; d < dims; ++d) {
        std::uint32_t deg = 0;
        read_raw(in, deg);
        degrees[d] = static_cast<int>(deg);
    }
    std::uint32_t mesh_n = 0, vertex_count = 0;
    read_raw(in, mesh_n);
    read_raw(in, vertex_count);
    if (mesh_n == 0 || vertex_count != (mesh_n + 1) * (mesh_n + 1))
        throw IoError("solution cache: vertex count does not match mesh subdivisions");

    TensorGrid grid(degrees);
    for (int d = 0; d < grid.dimension(); ++d) {
        for (double expected : grid.rule(d).nodes) {
            double stored = 0.0;
            read_raw(in, stored);
            if (std::abs(stored - expected) > 1e-15)
                throw IoError("solution cache: grid nodes do not match degrees");
        }
    }

    StochasticSolution sol{std::move(grid),
                           build_uniform_mesh(kUnitSquare, static_cast<int>(mesh_n)),
                           {}, Provenance::DirectSc};
    sol.nodal.resize(static_cast<std::size_t>(sol.grid.point_count()));
    for (std::vector<double>& v : sol.nodal) {
        v.resize(vertex_count);
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(double)));
        if (!in) throw IoError("solution cache: truncated nodal data in " + path);
    }
    char extra = 0;
    if (in.read(&extra, 1)) throw IoError("solution cache: trailing bytes in " + path);
    return sol;
}

}  // namespace tlsc
