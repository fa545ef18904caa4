#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tlsc/error_norms.hpp"
#include "tlsc/solvers.hpp"

namespace tlsc {

enum class ExampleKind { Example1, Example2, Custom };
enum class Method { DirectSc, TwoLevel, CoarseOnly };

struct KlConfig {
    int kl_n = 64;
    double sigma = 0.4;
    double correlation_length = 1.0;
    int truncation = 2;
};

struct ReferenceSpec {
    enum class Kind { Analytic, Cached, Compute };
    Kind kind = Kind::Analytic;
    std::string path;  // cached file
    int h_ref = 0;     // subdivisions; 0 = 4 * fine subdivisions
    int p_ref = 0;     // isotropic degree; 0 = fine degree + 2
    bool explicitly_set = false;
};

/// Flat key-value experiment description; see README for the key list.
struct ExperimentConfig {
    ExampleKind example = ExampleKind::Example1;
    Method method = Method::TwoLevel;
    int H = 8;   // coarse subdivisions per side
    int h = 32;  // fine subdivisions per side
    int P = 2;   // coarse isotropic degree
    int p = 4;   // fine isotropic degree
    int N = 2;   // random dimension
    double newton_eps = 1e-2;
    double cg_tol = 1e-9;
    int validation_extra_degree = 2;
    KlConfig kl;
    std::string output_dir = "out";
    ReferenceSpec reference;
    double custom_a = 1.0;  // custom example: constant coefficient
    double custom_g = 1.0;  // custom example: constant forcing
    // Runtime knobs (CLI flags, not config keys).
    int threads = 1;
    bool full_scale = false;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

/// Rejects inconsistent configs (non-nested meshes, nonpositive tolerances)
/// before any solve starts.
void validate_config(const ExperimentConfig& config);

struct Example1Definition {
    Problem problem;
    ReferenceSolution reference;  // exact solution with gradient
};

/// a = 3 + y1 + y2, f(u) = u^3, forcing manufactured so that
/// u = sin(pi x1) sin(pi x2) / a solves the problem.
Example1Definition define_example1();

/// KL coefficient with unit mean and exponential covariance
/// sigma^2 exp(-|x-x'|/correlation_length); f(u) = u^3, g = 2(0.5 - |x|^2).
Problem define_example2(const KlConfig& kl, const Rect& domain);

struct MeasurementRow {
    std::string example;
    std::string method;
    int H_sub = 0;
    int h_sub = 0;
    int P = 0;
    int p = 0;
    std::string norm;
    double error = 0.0;
    long newton_iters = 0;
    long linear_solves = 0;
    double wall_seconds = 0.0;
};

void write_results_csv(const std::vector<MeasurementRow>& rows, std::ostream& out);

struct ExperimentResult {
    int exit_status = 0;
    std::vector<MeasurementRow> rows;
    std::vector<StageWork> work;
    std::string error_message;
};

/// Runs one configured measurement and writes results.csv and work.txt into
/// config.output_dir. Exit status 0 iff every measurement completed.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Convergence study in mesh size: ladder of (H,h) subdivision pairs with
/// (P,p) fixed at (4,8). Also writes slope.txt with fitted orders.
ExperimentResult run_h_study(const ExperimentConfig& config);

/// Convergence study in polynomial degree: (P,p) in {(1,2),(2,4),(3,6),(4,8)}
/// with (H,h) fixed. Also writes slope.txt with exponential decay rates.
ExperimentResult run_p_study(const ExperimentConfig& config);

/// Coarse-only, two-level, and direct SC errors at one configuration,
/// printed as a three-row table and written to results.csv.
ExperimentResult run_table(const ExperimentConfig& config);

/// KL eigenvalue dump `n,lambda_n` for the configured covariance kernel.
int run_kl_spectrum(const ExperimentConfig& config);

/// Binary solution cache (header TLSC0001); see README for the layout.
void cache_reference(const StochasticSolution& sol, const std::string& path,
                     const std::string& meta = {});
StochasticSolution load_reference(const std::string& path);

}  // namespace tlsc
