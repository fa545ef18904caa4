// Command-line runner for stochastic collocation experiments.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>

#include "tlsc/experiment.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string output_dir;
    int threads = 1;
    bool full_scale = false;
    std::uint64_t seed = 0;  // reserved; the default pipeline is deterministic
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "experiment config file (key = value)");
    cmd->add_option("--output", flags.output_dir, "output directory (overrides config)");
    cmd->add_option("--threads", flags.threads, "worker threads over collocation points")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--full-scale", flags.full_scale, "run the heavy published-scale ladders");
    cmd->add_option("--seed", flags.seed, "reserved for future sampling modes");
}

tlsc::ExperimentConfig load_config(const CommonFlags& flags) {
    tlsc::ExperimentConfig config;
    if (!flags.config_path.empty())
        config = tlsc::parse_config_file(flags.config_path);
    if (!flags.output_dir.empty()) config.output_dir = flags.output_dir;
    config.threads = flags.threads;
    config.full_scale = flags.full_scale;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-level stochastic collocation solver for semilinear elliptic "
                 "problems with random diffusion coefficients"};
    app.require_subcommand(1);

    CommonFlags solve_flags, hstudy_flags, pstudy_flags, table_flags, kl_flags;
    std::string mesh_dump_path;

    CLI::App* solve = app.add_subcommand("solve", "run one configured measurement");
    add_common(solve, solve_flags);
    solve->add_option("--dump-mesh", mesh_dump_path, "write the fine mesh as plain text");

    CLI::App* converge_h = app.add_subcommand(
        "converge-h", "mesh-size convergence ladder, (P,p) = (4,8) fixed");
    add_common(converge_h, hstudy_flags);

    CLI::App* converge_p = app.add_subcommand(
        "converge-p", "polynomial-degree ladder (P,p) in {(1,2),(2,4),(3,6),(4,8)}");
    add_common(converge_p, pstudy_flags);

    CLI::App* table = app.add_subcommand(
        "table", "coarse-only / two-level / direct SC error table at one configuration");
    add_common(table, table_flags);

    CLI::App* kl_spectrum = app.add_subcommand(
        "kl-spectrum", "dump the leading KL eigenvalues of the configured kernel");
    add_common(kl_spectrum, kl_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            const tlsc::ExperimentConfig config = load_config(solve_flags);
            if (!mesh_dump_path.empty()) {
                tlsc::validate_config(config);
                const tlsc::Mesh mesh =
                    tlsc::build_uniform_mesh({-1.0, -1.0, 1.0, 1.0}, config.h);
                std::ofstream out(mesh_dump_path);
                tlsc::write_mesh(mesh, out);
            }
            return tlsc::run_experiment(config).exit_status;
        }
        if (converge_h->parsed()) return tlsc::run_h_study(load_config(hstudy_flags)).exit_status;
        if (converge_p->parsed()) return tlsc::run_p_study(load_config(pstudy_flags)).exit_status;
        if (table->parsed()) return tlsc::run_table(load_config(table_flags)).exit_status;
        if (kl_spectrum->parsed()) return tlsc::run_kl_spectrum(load_config(kl_flags));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
