#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hexrelay/commands.hpp"
#include "hexrelay/config.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string backend;
    std::string tau;
    std::string sweep;
    std::string out;
    std::optional<std::int64_t> seed;
    std::optional<int> fix_n;
};

void add_common(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--config", opts.config_path, "JSON experiment config");
    cmd->add_option("--backend", opts.backend, "SINR backend: exact | fluid");
    cmd->add_option("--seed", opts.seed, "Override sampling and annealing seeds");
    cmd->add_option("--fix-n", opts.fix_n, "Restrict the search to one relay count");
    cmd->add_option("--tau", opts.tau, "Tau policy: fixed:X | star | backhaul:CB");
    cmd->add_option("--sweep", opts.sweep, "Sweep: omega_R=V1,V2,... | tau_star");
    cmd->add_option("--out", opts.out, "Output directory");
}

hexrelay::ExperimentConfig load_config(const CliOptions& opts) {
    hexrelay::ExperimentConfig config = opts.config_path.empty()
                                            ? hexrelay::ExperimentConfig{}
                                            : hexrelay::ExperimentConfig::from_file(
                                                  opts.config_path);
    if (!opts.backend.empty()) config.backend = hexrelay::parse_backend(opts.backend);
    if (!opts.tau.empty()) config.tau = hexrelay::parse_tau_flag(opts.tau);
    if (!opts.out.empty()) config.out_dir = opts.out;
    if (opts.seed) {
        config.sampling.seed = static_cast<std::uint64_t>(*opts.seed);
        config.annealing.seed = static_cast<std::uint64_t>(*opts.seed);
    }
    if (opts.fix_n) {
        if (*opts.fix_n < 0 || *opts.fix_n > 6)
            throw hexrelay::ConfigError("--fix-n must lie in 0..6");
        config.fix_n = *opts.fix_n;
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relay placement planning for hexagonal cellular networks"};
    app.require_subcommand(1);

    CliOptions opts;
    auto* evaluate = app.add_subcommand("evaluate", "Capacity report for a fixed layout");
    auto* validate = app.add_subcommand("validate", "Fluid-vs-exact CDF and mean-SINR data");
    auto* optimize = app.add_subcommand("optimize", "Simulated-annealing search");
    auto* exhaustive = app.add_subcommand("exhaustive", "Full enumeration of the search space");
    for (auto* cmd : {evaluate, validate, optimize, exhaustive}) add_common(cmd, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        const hexrelay::ExperimentConfig config = load_config(opts);
        if (!opts.sweep.empty()) {
            if (app.got_subcommand(optimize))
                return hexrelay::cmd_sweep(config, opts.sweep, /*exhaustive=*/false);
            if (app.got_subcommand(exhaustive))
                return hexrelay::cmd_sweep(config, opts.sweep, /*exhaustive=*/true);
            throw hexrelay::ConfigError("--sweep applies to optimize and exhaustive only");
        }
        if (app.got_subcommand(evaluate)) return hexrelay::cmd_evaluate(config);
        if (app.got_subcommand(validate)) return hexrelay::cmd_validate(config);
        if (app.got_subcommand(optimize)) return hexrelay::cmd_optimize(config);
        if (app.got_subcommand(exhaustive)) return hexrelay::cmd_exhaustive(config);
        return 1;
    } catch (const hexrelay::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
