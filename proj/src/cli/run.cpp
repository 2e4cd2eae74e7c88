#include "spt/cli.hpp"

#include <CLI11.hpp>

#include <ostream>

namespace spt::cli {

int run(int argc, const char* const* argv, std::ostream& log) {
    CLI::App app{"spt: randomized checks of the trace expansion, its remainder bounds and the shift functions"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    int jobs = 1;
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--seed", seed, "override the config seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--jobs", jobs, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

    auto* expand = app.add_subcommand("expand", "expansion terms, remainders and identities per trial");
    auto* sweep = app.add_subcommand("sweep", "remainder scaling slopes and bounds over the epsilon grid");
    auto* certify = app.add_subcommand("certify", "bound certificates");
    auto* shift = app.add_subcommand("shift", "first and second order trace formulas");
    auto* selftest = app.add_subcommand("selftest", "fixed identity suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kConfigError;
    }

    try {
        ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        if (seed) {
            cfg.seed = *seed;
        }
        if (out_dir) {
            cfg.out_dir = *out_dir;
        }
        if (expand->parsed()) {
            return cmd_expand(cfg, jobs, log);
        }
        if (sweep->parsed()) {
            return cmd_sweep(cfg, jobs, log);
        }
        if (certify->parsed()) {
            return cmd_certify(cfg, jobs, log);
        }
        if (shift->parsed()) {
            return cmd_shift(cfg, jobs, log);
        }
        if (selftest->parsed()) {
            return cmd_selftest(cfg, log);
        }
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        // bad matrix files and unsupported function families are input errors too
        log << "input error: " << e.what() << "\n";
        return kConfigError;
    }
    return kConfigError;
}

}  // namespace spt::cli
