// cli.hpp: batch certification harness behind the spt executable.

#pragma once

#include "spt/scalar_functions.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spt::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kConfigError = 2 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// poly_bump(center, radius, m), times `scale`, optionally times u or u^2.
struct FunctionSpec {
    std::string family{"poly_bump"};
    double center{0.0};
    double radius{1.0};
    int m{24};
    double scale{1.0};
    std::string weight{"none"};  // none | u | u2

    ScalarFunction build() const;
};

struct ExperimentConfig {
    std::uint64_t seed{1};
    std::vector<std::size_t> dims{4, 8};
    std::vector<int> orders{1, 2, 3};
    int trials{20};
    std::vector<double> epsilon_grid;  // 2^-3 .. 2^-10 unless set
    double noise_floor{1e-13};
    FunctionSpec function;
    double spectrum_fraction{0.9};  // H0 spectrum in center +- fraction * radius
    double v_norm{1.0};
    std::optional<std::string> h0_file;  // fixed matrices replace the random draw
    std::optional<std::string> v_file;
    std::map<std::string, double> tolerances;
    std::string out_dir{"spt_out"};
    // mutation knobs for checking that certify can fail
    int a_offset{0};
    double constant_scale{1.0};

    ExperimentConfig();
    double tol(const std::string& key) const;
};

// key = value lines, '#' comments, comma-separated lists. Throws ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Each writes its artifacts into cfg.out_dir, a summary to `log`, and returns an ExitCode.
int cmd_expand(const ExperimentConfig& cfg, int jobs, std::ostream& log);
int cmd_sweep(const ExperimentConfig& cfg, int jobs, std::ostream& log);
int cmd_certify(const ExperimentConfig& cfg, int jobs, std::ostream& log);
int cmd_shift(const ExperimentConfig& cfg, int jobs, std::ostream& log);
int cmd_selftest(const ExperimentConfig& cfg, std::ostream& log);

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& log);

}  // namespace spt::cli
