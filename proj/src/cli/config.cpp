#include "spt/cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace spt::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(d)) {
            throw std::invalid_argument(v);
        }
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: '" + v + "'");
    }
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long long i = std::stoll(v, &used);
        if (used != v.size()) {
            throw std::invalid_argument(v);
        }
        return i;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an integer: '" + v + "'");
    }
}

}  // namespace

ScalarFunction FunctionSpec::build() const {
    if (family != "poly_bump") {
        throw ConfigError("function.family: only poly_bump is supported, got '" + family + "'");
    }
    if (!(radius > 0.0) || m < 1) {
        throw ConfigError("function: radius must be > 0 and m >= 1");
    }
    auto f = make_poly_bump(center, radius, m);
    if (scale != 1.0) {
        f = scale * f;
    }
    if (weight == "u") {
        return product_with_u(f);
    }
    if (weight == "u2") {
        return product_with_u2(f);
    }
    if (weight != "none") {
        throw ConfigError("function.weight: expected none, u or u2");
    }
    return f;
}

ExperimentConfig::ExperimentConfig() {
    for (int k = 3; k <= 10; ++k) {
        epsilon_grid.push_back(std::ldexp(1.0, -k));
    }
    tolerances = {
        {"identity", 1e-10},     {"slope", 0.15},        {"first_order", 1e-10},
        {"second_order", 1e-8},  {"selftest", 1e-9},
    };
}

double ExperimentConfig::tol(const std::string& key) const { return tolerances.at(key); }

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "seed") {
            const auto s = to_int(key, value);
            if (s < 0) {
                throw ConfigError("seed must be >= 0");
            }
            cfg.seed = static_cast<std::uint64_t>(s);
        } else if (key == "dims") {
            cfg.dims.clear();
            for (const auto& item : split_list(value)) {
                const auto d = to_int(key, item);
                if (d < 1) {
                    throw ConfigError("dims must be >= 1");
                }
                cfg.dims.push_back(static_cast<std::size_t>(d));
            }
        } else if (key == "orders") {
            cfg.orders.clear();
            for (const auto& item : split_list(value)) {
                const auto n = to_int(key, item);
                if (n < 1) {
                    throw ConfigError("orders must be >= 1");
                }
                cfg.orders.push_back(static_cast<int>(n));
            }
        } else if (key == "trials") {
            const auto t = to_int(key, value);
            if (t < 1) {
                throw ConfigError("trials must be >= 1");
            }
            cfg.trials = static_cast<int>(t);
        } else if (key == "epsilon_grid") {
            cfg.epsilon_grid.clear();
            for (const auto& item : split_list(value)) {
                const double e = to_double(key, item);
                if (!(e > 0.0 && e <= 1.0)) {
                    throw ConfigError("epsilon_grid values must lie in (0, 1]");
                }
                cfg.epsilon_grid.push_back(e);
            }
        } else if (key == "noise_floor") {
            cfg.noise_floor = to_double(key, value);
        } else if (key == "function.family") {
            cfg.function.family = value;
        } else if (key == "function.center") {
            cfg.function.center = to_double(key, value);
        } else if (key == "function.radius") {
            cfg.function.radius = to_double(key, value);
        } else if (key == "function.m") {
            cfg.function.m = static_cast<int>(to_int(key, value));
        } else if (key == "function.scale") {
            cfg.function.scale = to_double(key, value);
        } else if (key == "function.weight") {
            cfg.function.weight = value;
        } else if (key == "spectrum_fraction") {
            cfg.spectrum_fraction = to_double(key, value);
        } else if (key == "v_norm") {
            cfg.v_norm = to_double(key, value);
            if (cfg.v_norm < 0.0) {
                throw ConfigError("v_norm must be >= 0");
            }
        } else if (key == "h0_file") {
            cfg.h0_file = value;
        } else if (key == "v_file") {
            cfg.v_file = value;
        } else if (key.rfind("tol.", 0) == 0) {
            const auto name = key.substr(4);
            if (!cfg.tolerances.count(name)) {
                throw ConfigError("unknown tolerance '" + name + "'");
            }
            cfg.tolerances[name] = to_double(key, value);
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "certify.a_offset") {
            cfg.a_offset = static_cast<int>(to_int(key, value));
        } else if (key == "certify.constant_scale") {
            cfg.constant_scale = to_double(key, value);
        } else {
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (cfg.dims.empty() || cfg.orders.empty()) {
        throw ConfigError("dims and orders must not be empty");
    }
    if (cfg.h0_file.has_value() != cfg.v_file.has_value()) {
        throw ConfigError("h0_file and v_file go together");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path);
    }
    return parse_config(in);
}

}  // namespace spt::cli
