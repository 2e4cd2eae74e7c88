#include "spt/bounds.hpp"
#include "spt/cli.hpp"
#include "spt/matrix_io.hpp"
#include "spt/shift.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace spt::cli {

namespace {

struct Check {
    std::string name;
    bool pass{false};
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::vector<double> node_set(std::mt19937_64& rng, std::size_t count, double lo, double hi) {
    std::uniform_real_distribution<double> uni(lo, hi);
    std::uniform_int_distribution<int> coin(0, 2);
    std::vector<double> x;
    for (std::size_t i = 0; i < count; ++i) {
        if (!x.empty() && coin(rng) == 0) {
            x.push_back(x[std::uniform_int_distribution<std::size_t>(0, x.size() - 1)(rng)]);
        } else {
            x.push_back(uni(rng));
        }
    }
    return x;
}

Check constant_table() {
    const std::int64_t expected[] = {2, 4, 6, 10, 14, 20, 26, 36, 46, 60, 74, 94, 114, 140};
    bool ok = true;
    for (int n = 1; n <= 14; ++n) {
        ok = ok && a_sequence(n) == expected[n - 1];
    }
    for (int n = 1; n <= 8; ++n) {
        ok = ok && j_of(n) == 1 + static_cast<int>(std::floor(std::log2(n)));
    }
    return {"a_sequence table and j_of", ok, ""};
}

Check scalar_identities(const ExperimentConfig& cfg) {
    const auto f = make_poly_bump(0.0, 1.2, 10);
    const auto g = make_poly_bump(0.2, 1.0, 8);
    double split = 0.0;
    double conj = 0.0;
    for (int t = 0; t < 100; ++t) {
        auto rng = trial_rng(cfg.seed, 1000 + static_cast<std::uint64_t>(t));
        const auto x = node_set(rng, 2 + static_cast<std::size_t>(t % 4), -1.1, 1.1);
        split = std::max(split, sqrt_split_residual(f, x));
        conj = std::max(conj, u_conjugation_residual(g, x));
    }
    const double tol = cfg.tol("selftest");
    return {"sqrt split and u conjugation", split <= tol && conj <= tol,
            "max residuals " + fmt("%.3g", split) + ", " + fmt("%.3g", conj)};
}

Check divided_difference_properties(const ExperimentConfig& cfg) {
    const auto f = make_poly_bump(0.0, 1.5, 10);
    double perm = 0.0;
    double mono = 0.0;
    bool mean_value = true;
    for (int t = 0; t < 50; ++t) {
        auto rng = trial_rng(cfg.seed, 2000 + static_cast<std::uint64_t>(t));
        const auto x = node_set(rng, 1 + static_cast<std::size_t>(t % 5), -1.2, 1.2);
        perm = std::max(perm, permutation_symmetry_residual(f, x, static_cast<std::uint64_t>(t)));
        mono = std::max(mono, std::abs(divided_difference(make_monomial(static_cast<int>(x.size()) - 1), x) - 1.0));
        mean_value = mean_value && mean_value_bound_check(f, x);
    }
    const double tol = cfg.tol("selftest");
    return {"divided difference symmetry, monomials, mean value", perm <= tol && mono <= tol && mean_value,
            "max residuals " + fmt("%.3g", perm) + ", " + fmt("%.3g", mono)};
}

Check moi_algebra(const ExperimentConfig& cfg) {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        auto rng = trial_rng(cfg.seed, 3000 + static_cast<std::uint64_t>(t));
        const std::size_t dim = 2 + static_cast<std::size_t>(t % 5);
        const auto d = decompose(random_hermitian(rng, dim, Interval::closed(-1.5, 1.5)));
        const int p = 1 + t % 3;
        std::vector<Matrix> perts;
        for (int i = 0; i < p; ++i) {
            perts.push_back(random_perturbation(rng, dim).matrix());
        }
        const auto phi1 = divided_difference_symbol(make_poly_bump(0.0, 2.0, 8), d, p);
        const auto phi2 = value_symbol(
            [](std::span<const double> x) {
                double s = 1.0;
                for (double y : x) {
                    s += std::cos(y);
                }
                return s;
            },
            d);
        worst = std::max(worst, additivity_check(phi1, phi2, d, perts));
        worst = std::max(worst, product_split_check(phi1, phi2, static_cast<std::size_t>(t % (p + 1)), d, perts));
        worst = std::max(worst, edge_multiplier_check(phi1, make_poly_bump(0.0, 2.0, 4),
                                                      make_polynomial({1.0, 0.5}), d, perts));
    }
    return {"operator integral algebra", worst <= cfg.tol("selftest"), "max residual " + fmt("%.3g", worst)};
}

Check trace_formulas(const ExperimentConfig& cfg) {
    const auto f = make_poly_bump(0.0, 3.0, 10);
    double identity = 0.0;
    double first = 0.0;
    for (int t = 0; t < 20; ++t) {
        auto rng = trial_rng(cfg.seed, 4000 + static_cast<std::uint64_t>(t));
        const std::size_t dim = 2 + static_cast<std::size_t>(t % 7);
        const auto h0 = random_hermitian(rng, dim, Interval::closed(-2, 2));
        const auto v = random_perturbation(rng, dim);
        const auto d = decompose(h0);
        for (int k = 1; k <= 3; ++k) {
            const std::vector<Matrix> perts(static_cast<std::size_t>(k), v.matrix());
            const double scale = 1.0 + std::abs(evaluate_moi(f, d, perts).matrix().trace().real());
            identity = std::max(identity, moi_trace_identity_check(f, d, v.matrix(), k) / scale);
        }
        first = std::max(first, first_order_check(f, h0, v, default_window(h0, v, f.support())));
    }
    return {"trace identities and first-order formula",
            identity <= cfg.tol("selftest") && first <= cfg.tol("first_order"),
            "max residuals " + fmt("%.3g", identity) + ", " + fmt("%.3g", first)};
}

Check fourier_domination() {
    const auto f = make_poly_bump(0.0, 1.0, 8);
    bool ok = true;
    std::string detail;
    for (int p = 0; p <= 3; ++p) {
        const auto r = seminorm_report(f, p);
        ok = ok && r.value_fourier <= r.value_gp + r.quadrature_error_estimate + r.fourier_error_estimate;
        detail += (p ? ", " : "") + fmt("%.4g", r.value_fourier) + " <= " + fmt("%.4g", r.value_gp);
    }
    return {"Fourier L1 dominated by G_p", ok, detail};
}

}  // namespace

int cmd_selftest(const ExperimentConfig& cfg, std::ostream& log) {
    std::vector<Check> checks;
    checks.push_back(constant_table());
    checks.push_back(scalar_identities(cfg));
    checks.push_back(divided_difference_properties(cfg));
    checks.push_back(moi_algebra(cfg));
    checks.push_back(trace_formulas(cfg));
    checks.push_back(fourier_domination());

    std::ostringstream report;
    std::size_t failures = 0;
    for (const auto& c : checks) {
        report << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
        failures += c.pass ? 0 : 1;
    }
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream(std::filesystem::path(cfg.out_dir) / "selftest.txt", std::ios::binary) << report.str();
    log << report.str();
    return failures == 0 ? kPass : kFail;
}

}  // namespace spt::cli
