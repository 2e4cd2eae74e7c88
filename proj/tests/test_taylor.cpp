#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spt/matrix_io.hpp"
#include "spt/taylor.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace spt;

namespace {

std::vector<double> dyadic_grid(int lo, int hi) {
    std::vector<double> eps;
    for (int k = lo; k <= hi; ++k) {
        eps.push_back(std::ldexp(1.0, -k));
    }
    return eps;
}

}  // namespace

TEST_CASE("one by one reduces to the scalar Taylor formula") {
    const auto f = make_poly_bump(0.1, 2.0, 10);
    for (double h : {-1.1, -0.2, 0.0, 0.7}) {
        for (double v : {-0.4, 0.05, 0.3}) {
            const auto h0 = HermitianOperator::diagonal({h});
            const auto vv = HermitianOperator::diagonal({v});
            for (int n = 1; n <= 5; ++n) {
                const auto terms = expansion_terms(f, decompose(h0), vv.matrix(), n);
                REQUIRE(terms.size() == static_cast<std::size_t>(n - 1));
                double rem = f(h + v) - f(h);
                for (int p = 1; p < n; ++p) {
                    const double expected = f.deriv(p, h) * std::pow(v, p) / oracle::factorial(p);
                    CHECK(terms[static_cast<std::size_t>(p - 1)] ==
                          doctest::Approx(expected).epsilon(1e-10).scale(1.0));
                    rem -= expected;
                }
                CHECK(std::abs(remainder_trace(f, h0, vv, n) - rem) <= 1e-13);
            }
        }
    }
}

TEST_CASE("two by two by hand") {
    // H0 = diag(0, 1), V = [[0, 1], [1, 0]], f = x^2: Tr (H0+V)^2 = 1 + 1 + 2 = 3 + ...
    const auto f = make_monomial(2);
    const auto h0 = HermitianOperator::diagonal({0.0, 1.0});
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    const HermitianOperator v(m);
    // Tr f(H0) = 1, tau_1 = Tr(f'(H0) V) = 0, tau_2 = Tr(V^2) = 2, Tr f(H0+V) = 3
    const auto r = expand(f, h0, v, 3);
    CHECK(r.base_trace == doctest::Approx(1.0));
    CHECK(r.perturbed_trace == doctest::Approx(3.0));
    CHECK(r.terms[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(r.terms[1] == doctest::Approx(2.0));
    CHECK(std::abs(r.remainder_trace) <= 1e-13);
}

TEST_CASE("cluster path agrees with per-eigenvector tuples") {
    const auto f = make_poly_bump(0.0, 2.5, 10);
    for (std::uint64_t t = 0; t < 30; ++t) {
        auto rng = trial_rng(21, t);
        const std::size_t dim = 2 + t % 5;
        const auto h0 = random_hermitian(rng, dim, Interval::closed(-1.5, 1.5));
        const auto v = random_perturbation(rng, dim);
        const int n = 2 + static_cast<int>(t % 4);
        const auto fast = expansion_terms(f, decompose(h0), v.matrix(), n);
        const auto slow = expansion_terms_direct(f, h0, v, n);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t i = 0; i < fast.size(); ++i) {
            CHECK(std::abs(fast[i] - slow[i]) <= 1e-10 * (1.0 + std::abs(slow[i])));
        }
    }
    const auto big = HermitianOperator::identity(7);
    CHECK_THROWS(expansion_terms_direct(f, big, big, 2));
}

TEST_CASE("terms are trace derivatives over p factorial") {
    const auto f = make_poly_bump(0.0, 3.0, 12);
    for (std::uint64_t t = 0; t < 10; ++t) {
        auto rng = trial_rng(22, t);
        const std::size_t dim = 3 + t % 4;
        const auto h0 = random_hermitian(rng, dim, Interval::closed(-2, 2));
        const auto v = random_perturbation(rng, dim);
        const auto terms = expansion_terms(f, decompose(h0), v.matrix(), 4);
        auto g = [&](double s) { return oracle::trace_function(f, h0.matrix() + s * v.matrix()); };
        for (int p = 1; p <= 3; ++p) {
            const double fd = oracle::fd_scalar(g, p) / oracle::factorial(p);
            CHECK(std::abs(terms[static_cast<std::size_t>(p - 1)] - fd) <= 1e-5);
        }
    }
}

TEST_CASE("telescoping and operator remainder") {
    const auto f = make_poly_bump(0.2, 2.0, 10);
    for (std::uint64_t t = 0; t < 20; ++t) {
        auto rng = trial_rng(23, t);
        const std::size_t dim = 2 + t % 6;
        const auto h0 = random_hermitian(rng, dim, Interval::closed(-1.5, 1.5));
        const auto v = random_perturbation(rng, dim).scaled(0.5);
        const auto d0 = decompose(h0);
        const auto terms = expansion_terms(f, d0, v.matrix(), 5);
        for (int n = 1; n <= 4; ++n) {
            const double diff = remainder_trace(f, h0, v, n) - remainder_trace(f, h0, v, n + 1);
            CHECK(std::abs(diff - terms[static_cast<std::size_t>(n - 1)]) <= 1e-12);
            const auto r = expand(f, h0, v, n);
            CHECK(std::abs(r.operator_remainder_trace - r.remainder_trace) <= 1e-11);
            CHECK(r.operator_remainder_trace_norm + 1e-12 >= std::abs(r.operator_remainder_trace));
        }
    }
}

TEST_CASE("integral form of the remainder") {
    const auto f = make_poly_bump(0.0, 2.5, 12);
    for (std::uint64_t t = 0; t < 20; ++t) {
        auto rng = trial_rng(24, t);
        const std::size_t dim = 2 + t % 5;
        const auto h0 = random_hermitian(rng, dim, Interval::closed(-1.5, 1.5));
        const auto v = random_perturbation(rng, dim);
        for (int p = 1; p <= 3; ++p) {
            const double once = integral_remainder_check(f, h0, v, p, 32, 1);
            const double twice = integral_remainder_check(f, h0, v, p, 64, 1);
            const double split = integral_remainder_check(f, h0, v, p, 32, 2);
            CHECK(once <= 1e-8);
            CHECK(twice <= 1e-8);
            CHECK(split <= 1e-8);
        }
    }
    const auto h0 = HermitianOperator::identity(2);
    CHECK_THROWS_AS(integral_remainder_check(f, h0, h0, 0), DomainError);
}

TEST_CASE("remainder leading coefficient") {
    // R_n(eps V) / eps^n -> tau_n(V), off by eps |tau_{n+1}| + eps^2 |tau_{n+2}| + ...
    const auto f = make_poly_bump(0.0, 8.0, 8);
    for (int n = 1; n <= 4; ++n) {
        for (std::uint64_t t = 0; t < 10; ++t) {
            auto rng = trial_rng(2, static_cast<std::uint64_t>(n) * 100 + t);
            const auto h0 = random_hermitian(rng, 4, Interval::closed(-7.2, 7.2));
            const auto v = random_perturbation(rng, 4);
            const auto tau = expansion_terms(f, decompose(h0), v.matrix(), n + 4);
            const auto at = [&](int p) { return tau[static_cast<std::size_t>(p - 1)]; };
            for (int k = 5; k <= 7; ++k) {
                const double eps = std::ldexp(1.0, -k);
                const double lead = remainder_trace(f, h0, v.scaled(eps), n) / std::pow(eps, n);
                const double tail = 2.0 * (eps * std::abs(at(n + 1)) + eps * eps * std::abs(at(n + 2)) +
                                           eps * eps * eps * std::abs(at(n + 3)));
                CHECK(std::abs(lead - at(n)) <= tail + 1e-6);
            }
        }
    }
}

TEST_CASE("scaling exponent of an exact power") {
    // f = x^3 on a 1x1 operator: R_2(eps v) = 3 h eps^2 v^2 + eps^3 v^3
    const auto f = make_monomial(3);
    const auto h0 = HermitianOperator::diagonal({0.0});
    const auto v = HermitianOperator::diagonal({0.5});
    const auto fit = scaling_exponent(f, h0, v, 2, dyadic_grid(3, 10));
    CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(fit.epsilons.size() == 8);
    const auto h1 = HermitianOperator::diagonal({1.0});
    const auto fit2 = scaling_exponent(f, h1, v, 2, dyadic_grid(3, 10));
    CHECK(fit2.slope >= 2.0);
    CHECK(fit2.slope <= 2.1);
}

TEST_CASE("scaling exponent needs data") {
    const auto f = make_poly_bump(0.0, 2.0, 8);
    const auto h0 = HermitianOperator::diagonal({0.1, 0.5});
    const auto zero = HermitianOperator::zero(2);
    CHECK_THROWS_AS(scaling_exponent(f, h0, zero, 2, dyadic_grid(3, 10)), InsufficientData);
    const auto v = HermitianOperator::diagonal({0.3, -0.2});
    CHECK_THROWS_AS(scaling_exponent(f, h0, v, 2, {0.1, 0.1, 0.1}), InsufficientData);
    CHECK_THROWS_AS(scaling_exponent(f, h0, v, 2, {0.1, -0.1, 0.2}), std::invalid_argument);
}
