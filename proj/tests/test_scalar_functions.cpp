#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spt/constants.hpp"
#include "spt/scalar_functions.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <random>

using namespace spt;

TEST_CASE("poly bump values and flatness") {
    const auto f = make_poly_bump(0.0, 1.0, 4);
    CHECK(f(0.0) == 1.0);
    CHECK(f(0.5) == doctest::Approx(0.31640625).epsilon(1e-15));
    for (double x : {-1.0, 1.0}) {
        CHECK(f(x) == 0.0);
        CHECK(f.deriv(1, x) == 0.0);
    }
    CHECK(f.max_order() == 3);
    CHECK(f.family() == Family::PolyBump);
    CHECK_THROWS_AS(f.deriv(4, 0.0), DomainError);
    CHECK_THROWS_AS(make_poly_bump(0.0, 1.0, 1), DomainError);
    CHECK_THROWS_AS(make_poly_bump(0.0, 0.0, 4), DomainError);
    for (int j = 0; j <= 3; ++j) {
        CHECK(f.deriv(j, 1.5) == 0.0);
        CHECK(f.deriv(j, -7.0) == 0.0);
    }
}

TEST_CASE("poly bump derivatives against the expanded polynomial") {
    // (1 - s^2)^3 = 1 - 3 s^2 + 3 s^4 - s^6 with s = (x - 0.5) / 2
    const auto f = make_poly_bump(0.5, 2.0, 3);
    const auto p = make_polynomial({1.0, 0.0, -3.0, 0.0, 3.0, 0.0, -1.0});
    for (double x : {-1.2, -0.3, 0.5, 1.7, 2.4}) {
        const double s = (x - 0.5) / 2.0;
        for (int j = 0; j <= 2; ++j) {
            CHECK(f.deriv(j, x) == doctest::Approx(p.deriv(j, s) / std::pow(2.0, j)).epsilon(1e-13));
        }
    }
}

TEST_CASE("every constructed function matches finite differences of its lower derivative") {
    const auto bump = make_poly_bump(0.3, 1.2, 9);
    const auto u = weight_u();
    std::vector<ScalarFunction> fs{
        bump,
        product_with_u(bump),
        product_with_u2(bump),
        bump * make_poly_bump(0.0, 1.0, 8),
        bump + make_poly_bump(-0.2, 0.9, 7).scaled(-0.5),
        make_plateau(Interval::closed(-0.5, 0.5), 0.4, 8),
        make_plateau_power(Interval::closed(-0.5, 0.5), 0.4, 8, 4),
        dyadic_root(make_poly_bump(0.0, 1.0, 24), 2),
        decompose_signed(bump - make_poly_bump(0.4, 0.5, 8).scaled(2.0), 2).f1,
        dyadic_root(decompose_signed(bump, 2).f1, 2),
        u,
        bump.derivative(2),
    };
    for (const auto& f : fs) {
        const auto supp = f.support().value_or(Interval::closed(-3, 3));
        const int top = std::min(f.max_order(), 6);
        for (int i = 1; i <= 20; ++i) {
            const double x = supp.lo + supp.length() * (i - 0.5) / 20.0;
            for (int j = 1; j <= top; ++j) {
                const double fd = oracle::fd_scalar([&](double e) { return f.deriv(j - 1, x + e); }, 1);
                const double exact = f.deriv(j, x);
                CHECK(std::abs(fd - exact) <= 1e-6 * (1.0 + std::abs(exact)));
            }
        }
    }
}

TEST_CASE("weight u") {
    const auto u = weight_u();
    CHECK(u(0.0) == 1.0);
    CHECK(u.deriv(1, 0.0) == 0.0);
    CHECK(u.deriv(2, 0.0) == doctest::Approx(1.0));
    CHECK_FALSE(u.compactly_supported());
    double sup = 0.0;
    for (int i = -1000; i <= 1000; ++i) {
        sup = std::max(sup, std::abs(u.deriv(1, static_cast<double>(i))));
    }
    CHECK(sup <= 1.0);
    const auto u2 = u * u;
    for (double x : {-30.0, -1.0, 0.0, 0.25, 4.0, 100.0}) {
        CHECK(u2.deriv(2, x) == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(u2(x) == doctest::Approx(1.0 + x * x).epsilon(1e-14));
    }
}

TEST_CASE("sup norm") {
    const auto f = make_poly_bump(0.0, 1.0, 4);
    CHECK(sup_norm(f) == doctest::Approx(1.0).epsilon(1e-14));
    // |f'| peaks at s = 1/sqrt(7): 8 s (1-s^2)^3
    const double s = 1.0 / std::sqrt(7.0);
    CHECK(sup_norm(f, 1) == doctest::Approx(8.0 * s * std::pow(1.0 - s * s, 3)).epsilon(1e-12));
    CHECK_THROWS_AS(sup_norm(weight_u()), DomainError);
    CHECK(sup_norm(weight_u(), 0, Interval::closed(-3, 2)) == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("gp seminorm") {
    const auto f = make_poly_bump(0.0, 1.0, 6);
    const auto zero = f.scaled(0.0);
    CHECK(gp_seminorm(zero, 1).value == 0.0);
    for (int p = 0; p <= 3; ++p) {
        CHECK(gp_seminorm(f.scaled(-2.5), p).value == doctest::Approx(2.5 * gp_seminorm(f, p).value).epsilon(1e-12));
    }
    // closed form: (1-x^2)^6 has polynomial derivatives; Simpson on a fine grid as reference
    auto l2 = [&](int j) {
        return std::sqrt(oracle::simpson([&](double x) { return std::pow(f.deriv(j, x), 2); }, -1.0, 1.0, 200000));
    };
    const double reference = std::sqrt(2.0) * (l2(1) + l2(2));
    const auto g1 = gp_seminorm(f, 1);
    CHECK(g1.value == doctest::Approx(reference).epsilon(1e-8));
    CHECK(std::abs(gp_seminorm(f, 1, 128).value - g1.value) <= 1e-8 * g1.value);
    CHECK(g1.error_estimate >= 0.0);
    CHECK_THROWS_AS(gp_seminorm(f, 5), DomainError);
    CHECK_THROWS_AS(gp_seminorm(weight_u(), 1), DomainError);
    CHECK(gp_seminorm(weight_u(), 2).value > 0.0);
}

TEST_CASE("u seminorm through the tangent map") {
    // u'' = (1+x^2)^{-3/2}: int u''^2 = int (1+x^2)^{-3} = 3 pi / 8
    const auto u = weight_u();
    const auto l2 = l2_norm_of_derivative(u, 2);
    CHECK(l2.value == doctest::Approx(std::sqrt(3.0 * M_PI / 8.0)).epsilon(1e-12));
    CHECK_THROWS_AS(l2_norm_of_derivative(u, 1), DomainError);
}

TEST_CASE("fourier l1 norm") {
    const auto f = make_poly_bump(0.0, 1.0, 6);
    CHECK(fourier_l1_norm(f.scaled(0.0), 1).value == 0.0);
    const auto base = fourier_l1_norm(f, 1);
    CHECK(fourier_l1_norm(f.scaled(3.0), 1).value == doctest::Approx(3.0 * base.value).epsilon(1e-10));
    const auto fine = fourier_l1_norm(f, 1, std::size_t{1} << 15);
    CHECK(std::abs(fine.value - base.value) <= 1e-4 * base.value);

    // p = 0 transform of (1-x^2)^6 is nonnegative-dominated by the L1 norm: |F| <= |f|_1 / sqrt(2 pi)
    const auto f0 = fourier_l1_norm(f, 0);
    CHECK(f0.value > 0.0);
}

TEST_CASE("fourier norm is dominated by the G_p seminorm") {
    const std::vector<ScalarFunction> family{
        make_poly_bump(0.0, 1.0, 6), make_poly_bump(0.3, 2.0, 8), make_poly_bump(-1.0, 0.5, 10),
        product_with_u(make_poly_bump(0.0, 1.5, 8))};
    for (const auto& f : family) {
        for (int p = 0; p <= 3; ++p) {
            const auto r = seminorm_report(f, p);
            CHECK(r.value_fourier <= r.value_gp + r.quadrature_error_estimate + r.fourier_error_estimate);
        }
    }
}

TEST_CASE("dyadic roots") {
    const auto g = make_poly_bump(0.2, 1.1, 3);
    const auto g2 = make_poly_bump(0.2, 1.1, 6);
    const auto root = dyadic_root(g2, 1);
    CHECK(dyadic_root(g2, 0)(0.5) == g2(0.5));
    const auto g8 = make_poly_bump(0.2, 1.1, 24);
    const auto r3 = dyadic_root(g8, 3);
    for (int i = 0; i < 50; ++i) {
        const double x = -1.0 + 2.4 * i / 49.0;
        CHECK(root(x) == doctest::Approx(g(x)).epsilon(1e-14));
        CHECK(std::abs(std::pow(r3(x), 8) - g8(x)) < 1e-12);
    }
    CHECK_THROWS_AS(dyadic_root(make_poly_bump(0.0, 1.0, 5), 1), UnsupportedFamily);
    CHECK_THROWS_AS(dyadic_root(make_poly_bump(0.0, 1.0, 4), 2), UnsupportedFamily);  // root not C^1
    CHECK_THROWS_AS(dyadic_root(g2.scaled(-1.0), 1), UnsupportedFamily);
    CHECK_THROWS_AS(dyadic_root(g2 * g2, 1), UnsupportedFamily);
    const auto scaled = dyadic_root(g2.scaled(4.0), 1);
    CHECK(scaled(0.3) == doctest::Approx(2.0 * g(0.3)).epsilon(1e-14));
}

TEST_CASE("signed decomposition") {
    const auto dip = make_poly_bump(0.0, 1.0, 8) - make_poly_bump(0.3, 0.4, 8).scaled(2.0);
    for (int n : {1, 2, 3}) {
        const auto parts = decompose_signed(dip, n);
        CHECK(parts.jn == j_of(n));
        CHECK(parts.shift == doctest::Approx(2.0 * sup_norm(dip)));
        for (int i = 0; i < 200; ++i) {
            const double x = -1.6 + 3.2 * i / 199.0;
            CHECK(parts.f1(x) >= 0.0);
            CHECK(parts.f2(x) >= 0.0);
            if (i % 2 == 0) {
                CHECK(std::abs(parts.f1(x) - parts.f2(x) - dip(x)) < 1e-12);
            }
        }
        const int power = 1 << parts.jn;
        const auto r1 = dyadic_root(parts.f1, parts.jn);
        const auto r2 = dyadic_root(parts.f2, parts.jn);
        CHECK(r1.max_order() >= n + 1);
        for (double x : {-1.4, -0.9, -0.2, 0.35, 0.8, 1.3}) {
            CHECK(std::pow(r1(x), power) == doctest::Approx(parts.f1(x)).epsilon(1e-12));
            CHECK(std::pow(r2(x), power) == doctest::Approx(parts.f2(x)).epsilon(1e-12));
        }
    }
    const auto zero = decompose_signed(make_poly_bump(0.0, 1.0, 6).scaled(0.0), 1);
    CHECK(zero.f1(0.2) == zero.f2(0.2));
}
