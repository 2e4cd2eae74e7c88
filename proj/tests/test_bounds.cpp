#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spt/bounds.hpp"
#include "spt/matrix_io.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace spt;

namespace {

// (1 - x^2)^m and its first two derivatives, by hand.
struct Bump {
    int m;
    double operator()(double x) const { return std::pow(1 - x * x, m); }
    double d1(double x) const { return -2.0 * m * x * std::pow(1 - x * x, m - 1); }
    double d2(double x) const {
        return -2.0 * m * std::pow(1 - x * x, m - 1) + 4.0 * m * (m - 1) * x * x * std::pow(1 - x * x, m - 2);
    }
};

double l2(const std::function<double(double)>& g) {
    return std::sqrt(oracle::simpson([&](double x) { return g(x) * g(x); }, -1.0, 1.0, 200000));
}

double grid_sup(const std::function<double(double)>& g) {
    double s = 0.0;
    for (int i = 0; i <= 200000; ++i) {
        s = std::max(s, std::abs(g(-1.0 + i * 1e-5)));
    }
    return s;
}

}  // namespace

TEST_CASE("constant table") {
    const std::int64_t expected[] = {2, 4, 6, 10, 14, 20, 26, 36, 46, 60, 74, 94, 114, 140};
    for (int n = 1; n <= 14; ++n) {
        CHECK(a_sequence(n) == expected[n - 1]);
    }
    const int j[] = {1, 2, 2, 3, 3, 3, 3, 4};
    for (int n = 1; n <= 8; ++n) {
        CHECK(j_of(n) == j[n - 1]);
    }
    CHECK(j_of(1024) == 11);
    CHECK_THROWS_AS(a_sequence(0), DomainError);
    CHECK_THROWS_AS(j_of(0), DomainError);
}

TEST_CASE("root constants at n = 1") {
    // g = (1-x^2)^24, j_1 = 1: C = a_1 |g^{1/2}|_inf max{1, |g^{1/2}|_{G_1}}
    const auto rc = root_constants(make_poly_bump(0.0, 1.0, 24), 1);
    const Bump r{12};
    const double g1 = std::sqrt(2.0) * (l2([&](double x) { return r.d1(x); }) + l2([&](double x) { return r.d2(x); }));
    CHECK(rc.jn == 1);
    CHECK(rc.an == 2);
    CHECK(rc.root_sup == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rc.root_gp_max == doctest::Approx(g1).epsilon(1e-6));
    CHECK(rc.constant == doctest::Approx(2.0 * g1).epsilon(1e-6));
    CHECK(rc.root_gp_max >= g1);

    CHECK_THROWS(root_constants(make_poly_bump(0.0, 1.0, 6), 2));  // 6 / 4 not an integer exponent
    CHECK_THROWS(root_constants(make_poly_bump(0.0, 1.0, 24), 0));
}

TEST_CASE("hs constant at n = 1") {
    const Bump b{8};
    auto fu2 = [&](double x) { return b(x) * (1 + x * x); };
    auto fu2_d1 = [&](double x) { return b.d1(x) * (1 + x * x) + 2 * x * b(x); };
    auto fu2_d2 = [&](double x) { return b.d2(x) * (1 + x * x) + 4 * x * b.d1(x) + 2 * b(x); };
    const double expected = std::sqrt(2.0) * (l2(fu2_d1) + l2(fu2_d2)) + 2.0 * grid_sup(fu2);
    const double c = hs_constant(make_poly_bump(0.0, 1.0, 8), 1);
    CHECK(c == doctest::Approx(expected).epsilon(1e-6));
    CHECK(c >= expected - 1e-9);
}

TEST_CASE("hs constant regression") {
    const auto f = make_poly_bump(0.0, 1.0, 8);
    CHECK(hs_constant(f, 1) == doctest::Approx(17.5397668708).epsilon(1e-8));
    CHECK(hs_constant(f, 2) == doctest::Approx(618.933822075).epsilon(1e-8));
    CHECK(hs_constant(f, 3) == doctest::Approx(2551.75452585).epsilon(1e-8));
    CHECK_THROWS_AS(hs_constant(f, 0), DomainError);
}

TEST_CASE("c_ab") {
    CHECK(c_ab(0.0, 1.0) == doctest::Approx(18.0));
    CHECK(c_ab(-3.0, 1.0) == doctest::Approx(1440.0));
    CHECK(c_ab(0.1, 0.2) == doctest::Approx(18.0));
}

TEST_CASE("compact trace norm certificates") {
    const auto g = make_poly_bump(0.0, 1.0, 24);
    for (int n = 1; n <= 3; ++n) {
        const auto rc = root_constants(g, n);
        CHECK(rc.jn == j_of(n));
        CHECK(rc.an == a_sequence(n));
        for (std::uint64_t t = 0; t < 30; ++t) {
            auto rng = trial_rng(300 + static_cast<std::uint64_t>(n), t);
            const std::size_t dim = 2 + t % 7;
            const auto h = random_hermitian(rng, dim, Interval::closed(-1.5, 1.5));
            const auto v = random_perturbation(rng, dim).scaled(0.3 + 0.1 * static_cast<double>(t % 10));
            const auto d = decompose(h);
            const auto cert = compact_trace_norm_bound(rc, g, d, v.matrix());
            CHECK(cert.kind == "compact");
            CHECK(cert.passed());

            const std::vector<Matrix> perts(static_cast<std::size_t>(n), v.matrix());
            CHECK(cert.lhs == doctest::Approx(schatten_norm(evaluate_moi(g, d, perts).matrix(), 1.0)));
            const double count = static_cast<double>(counting_trace(d, Interval::open(-1.0, 1.0)));
            CHECK(cert.rhs == doctest::Approx(rc.constant * count * std::pow(v.operator_norm(), n)));

            // rhs is homogeneous of degree n in V
            const auto doubled = compact_trace_norm_bound(rc, g, d, 2.0 * v.matrix());
            CHECK(doubled.rhs == doctest::Approx(std::pow(2.0, n) * cert.rhs));
            CHECK(doubled.passed());
        }
    }
    const auto one_shot = compact_trace_norm_bound(g, decompose(HermitianOperator::identity(2).scaled(0.3)),
                                                   Matrix::Identity(2, 2), 1);
    CHECK(one_shot.passed());
    CHECK(one_shot.to_json()["kind"] == "compact");
}

TEST_CASE("remainder certificates") {
    const auto f = make_poly_bump(0.0, 1.0, 24) - 0.7 * make_poly_bump(0.4, 0.8, 24);
    for (int n = 1; n <= 3; ++n) {
        const auto sc = signed_constants(f, n);
        const double c_hs = hs_constant(f, n);
        CHECK(sc.padded_support.lo < -1.0);
        CHECK(sc.padded_support.hi > 1.2);
        for (std::uint64_t t = 0; t < 30; ++t) {
            auto rng = trial_rng(400 + static_cast<std::uint64_t>(n), t);
            const std::size_t dim = 2 + t % 7;
            const auto h0 = random_hermitian(rng, dim, Interval::closed(-2.0, 2.0));
            const auto v = random_perturbation(rng, dim);
            const auto compact = remainder_bound_compact(sc, f, h0, v);
            const auto hs = remainder_bound_hs(c_hs, f, h0, v, n);
            CHECK(compact.passed());
            CHECK(hs.passed());
            const double r = std::abs(remainder_trace(f, h0, v, n));
            CHECK(compact.lhs == doctest::Approx(r));
            CHECK(hs.lhs == doctest::Approx(r));

            const double vn = v.operator_norm();
            const double res = resolvent_trace(decompose(h0));
            CHECK(hs.rhs == doctest::Approx(c_hs * res * (1 + vn + vn * vn) * std::pow(vn, n)));
            const double smax = sc.padded_support.max_abs();
            const double counting = (1 + smax * smax) * (1 + vn + vn * vn) * res;
            CHECK(compact.rhs ==
                  doctest::Approx((sc.c1.constant + sc.c2.constant) * counting * std::pow(vn, n)));
            CHECK(compact.ingredients.at("counting_grid_sup") <= counting + 1e-9);
        }
    }
}

TEST_CASE("resolvent trace") {
    const auto d = decompose(HermitianOperator::diagonal({0.0, 1.0, -2.0}));
    CHECK(resolvent_trace(d) == doctest::Approx(1.0 + 0.5 + 0.2));
}

TEST_CASE("certificate tolerance") {
    BoundCertificate c{"compact", 1.0, 1.0, {}};
    CHECK(c.passed());
    c.lhs = 1.0 + 1e-9;
    CHECK(c.passed());
    c.lhs = 1.0 + 1e-8;
    CHECK_FALSE(c.passed());
}
