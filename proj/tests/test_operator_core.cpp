#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spt/matrix_io.hpp"
#include "spt/operator_core.hpp"
#include "spt/scalar_functions.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace spt;

namespace {

Matrix random_unitary(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> g;
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            a(i, j) = Complex{g(rng), g(rng)};
        }
    }
    return Eigen::HouseholderQR<Matrix>(a).householderQ();
}

}  // namespace

TEST_CASE("hermitian validation and symmetrization") {
    Matrix m(2, 2);
    m << Complex{1, 0}, Complex{0, 1}, Complex{0, -1}, Complex{2, 0};
    CHECK_NOTHROW(HermitianOperator{m});
    m(0, 1) = Complex{0.5, 1};
    CHECK_THROWS_AS(HermitianOperator{m}, std::invalid_argument);
    CHECK_THROWS_AS(HermitianOperator{Matrix(2, 3)}, std::invalid_argument);

    // tiny asymmetry below tolerance is averaged away
    m(0, 1) = Complex{1e-14, 1};
    const HermitianOperator h(m);
    CHECK((h.matrix() - h.matrix().adjoint()).norm() == 0.0);
}

TEST_CASE("decompose: diagonal and degenerate inputs") {
    const auto d = decompose(HermitianOperator::diagonal({2, 0, 1}));
    REQUIRE(d.cluster_count() == 3);
    CHECK(d.eigenvalues()(0) == doctest::Approx(0.0));
    CHECK(d.eigenvalues()(1) == doctest::Approx(1.0));
    CHECK(d.eigenvalues()(2) == doctest::Approx(2.0));

    const auto id = decompose(HermitianOperator::identity(3));
    REQUIRE(id.cluster_count() == 1);
    CHECK(id.clusters()[0].size() == 3);
    CHECK((id.projections()[0] - Matrix::Identity(3, 3)).norm() < 1e-12);

    // a gap just under the clustering threshold chains into one cluster
    const auto near = decompose(HermitianOperator::diagonal({0.0, 1e-10, 1.0}));
    CHECK(near.cluster_count() == 2);
    CHECK(std::abs(near.clusters()[0].value - 5e-11) < 1e-20);
}

TEST_CASE("decompose: projections form a resolution of identity") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto rng = trial_rng(1, seed);
        const std::size_t dim = 2 + seed % 15;
        const auto h = random_hermitian(rng, dim, Interval::closed(-3, 3));
        const auto d = decompose(h);
        const auto n = static_cast<Eigen::Index>(dim);
        Matrix sum = Matrix::Zero(n, n);
        for (std::size_t c = 0; c < d.cluster_count(); ++c) {
            const Matrix& p = d.projections()[c];
            sum += p;
            CHECK((p - p.adjoint()).norm() < 1e-10);
            CHECK((p * p - p).norm() < 1e-10);
            for (std::size_t c2 = c + 1; c2 < d.cluster_count(); ++c2) {
                CHECK((p * d.projections()[c2]).norm() < 1e-10);
            }
        }
        CHECK((sum - Matrix::Identity(n, n)).norm() < 1e-10);
        CHECK((d.reconstruct() - h.matrix()).norm() <= 1e-9 * h.matrix().norm());
    }
}

TEST_CASE("apply_function") {
    const auto bump = make_poly_bump(0.0, 1.0, 4);
    const auto far = decompose(HermitianOperator::diagonal({3, 4, 5}));
    CHECK(apply_function(bump, far).matrix().norm() == 0.0);

    // plateau equal to 1 on the spectrum
    const auto plateau = make_plateau(Interval::closed(-2, 2), 1.0, 4);
    const auto d = decompose(HermitianOperator::diagonal({-1.5, 0.3, 1.9}));
    CHECK((apply_function(plateau, d).matrix() - Matrix::Identity(3, 3)).norm() < 1e-14);

    // [[0,1],[1,0]]: eigenvectors (1, +-1)/sqrt2
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    const auto f = make_poly_bump(0.5, 1.0, 3);
    const double c1 = f(1.0);
    const double c2 = f(-1.0);
    Matrix expected(2, 2);
    expected << (c1 + c2) / 2, (c1 - c2) / 2, (c1 - c2) / 2, (c1 + c2) / 2;
    CHECK((apply_function(f, decompose(HermitianOperator(x))).matrix() - expected).norm() < 1e-14);
}

TEST_CASE("apply_function is multiplicative") {
    const auto f = make_poly_bump(0.2, 2.0, 5);
    const auto g = make_poly_bump(-0.3, 1.7, 4);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rng = trial_rng(2, seed);
        const auto d = decompose(random_hermitian(rng, 6, Interval::closed(-1.8, 1.8)));
        const Matrix fg = apply_function(f * g, d).matrix();
        const Matrix prod = apply_function(f, d).matrix() * apply_function(g, d).matrix();
        CHECK((fg - prod).norm() <= 1e-9 * (1.0 + fg.norm()));
    }
}

TEST_CASE("trace") {
    CHECK(trace(Matrix::Identity(3, 3)) == Complex{3, 0});
    CHECK(trace(Matrix::Zero(4, 4)) == Complex{0, 0});
    auto rng = trial_rng(3, 0);
    std::normal_distribution<double> g;
    Matrix a(5, 5);
    for (Eigen::Index i = 0; i < 5; ++i) {
        for (Eigen::Index j = 0; j < 5; ++j) {
            a(i, j) = Complex{g(rng), g(rng)};
        }
    }
    CHECK(std::abs(trace(a + a.adjoint()).imag()) < 1e-12);
}

TEST_CASE("schatten norms") {
    CHECK(schatten_norm(Matrix::Identity(4, 4), 1.0) == doctest::Approx(4.0));
    CHECK(schatten_norm(Matrix::Identity(4, 4), 2.0) == doctest::Approx(2.0));
    CHECK(schatten_norm(Matrix::Identity(4, 4), kInfinity) == doctest::Approx(1.0));
    CHECK_THROWS_AS(schatten_norm(Matrix::Identity(2, 2), 0.5), DomainError);
    CHECK_THROWS_AS(schatten_norm(Matrix::Identity(2, 2), std::nan("")), DomainError);

    Eigen::VectorXcd u(3);
    u << Complex{1, 2}, Complex{0, -1}, Complex{3, 0};
    const Matrix rank_one = u * u.adjoint();
    for (double alpha : {1.0, 1.5, 2.0, 7.0, kInfinity}) {
        CHECK(schatten_norm(rank_one, alpha) == doctest::Approx(u.squaredNorm()).epsilon(1e-12));
    }

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rng = trial_rng(4, seed);
        std::normal_distribution<double> g;
        Matrix a(6, 6);
        for (Eigen::Index i = 0; i < 6; ++i) {
            for (Eigen::Index j = 0; j < 6; ++j) {
                a(i, j) = Complex{g(rng), g(rng)};
            }
        }
        const double n1 = schatten_norm(a, 1.0);
        const double n2 = schatten_norm(a, 2.0);
        const double ninf = schatten_norm(a, kInfinity);
        CHECK(n1 >= n2);
        CHECK(n2 >= ninf);
        CHECK(n2 == doctest::Approx(a.norm()).epsilon(1e-12));

        const Matrix q = random_unitary(rng, 6);
        for (double alpha : {1.0, 2.0, 3.0, kInfinity}) {
            CHECK(std::abs(schatten_norm(q * a * q.adjoint(), alpha) - schatten_norm(a, alpha)) <
                  1e-10 * (1.0 + schatten_norm(a, alpha)));
        }
    }
}

TEST_CASE("counting trace") {
    const auto d = decompose(HermitianOperator::diagonal({-1, 0, 2}));
    CHECK(counting_trace(d, Interval::closed(-0.5, 1)) == 1);
    CHECK(counting_trace(d, Interval::open(-1, 2)) == 1);
    CHECK(counting_trace(d, Interval::left_open(-1, 2)) == 2);
    CHECK(counting_trace(decompose(HermitianOperator::identity(3)), Interval::closed(1, 1)) == 3);
    auto rng = trial_rng(5, 0);
    const auto h = decompose(random_hermitian(rng, 8, Interval::closed(-2, 2)));
    CHECK(counting_trace(h, Interval::closed(-2.5, 2.5)) == 8);
}

TEST_CASE("psd order") {
    CHECK(psd_leq(Matrix::Zero(3, 3), Matrix::Identity(3, 3)));
    auto rng = trial_rng(6, 0);
    const Matrix a = random_hermitian(rng, 4, Interval::closed(-1, 1)).matrix();
    CHECK(psd_leq(a, a));
    const Matrix p = HermitianOperator::diagonal({2, 0}).matrix();
    const Matrix q = HermitianOperator::diagonal({1, 1}).matrix();
    CHECK_FALSE(psd_leq(p, q));
    CHECK_FALSE(psd_leq(q, p));
}

TEST_CASE("resolvent and projection inequalities") {
    const auto zero = HermitianOperator::zero(6);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto rng = trial_rng(7, seed);
        const auto h0 = random_hermitian(rng, 6, Interval::closed(-4, 4));
        const auto w = random_perturbation(rng, 6).scaled(0.1 + 3.0 * (static_cast<double>(seed) / 50.0));
        CHECK(resolvent_inequality_check(h0, w));
        CHECK(resolvent_inequality_check(h0, zero));
        CHECK(resolvent_inequality_check(zero, w));
        CHECK(projection_inequality_check(h0, w, Interval::closed(-1, 2)));
        CHECK(projection_inequality_check(h0, w, Interval::closed(-6, 6)));
    }
    const auto h0 = HermitianOperator::diagonal({-1, 0, 1});
    CHECK(projection_inequality_check(h0, HermitianOperator::zero(3), Interval::closed(5, 6)));
    CHECK(projection_inequality_check(h0, HermitianOperator::zero(3), Interval::closed(-1, 1)));
}

TEST_CASE("trace class bounds for f(H)") {
    const auto f = make_poly_bump(0.0, 1.0, 6);
    CHECK(trace_class_bound_check(f, decompose(HermitianOperator::diagonal({2, 3}))));
    CHECK(trace_class_bound_check(f, decompose(HermitianOperator::diagonal({0.4}))));
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto rng = trial_rng(8, seed);
        CHECK(trace_class_bound_check(f, decompose(random_hermitian(rng, 8, Interval::closed(-1.5, 1.5)))));
    }
}

TEST_CASE("matrix json round trip") {
    auto rng = trial_rng(9, 0);
    const auto h = random_hermitian(rng, 5, Interval::closed(-1, 1));
    const auto back = hermitian_from_json(to_json(h.matrix()));
    CHECK((back.matrix() - h.matrix()).norm() == 0.0);

    nlohmann::json bad = to_json(h.matrix());
    bad["im"][0][1] = 5.0;
    CHECK_THROWS_AS(hermitian_from_json(bad), std::invalid_argument);
    bad = to_json(h.matrix());
    bad["re"][1] = std::vector<double>{1.0};
    CHECK_THROWS_AS(hermitian_from_json(bad), std::invalid_argument);
}

TEST_CASE("random generators") {
    auto a = trial_rng(11, 3);
    auto b = trial_rng(11, 3);
    const auto h1 = random_hermitian(a, 7, Interval::closed(-2, 5));
    const auto h2 = random_hermitian(b, 7, Interval::closed(-2, 5));
    CHECK((h1.matrix() - h2.matrix()).norm() == 0.0);
    const auto d = decompose(h1);
    CHECK(d.eigenvalues()(0) == doctest::Approx(-2.0));
    CHECK(d.eigenvalues()(6) == doctest::Approx(5.0));
    CHECK(random_perturbation(a, 7).operator_norm() == doctest::Approx(1.0));
}
