// scalar_functions.hpp: compactly supported test functions with exact
// derivatives, the weight u(t) = (1+t^2)^{1/2}, G_p seminorms, dyadic roots and
// Fourier L1 norms.
//
// Every function is evaluated through its Taylor jet: jet(x, K)[j] = f^(j)(x)/j!.
// Combinators (sum, product, powers) act on jets, so derivatives stay exact up to
// rounding without symbolic differentiation.

#pragma once

#include "spt/operator_core.hpp"

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spt {

class UnsupportedFamily : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Family {
    PolyBump,
    Polynomial,  // oracle probes x^k, and u^2 = 1 + x^2
    Weight,      // u(t) = (1+t^2)^{1/2}
    Plateau,
    Product,
    Sum,
    ScalarMultiple,
    DyadicRoot,
    Weighted,  // f*u or f*u^2
    Derivative,
};

std::string to_string(Family family);

class ScalarFunction;

namespace detail {

class FunctionNode {
public:
    virtual ~FunctionNode() = default;

    // out[j] = f^(j)(x) / j!  for j < out.size().
    virtual void jet(double x, std::span<double> out) const = 0;
    virtual int max_order() const = 0;
    virtual std::optional<Interval> support() const = 0;
    virtual Family family() const = 0;
    // Points where smoothness drops (support ends, plateau shoulders).
    virtual std::vector<double> breakpoints() const { return {}; }
    // f^{2^{-k}} when the node knows a closed form; nullptr otherwise.
    virtual std::shared_ptr<const FunctionNode> dyadic_root(int k) const;
};

}  // namespace detail

class ScalarFunction {
public:
    explicit ScalarFunction(std::shared_ptr<const detail::FunctionNode> node);

    double operator()(double x) const;
    // j-th derivative; throws DomainError when j > max_order().
    double deriv(int j, double x) const;
    // Taylor coefficients f^(j)(x)/j!, j = 0..order.
    std::vector<double> jet(double x, int order) const;
    void jet_into(double x, std::span<double> out) const;

    int max_order() const { return node_->max_order(); }
    std::optional<Interval> support() const { return node_->support(); }
    bool compactly_supported() const { return support().has_value(); }
    Family family() const { return node_->family(); }
    std::vector<double> breakpoints() const { return node_->breakpoints(); }

    ScalarFunction derivative(int order = 1) const;
    ScalarFunction scaled(double c) const;

    const std::shared_ptr<const detail::FunctionNode>& node() const noexcept { return node_; }

private:
    std::shared_ptr<const detail::FunctionNode> node_;
};

ScalarFunction operator+(const ScalarFunction& f, const ScalarFunction& g);
ScalarFunction operator-(const ScalarFunction& f, const ScalarFunction& g);
ScalarFunction operator*(const ScalarFunction& f, const ScalarFunction& g);
ScalarFunction operator*(double c, const ScalarFunction& f);

// (1 - ((x-center)/radius)^2)^m on [center-radius, center+radius]; C^{m-1}.
ScalarFunction make_poly_bump(double center, double radius, int m);

// Sum_k coeffs[k] x^k. Unbounded support; only meant for oracle probes.
ScalarFunction make_polynomial(std::vector<double> coeffs);
ScalarFunction make_monomial(int k);

// 1 on `core`, 0 outside [core.lo - pad, core.hi + pad], C^smoothness shoulders
// built from the degree 2K+1 smoothstep.
ScalarFunction make_plateau(const Interval& core, double pad, int smoothness);

// plateau^power (exact; dyadic roots available while the power stays integral).
ScalarFunction make_plateau_power(const Interval& core, double pad, int smoothness, int power);

ScalarFunction weight_u();
ScalarFunction product_with_u(const ScalarFunction& f);
ScalarFunction product_with_u2(const ScalarFunction& f);

// f^{2^{-k}} for the closed families (poly bumps with exponent divisible by 2^k,
// positive multiples, plateau powers, and the shifted sums of decompose_signed).
ScalarFunction dyadic_root(const ScalarFunction& f, int k);

// sup |f^(order)| over `over` (default: the support). Dense sampling plus local
// golden-section refinement; throws DomainError for unbounded support without `over`.
double sup_norm(const ScalarFunction& f, int order = 0,
                const std::optional<Interval>& over = std::nullopt);

// L2 norm of f^(order) over the support (or over R for the weight, via x = tan θ).
struct L2Norm {
    double value{0.0};
    double error_estimate{0.0};
};
L2Norm l2_norm_of_derivative(const ScalarFunction& f, int order, int panels = 64, int nodes = 16);

struct GpSeminorm {
    int p{0};
    double value{0.0};
    double error_estimate{0.0};

    // value + error_estimate: the number used wherever a bound must stay rigorous.
    double upper() const { return value + error_estimate; }
};

// (sqrt(2)/p!) (|f^(p)|_2 + |f^(p+1)|_2), composite Gauss-Legendre with an error
// estimate from panel doubling. Requires p+1 <= max_order.
GpSeminorm gp_seminorm(const ScalarFunction& f, int p, int panels = 64);

struct FourierL1Norm {
    double value{0.0};
    double refinement_error{0.0};  // grid and frequency-step halving
    double tail_estimate{0.0};     // |s| > span, from the algebraic decay rate

    double error_estimate() const { return refinement_error + tail_estimate; }
};

// int |F[f^(p)](s)| ds over [-span, span] with the unitary transform
// F[g](s) = (2π)^{-1/2} int g(x) e^{-isx} dx. span <= 0 selects 200/radius.
FourierL1Norm fourier_l1_norm(const ScalarFunction& f, int p, std::size_t grid = std::size_t{1} << 14,
                              double span = 0.0);

struct SeminormReport {
    int p{0};
    double value_gp{0.0};
    double value_fourier{0.0};  // |F[f^(p)]|_1 / p!
    double quadrature_error_estimate{0.0};
    double fourier_error_estimate{0.0};  // already divided by p!
};

SeminormReport seminorm_report(const ScalarFunction& f, int p, std::size_t fourier_grid = std::size_t{1} << 14);

// f = f1 - f2 with f2 = 2|f|_inf b, f1 = f2 + f, b = beta^{2^{j_n}} and beta a
// plateau equal to 1 on supp f (shoulders of width radius/2).
struct SignedDecomposition {
    ScalarFunction f1;
    ScalarFunction f2;
    ScalarFunction plateau_power;  // b
    double shift{0.0};             // 2|f|_inf
    int jn{1};
    Interval padded_support;
};

SignedDecomposition decompose_signed(const ScalarFunction& f, int n);

}  // namespace spt
