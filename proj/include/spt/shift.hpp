// shift.hpp: eigenvalue-counting difference xi, the atomic measure mu and the
// density eta for the first- and second-order trace formulas.

#pragma once

#include "spt/bounds.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace spt {

// values[k] on [breakpoints[k], breakpoints[k+1]); zero outside.
struct StepFunction {
    std::vector<double> breakpoints;
    std::vector<double> values;

    double operator()(double x) const;
    // int_lo^x
    double integral_to(double x) const;
};

struct Atom {
    double location{0.0};
    double weight{0.0};
};

struct AtomicMeasure {
    std::vector<Atom> atoms;

    double total_mass() const;
    // mu((-inf, x))
    double mass_below(double x) const;
};

// slope * x + intercept on (lo, hi]
struct AffinePiece {
    double lo{0.0};
    double hi{0.0};
    double slope{0.0};
    double intercept{0.0};

    double operator()(double x) const { return slope * x + intercept; }
};

struct PiecewiseLinearFunction {
    std::vector<AffinePiece> pieces;  // ascending, contiguous

    double operator()(double x) const;
    double l1_norm() const;
};

// a = min spec(H0) - 1 - |V|, b = max spec(H0) + 1 + |V|, widened to contain `must_contain`.
Interval default_window(const HermitianOperator& h0, const HermitianOperator& v,
                        const std::optional<Interval>& must_contain = std::nullopt);

// xi(l) = #spec(H0) in (a, l] - #spec(H0+V) in (a, l]. Throws DomainError when an
// eigenvalue of either operator falls outside the open window.
StepFunction xi(const HermitianOperator& h0, const HermitianOperator& v, const Interval& window);

// |Tr f(H0+V) - Tr f(H0) - int f' xi|, the integral taken exactly on each step.
double first_order_check(const ScalarFunction& f, const HermitianOperator& h0, const HermitianOperator& v,
                         const Interval& window);

// Atoms Tr(P_c V) at the clusters of H0 inside the window.
AtomicMeasure mu_measure(const SpectralDecomposition& d0, const Matrix& v, const Interval& window);

// eta(l) = mu((a, l)) - int_a^l xi
PiecewiseLinearFunction eta(const HermitianOperator& h0, const HermitianOperator& v, const Interval& window);

// |R_2 - int f'' eta|, Gauss-Legendre (8 nodes) on each affine piece, split at
// the breakpoints of f.
double second_order_check(const ScalarFunction& f, const HermitianOperator& h0, const HermitianOperator& v,
                          const Interval& window);

// int |eta| <= C_{a,b} |(1+H0^2)^{-1}|_1 (1 + |V| + |V|^2) |V|^2
BoundCertificate eta_l1_bound_check(const HermitianOperator& h0, const HermitianOperator& v, const Interval& window);

struct ShiftData {
    StepFunction xi;
    PiecewiseLinearFunction eta;
    AtomicMeasure mu;

    nlohmann::json to_json() const;
};

ShiftData shift_data(const HermitianOperator& h0, const HermitianOperator& v, const Interval& window);

}  // namespace spt
