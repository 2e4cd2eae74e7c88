// taylor.hpp: the expansion of Tr f(H0+V) in powers of V, its remainder, the
// operator remainder and the integral form of the remainder.

#pragma once

#include "spt/moi.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace spt {

class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SlopeFit {
    std::vector<double> epsilons;  // points actually used
    std::vector<double> remainders;
    double slope{0.0};
};

struct ExpansionReport {
    int n{1};
    double base_trace{0.0};
    double perturbed_trace{0.0};
    std::vector<double> terms;  // tau_1 .. tau_{n-1}
    double remainder_trace{0.0};
    double operator_remainder_trace{0.0};
    double operator_remainder_trace_norm{0.0};
    std::optional<SlopeFit> slope_fit;
};

// tau_p = (1/p) Sum (f')^[p-1](mu_{i_1}..mu_{i_p}) <V psi_{i_1}, psi_{i_2}> ... <V psi_{i_p}, psi_{i_1}>
// for p = 1..n-1, through cluster sums.
std::vector<double> expansion_terms(const ScalarFunction& f, const SpectralDecomposition& d0, const Matrix& v, int n);

// Same terms from raw eigenvectors and per-tuple divided differences; dim <= 6.
std::vector<double> expansion_terms_direct(const ScalarFunction& f, const HermitianOperator& h0,
                                           const HermitianOperator& v, int n);

// Tr f(H0+V) - Tr f(H0) - Sum_{p<n} tau_p
double remainder_trace(const ScalarFunction& f, const HermitianOperator& h0, const HermitianOperator& v, int n);

ExpansionReport expand(const ScalarFunction& f, const HermitianOperator& h0, const HermitianOperator& v, int n);

// f(H0+V) - Sum_{k<p} (1/k!) d^k/ds^k f(H0+sV)|_0
Matrix operator_remainder(const ScalarFunction& f, const HermitianOperator& h0, const HermitianOperator& v, int p);

// |(1/(p-1)!) int_0^1 (1-t)^{p-1} d^p/ds^p f(H0+sV)|_t dt - operator_remainder|_2,
// Gauss-Legendre with quad_nodes nodes on each of `panels` subintervals.
double integral_remainder_check(const ScalarFunction& f, const HermitianOperator& h0, const HermitianOperator& v,
                                int p, int quad_nodes = 32, int panels = 1);

inline constexpr double kRemainderNoiseFloor = 1e-13;

// Least-squares slope of log|R_n(eps V)| against log eps, skipping points below
// the noise floor. Throws InsufficientData with fewer than 3 usable points.
SlopeFit scaling_exponent(const ScalarFunction& f, const HermitianOperator& h0, const HermitianOperator& v, int n,
                          const std::vector<double>& eps_grid, double noise_floor = kRemainderNoiseFloor);

}  // namespace spt
