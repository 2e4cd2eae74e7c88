// moi.hpp: multiple operator integrals T_phi^{H,...,H}(V_1, ..., V_p) as exact
// spectral sums, Gateaux derivatives, trace formulas and norm bounds.

#pragma once

#include "spt/divided_diff.hpp"
#include "spt/operator_core.hpp"
#include "spt/scalar_functions.hpp"

#include <functional>
#include <span>
#include <vector>

namespace spt {

// A symbol phi(lambda_{c_0}, ..., lambda_{c_p}) addressed by cluster indices.
using Symbol = std::function<double(std::span<const std::size_t>)>;

// f^[p] on the cluster values of d.
Symbol divided_difference_symbol(const ScalarFunction& f, const SpectralDecomposition& d, int p);

// phi given on eigenvalues, lifted to cluster indices.
Symbol value_symbol(std::function<double(std::span<const double>)> phi, const SpectralDecomposition& d);

// Sum over cluster tuples of phi(c_0..c_p) P_{c_0} V_1 P_{c_1} ... V_p P_{c_p}.
Matrix evaluate_symbol(const Symbol& phi, const SpectralDecomposition& d, std::span<const Matrix> perturbations);

class MoiResult {
public:
    MoiResult(Matrix matrix, int order);

    const Matrix& matrix() const noexcept { return matrix_; }
    int order() const noexcept { return order_; }
    const RealVector& singular_values() const noexcept { return singular_values_; }
    double schatten_norm(double alpha) const;

private:
    Matrix matrix_;
    int order_;
    RealVector singular_values_;
};

// T_{f^[p]}(V_1..V_p); p = 0 gives f(H).
MoiResult evaluate_moi(const ScalarFunction& f, const SpectralDecomposition& d,
                       std::span<const Matrix> perturbations);

// d^p/dt^p f(H+tV) at t = 0, i.e. p! T_{f^[p]}(V, ..., V).
Matrix gateaux_derivative(const ScalarFunction& f, const SpectralDecomposition& d, const Matrix& v, int p);
Matrix gateaux_derivative(const ScalarFunction& f, const HermitianOperator& h, const HermitianOperator& v, int p);

// Sum_c f'(lambda_c) Tr(P_c V).
double trace_derivative_first(const ScalarFunction& f, const SpectralDecomposition& d, const Matrix& v);

// (p-1)! Sum over p-tuples of (f')^[p-1] Tr(P_{c_1} V ... P_{c_p} V), p >= 2.
double trace_derivative_higher(const ScalarFunction& f, const SpectralDecomposition& d, const Matrix& v, int p);

// (1/k) Sum (f')^[k-1](c_1..c_k) Tr(P_{c_1} V ... P_{c_k} V), via cyclic index sums.
double trace_path_term(const ScalarFunction& f, const SpectralDecomposition& d, const Matrix& v, int k);

// |Tr T_{f^[k]}(V..V) - trace_path_term(f, d, V, k)|
double moi_trace_identity_check(const ScalarFunction& f, const SpectralDecomposition& d, const Matrix& v, int k);

// Residuals (Hilbert-Schmidt norm) of the algebraic properties of the transformation.
// (i)   T_{phi1 + phi2} = T_{phi1} + T_{phi2}
double additivity_check(const Symbol& phi1, const Symbol& phi2, const SpectralDecomposition& d,
                        std::span<const Matrix> perturbations);
// (ii)  phi(c_0..c_p) = phi1(c_0..c_k) phi2(c_k..c_p):
//       T_phi(V_1..V_p) = T_phi1(V_1..V_k) T_phi2(V_{k+1}..V_p)
double product_split_check(const Symbol& phi1, const Symbol& phi2, std::size_t k, const SpectralDecomposition& d,
                           std::span<const Matrix> perturbations);
// (iii) T_{psi1 phi psi2}(V_1..V_p) = T_phi(psi1(H) V_1, ..., V_p psi2(H))
double edge_multiplier_check(const Symbol& phi, const ScalarFunction& psi1, const ScalarFunction& psi2,
                             const SpectralDecomposition& d, std::span<const Matrix> perturbations);

// |T_{f^[p]}(V_1..V_p)|_alpha <= |f|_{G_p} Prod |V_j|_{alpha_j}, 1/alpha = Sum 1/alpha_j.
// The seminorm enters with its quadrature error added.
bool schatten_bound_check(const ScalarFunction& f, const SpectralDecomposition& d,
                          std::span<const Matrix> perturbations, std::span<const double> alphas);

// |T_phi(V)|_2 <= max_{c,c'} |phi(c,c')| |V|_2.
bool hilbert_schmidt_bound_check(const Symbol& phi, const SpectralDecomposition& d, const Matrix& v);
bool hilbert_schmidt_bound_check(const ScalarFunction& f, const SpectralDecomposition& d, const Matrix& v);

}  // namespace spt
