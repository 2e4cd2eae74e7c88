// bounds.hpp: certified inequalities for the MOI trace norm and the expansion
// remainder, with every ingredient kept for audit.

#pragma once

#include "spt/constants.hpp"
#include "spt/taylor.hpp"

#include <json.hpp>

#include <map>
#include <string>

namespace spt {

struct BoundCertificate {
    std::string kind;  // compact | compact_remainder | hilbert_schmidt | eta_l1
    double lhs{0.0};
    double rhs{0.0};
    std::map<std::string, double> ingredients;

    // lhs <= rhs + 1e-9 (1 + rhs)
    bool passed() const;
    nlohmann::json to_json() const;
};

// max_k |g^{2^-k}|_inf and max_{k,d} max{1, |g^{2^-k}|_{G_d}} over 1 <= k <= j_n, 1 <= d <= n,
// with a_n, for a nonnegative g with closed-form dyadic roots. C = a_n * sup * gmax^n.
struct RootConstants {
    int n{1};
    int jn{1};
    std::int64_t an{2};
    double root_sup{0.0};
    double root_gp_max{1.0};
    double constant{0.0};
};
RootConstants root_constants(const ScalarFunction& g, int n);

// |T_{f^[n]}(V..V)|_1 <= a_n |V|^n Tr E_H(supp f) max|f^{2^-k}|_inf (max{1, |f^{2^-k}|_{G_d}})^n
BoundCertificate compact_trace_norm_bound(const ScalarFunction& f, const SpectralDecomposition& d, const Matrix& v,
                                          int n);
BoundCertificate compact_trace_norm_bound(const RootConstants& constants, const ScalarFunction& f,
                                          const SpectralDecomposition& d, const Matrix& v);

// |Tr R_n| <= (C(f1) + C(f2)) sup_t Tr E_{H0+tV}(supp b) |V|^n with f = f1 - f2 from
// decompose_signed; the supremum is replaced by (1 + max|s|^2)(1 + |V| + |V|^2) Tr (1+H0^2)^{-1}.
struct SignedConstants {
    int n{1};
    RootConstants c1;
    RootConstants c2;
    Interval padded_support;
};
SignedConstants signed_constants(const ScalarFunction& f, int n);

BoundCertificate remainder_bound_compact(const ScalarFunction& f, const HermitianOperator& h0,
                                         const HermitianOperator& v, int n);
BoundCertificate remainder_bound_compact(const SignedConstants& constants, const ScalarFunction& f,
                                         const HermitianOperator& h0, const HermitianOperator& v);

// c_{f,n} from the Hilbert-Schmidt resolvent estimate.
double hs_constant(const ScalarFunction& f, int n);

// |Tr R_n| <= c_{f,n} |(1+H0^2)^{-1}|_1 (1 + |V| + |V|^2) |V|^n
BoundCertificate remainder_bound_hs(const ScalarFunction& f, const HermitianOperator& h0,
                                    const HermitianOperator& v, int n);
BoundCertificate remainder_bound_hs(double c_fn, const ScalarFunction& f, const HermitianOperator& h0,
                                    const HermitianOperator& v, int n);

// 9 max{1, (b-a)^2} max{2, |u|, |u^2|, |(u^2)'|} with the sup norms over [a, b].
double c_ab(double a, double b);

// Tr (1+H^2)^{-1}
double resolvent_trace(const SpectralDecomposition& d);

}  // namespace spt
