#include "spt/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace spt {

bool BoundCertificate::passed() const { return lhs <= rhs + 1e-9 * (1.0 + rhs); }

nlohmann::json BoundCertificate::to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["passed"] = passed();
    j["ingredients"] = ingredients;
    return j;
}

double resolvent_trace(const SpectralDecomposition& d) {
    double acc = 0.0;
    for (const auto& c : d.clusters()) {
        acc += static_cast<double>(c.size()) / (1.0 + c.value * c.value);
    }
    return acc;
}

RootConstants root_constants(const ScalarFunction& g, int n) {
    RootConstants out;
    out.n = n;
    out.jn = j_of(n);
    out.an = a_sequence(n);
    for (int k = 1; k <= out.jn; ++k) {
        const auto root = dyadic_root(g, k);
        out.root_sup = std::max(out.root_sup, sup_norm(root));
        for (int d = 1; d <= n; ++d) {
            out.root_gp_max = std::max(out.root_gp_max, gp_seminorm(root, d).upper());
        }
    }
    out.constant = static_cast<double>(out.an) * out.root_sup * std::pow(out.root_gp_max, n);
    return out;
}

BoundCertificate compact_trace_norm_bound(const ScalarFunction& f, const SpectralDecomposition& d, const Matrix& v,
                                          int n) {
    return compact_trace_norm_bound(root_constants(f, n), f, d, v);
}

BoundCertificate compact_trace_norm_bound(const RootConstants& c, const ScalarFunction& f,
                                          const SpectralDecomposition& d, const Matrix& v) {
    const auto supp = f.support();
    if (!supp) {
        throw DomainError("compact_trace_norm_bound: f must be compactly supported");
    }
    const std::vector<Matrix> vs(static_cast<std::size_t>(c.n), v);
    const double vnorm = schatten_norm(v, kInfinity);
    const auto count = static_cast<double>(counting_trace(d, *supp));

    BoundCertificate cert;
    cert.kind = "compact";
    cert.lhs = evaluate_moi(f, d, vs).schatten_norm(1.0);
    cert.rhs = c.constant * count * std::pow(vnorm, c.n);
    cert.ingredients = {
        {"n", c.n},
        {"j_n", c.jn},
        {"a_n", static_cast<double>(c.an)},
        {"V_norm", vnorm},
        {"counting_trace_supp_f", count},
        {"max_root_sup_norm", c.root_sup},
        {"max_root_gp_or_one", c.root_gp_max},
    };
    return cert;
}

SignedConstants signed_constants(const ScalarFunction& f, int n) {
    const auto parts = decompose_signed(f, n);
    return SignedConstants{n, root_constants(parts.f1, n), root_constants(parts.f2, n), parts.padded_support};
}

BoundCertificate remainder_bound_compact(const ScalarFunction& f, const HermitianOperator& h0,
                                         const HermitianOperator& v, int n) {
    return remainder_bound_compact(signed_constants(f, n), f, h0, v);
}

BoundCertificate remainder_bound_compact(const SignedConstants& c, const ScalarFunction& f,
                                         const HermitianOperator& h0, const HermitianOperator& v) {
    const int n = c.n;
    const auto d0 = decompose(h0);
    const double vnorm = v.operator_norm();
    const double smax = c.padded_support.max_abs();
    const double res_trace = resolvent_trace(d0);
    const double counting_bound = (1.0 + smax * smax) * (1.0 + vnorm + vnorm * vnorm) * res_trace;

    // diagnostic only: a grid cannot certify a supremum
    std::size_t grid_sup = 0;
    for (int i = 0; i <= 32; ++i) {
        const double t = i / 32.0;
        grid_sup = std::max(grid_sup, counting_trace(decompose(h0 + v.scaled(t)), c.padded_support));
    }

    const double constant = c.c1.constant + c.c2.constant;
    BoundCertificate cert;
    cert.kind = "compact_remainder";
    cert.lhs = std::abs(remainder_trace(f, h0, v, n));
    cert.rhs = constant * counting_bound * std::pow(vnorm, n);
    cert.ingredients = {
        {"n", n},
        {"j_n", c.c1.jn},
        {"a_n", static_cast<double>(c.c1.an)},
        {"V_norm", vnorm},
        {"C_f1", c.c1.constant},
        {"C_f2", c.c2.constant},
        {"C_signed_additive", constant},
        {"max_abs_s_supp_b", smax},
        {"resolvent_trace", res_trace},
        {"counting_bound", counting_bound},
        {"counting_grid_sup", static_cast<double>(grid_sup)},
        {"rhs_grid_diagnostic", constant * static_cast<double>(grid_sup) * std::pow(vnorm, n)},
    };
    return cert;
}

double hs_constant(const ScalarFunction& f, int n) {
    if (n < 1) {
        throw DomainError("hs_constant: n must be >= 1");
    }
    const auto fu = product_with_u(f);
    const auto fu2 = product_with_u2(f);
    if (n == 1) {
        return gp_seminorm(fu2, 1).upper() + 2.0 * sup_norm(fu2);
    }
    double inner = std::max(sup_norm(f), sup_norm(fu));
    for (int k = 1; k <= n; ++k) {
        inner = std::max({inner, gp_seminorm(f, k).upper(), gp_seminorm(fu, k).upper()});
    }
    const auto u = weight_u();
    double umax = 0.0;
    for (int l = 2; l <= n; ++l) {
        const double g = gp_seminorm(u, l).upper();
        umax = std::max(umax, g * g);
    }
    return gp_seminorm(fu2, n).upper() + 0.5 * n * (n + 3) * inner * umax;
}

BoundCertificate remainder_bound_hs(const ScalarFunction& f, const HermitianOperator& h0,
                                    const HermitianOperator& v, int n) {
    return remainder_bound_hs(hs_constant(f, n), f, h0, v, n);
}

BoundCertificate remainder_bound_hs(double c_fn, const ScalarFunction& f, const HermitianOperator& h0,
                                    const HermitianOperator& v, int n) {
    const double vnorm = v.operator_norm();
    const double res_trace = resolvent_trace(decompose(h0));
    BoundCertificate cert;
    cert.kind = "hilbert_schmidt";
    cert.lhs = std::abs(remainder_trace(f, h0, v, n));
    cert.rhs = c_fn * res_trace * (1.0 + vnorm + vnorm * vnorm) * std::pow(vnorm, n);
    cert.ingredients = {
        {"n", n},
        {"c_fn", c_fn},
        {"V_norm", vnorm},
        {"resolvent_trace", res_trace},
    };
    return cert;
}

double c_ab(double a, double b) {
    if (a > b) {
        throw std::invalid_argument("c_ab: a > b");
    }
    const double m = std::max(std::abs(a), std::abs(b));
    const double u2 = 1.0 + m * m;
    const double width = b - a;
    return 9.0 * std::max(1.0, width * width) * std::max({2.0, std::sqrt(u2), u2, 2.0 * m});
}

}  // namespace spt
