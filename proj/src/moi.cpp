#include "spt/moi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace spt {

namespace {

constexpr std::size_t kMaxOrder = 15;

std::vector<double> cluster_values(const SpectralDecomposition& d) {
    std::vector<double> out;
    out.reserve(d.cluster_count());
    for (const auto& c : d.clusters()) {
        out.push_back(c.value);
    }
    return out;
}

void check_dims(const SpectralDecomposition& d, std::span<const Matrix> perturbations) {
    const auto n = static_cast<Eigen::Index>(d.dim());
    for (const auto& v : perturbations) {
        if (v.rows() != n || v.cols() != n) {
            throw std::invalid_argument("moi: perturbation dimension " + std::to_string(v.rows()) + "x" +
                                        std::to_string(v.cols()) + " does not match operator dimension " +
                                        std::to_string(n));
        }
    }
    if (perturbations.size() > kMaxOrder) {
        throw std::invalid_argument("moi: order too large");
    }
}

// Depth-first walk over eigen-index paths i_0 -> i_1 -> ... -> i_p with the
// partial product of perturbation entries; each leaf adds phi * product.
struct TupleWalker {
    const Symbol& phi;
    const std::vector<std::size_t>& cl;
    const std::vector<Matrix>& b;
    Eigen::Index n;
    std::array<std::size_t, kMaxOrder + 1> tuple{};

    Complex walk(std::size_t depth, Eigen::Index i, Complex prod, Eigen::Index last) {
        const std::size_t p = b.size();
        Complex acc{};
        const Matrix& m = b[depth];
        if (depth + 1 == p) {
            const Complex e = m(i, last);
            if (e != Complex{}) {
                tuple[depth + 1] = cl[static_cast<std::size_t>(last)];
                acc += phi(std::span<const std::size_t>(tuple.data(), p + 1)) * prod * e;
            }
            return acc;
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            const Complex e = m(i, j);
            if (e == Complex{}) {
                continue;
            }
            tuple[depth + 1] = cl[static_cast<std::size_t>(j)];
            acc += walk(depth + 1, j, prod * e, last);
        }
        return acc;
    }
};

std::vector<Matrix> to_basis(const SpectralDecomposition& d, std::span<const Matrix> perturbations) {
    std::vector<Matrix> out;
    out.reserve(perturbations.size());
    for (const auto& v : perturbations) {
        out.push_back(d.to_eigenbasis(v));
    }
    return out;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) {
        r *= i;
    }
    return r;
}

}  // namespace

Symbol divided_difference_symbol(const ScalarFunction& f, const SpectralDecomposition& d, int p) {
    auto grid = std::make_shared<DividedDifferenceGrid>(f, cluster_values(d), p);
    return [grid](std::span<const std::size_t> idx) { return (*grid)(idx); };
}

Symbol value_symbol(std::function<double(std::span<const double>)> phi, const SpectralDecomposition& d) {
    auto values = std::make_shared<std::vector<double>>(cluster_values(d));
    return [phi = std::move(phi), values](std::span<const std::size_t> idx) {
        std::array<double, kMaxOrder + 1> lam{};
        for (std::size_t i = 0; i < idx.size(); ++i) {
            lam[i] = (*values)[idx[i]];
        }
        return phi(std::span<const double>(lam.data(), idx.size()));
    };
}

Matrix evaluate_symbol(const Symbol& phi, const SpectralDecomposition& d, std::span<const Matrix> perturbations) {
    check_dims(d, perturbations);
    const auto n = static_cast<Eigen::Index>(d.dim());
    const auto& cl = d.cluster_of();
    const auto b = to_basis(d, perturbations);
    Matrix m = Matrix::Zero(n, n);

    if (b.empty()) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const std::size_t c = cl[static_cast<std::size_t>(i)];
            m(i, i) = phi(std::span<const std::size_t>(&c, 1));
        }
        return d.from_eigenbasis(m);
    }

    TupleWalker walker{phi, cl, b, n};
    for (Eigen::Index i0 = 0; i0 < n; ++i0) {
        walker.tuple[0] = cl[static_cast<std::size_t>(i0)];
        for (Eigen::Index ip = 0; ip < n; ++ip) {
            m(i0, ip) = walker.walk(0, i0, Complex{1.0, 0.0}, ip);
        }
    }
    return d.from_eigenbasis(m);
}

// ---------------------------------------------------------------------------

MoiResult::MoiResult(Matrix matrix, int order)
    : matrix_(std::move(matrix)), order_(order), singular_values_(spt::singular_values(matrix_)) {}

double MoiResult::schatten_norm(double alpha) const {
    return schatten_norm_from_singular_values(singular_values_, alpha);
}

MoiResult evaluate_moi(const ScalarFunction& f, const SpectralDecomposition& d,
                       std::span<const Matrix> perturbations) {
    const int p = static_cast<int>(perturbations.size());
    if (p > f.max_order()) {
        throw DomainError("evaluate_moi: order " + std::to_string(p) + " exceeds max_order " +
                          std::to_string(f.max_order()));
    }
    return MoiResult(evaluate_symbol(divided_difference_symbol(f, d, p), d, perturbations), p);
}

Matrix gateaux_derivative(const ScalarFunction& f, const SpectralDecomposition& d, const Matrix& v, int p) {
    if (p < 0) {
        throw DomainError("gateaux_derivative: p must be >= 0");
    }
    const std::vector<Matrix> vs(static_cast<std::size_t>(p), v);
    return factorial(p) * evaluate_moi(f, d, vs).matrix();
}

Matrix gateaux_derivative(const ScalarFunction& f, const HermitianOperator& h, const HermitianOperator& v, int p) {
    return gateaux_derivative(f, decompose(h), v.matrix(), p);
}

double trace_derivative_first(const ScalarFunction& f, const SpectralDecomposition& d, const Matrix& v) {
    check_dims(d, std::span<const Matrix>(&v, 1));
    double acc = 0.0;
    for (std::size_t c = 0; c < d.cluster_count(); ++c) {
        acc += f.deriv(1, d.clusters()[c].value) * (d.projections()[c] * v).trace().real();
    }
    return acc;
}

double trace_path_term(const ScalarFunction& f, const SpectralDecomposition& d, const Matrix& v, int k) {
    if (k < 1) {
        throw DomainError("trace_path_term: k must be >= 1");
    }
    if (k > f.max_order()) {
        throw DomainError("trace_path_term: order exceeds max_order");
    }
    check_dims(d, std::span<const Matrix>(&v, 1));
    const auto fp = f.derivative(1);
    const auto phi = divided_difference_symbol(fp, d, k - 1);
    const auto n = static_cast<Eigen::Index>(d.dim());
    const auto& cl = d.cluster_of();
    // Tr(P V P V ... P V) over index cycles i_1 -> i_2 -> ... -> i_k -> i_1
    const Matrix bv = d.to_eigenbasis(v);
    Complex total{};
    if (k == 1) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const std::size_t c = cl[static_cast<std::size_t>(i)];
            total += phi(std::span<const std::size_t>(&c, 1)) * bv(i, i);
        }
    } else {
        // path walk over k-1 steps, the cycle closed by B(i_k, i_1)
        const std::vector<Matrix> b(static_cast<std::size_t>(k - 1), bv);
        TupleWalker walker{phi, cl, b, n};
        for (Eigen::Index i1 = 0; i1 < n; ++i1) {
            walker.tuple[0] = cl[static_cast<std::size_t>(i1)];
            for (Eigen::Index ik = 0; ik < n; ++ik) {
                const Complex back = bv(ik, i1);
                if (back == Complex{}) {
                    continue;
                }
                total += walker.walk(0, i1, back, ik);
            }
        }
    }
    return total.real() / static_cast<double>(k);
}

double trace_derivative_higher(const ScalarFunction& f, const SpectralDecomposition& d, const Matrix& v, int p) {
    if (p < 2) {
        throw DomainError("trace_derivative_higher: p must be >= 2");
    }
    return factorial(p) * trace_path_term(f, d, v, p);
}

double moi_trace_identity_check(const ScalarFunction& f, const SpectralDecomposition& d, const Matrix& v, int k) {
    const std::vector<Matrix> vs(static_cast<std::size_t>(k), v);
    const Complex lhs = evaluate_moi(f, d, vs).matrix().trace();
    return std::abs(lhs - Complex{trace_path_term(f, d, v, k), 0.0});
}

// ---------------------------------------------------------------------------

double additivity_check(const Symbol& phi1, const Symbol& phi2, const SpectralDecomposition& d,
                        std::span<const Matrix> perturbations) {
    const Symbol sum = [&](std::span<const std::size_t> idx) { return phi1(idx) + phi2(idx); };
    const Matrix lhs = evaluate_symbol(sum, d, perturbations);
    const Matrix rhs = evaluate_symbol(phi1, d, perturbations) + evaluate_symbol(phi2, d, perturbations);
    return (lhs - rhs).norm();
}

double product_split_check(const Symbol& phi1, const Symbol& phi2, std::size_t k, const SpectralDecomposition& d,
                           std::span<const Matrix> perturbations) {
    const std::size_t p = perturbations.size();
    if (k > p) {
        throw std::invalid_argument("product_split_check: split index beyond order");
    }
    const Symbol glued = [&](std::span<const std::size_t> idx) {
        return phi1(idx.subspan(0, k + 1)) * phi2(idx.subspan(k));
    };
    const Matrix lhs = evaluate_symbol(glued, d, perturbations);
    const Matrix rhs =
        evaluate_symbol(phi1, d, perturbations.subspan(0, k)) * evaluate_symbol(phi2, d, perturbations.subspan(k));
    return (lhs - rhs).norm();
}

double edge_multiplier_check(const Symbol& phi, const ScalarFunction& psi1, const ScalarFunction& psi2,
                             const SpectralDecomposition& d, std::span<const Matrix> perturbations) {
    const std::size_t p = perturbations.size();
    if (p == 0) {
        throw std::invalid_argument("edge_multiplier_check: need at least one perturbation");
    }
    const auto values = cluster_values(d);
    const Symbol edged = [&](std::span<const std::size_t> idx) {
        return psi1(values[idx.front()]) * phi(idx) * psi2(values[idx.back()]);
    };
    const Matrix lhs = evaluate_symbol(edged, d, perturbations);
    std::vector<Matrix> absorbed(perturbations.begin(), perturbations.end());
    absorbed.front() = d.apply([&](double x) { return psi1(x); }) * absorbed.front();
    absorbed.back() = absorbed.back() * d.apply([&](double x) { return psi2(x); });
    return (lhs - evaluate_symbol(phi, d, absorbed)).norm();
}

bool schatten_bound_check(const ScalarFunction& f, const SpectralDecomposition& d,
                          std::span<const Matrix> perturbations, std::span<const double> alphas) {
    if (alphas.size() != perturbations.size() || perturbations.empty()) {
        throw std::invalid_argument("schatten_bound_check: need one exponent per perturbation");
    }
    double inv = 0.0;
    for (double a : alphas) {
        if (std::isnan(a) || a < 1.0) {
            throw DomainError("schatten_bound_check: exponents must be >= 1");
        }
        inv += std::isinf(a) ? 0.0 : 1.0 / a;
    }
    if (inv > 1.0) {
        throw DomainError("schatten_bound_check: 1/alpha = Sum 1/alpha_j must be <= 1");
    }
    const double alpha = inv == 0.0 ? kInfinity : 1.0 / inv;
    const int p = static_cast<int>(perturbations.size());
    const double lhs = evaluate_moi(f, d, perturbations).schatten_norm(alpha);
    double rhs = gp_seminorm(f, p).upper();
    for (std::size_t j = 0; j < perturbations.size(); ++j) {
        rhs *= schatten_norm(perturbations[j], alphas[j]);
    }
    return lhs <= rhs + 1e-12 * (1.0 + rhs);
}

bool hilbert_schmidt_bound_check(const Symbol& phi, const SpectralDecomposition& d, const Matrix& v) {
    double sup = 0.0;
    std::array<std::size_t, 2> idx{};
    for (idx[0] = 0; idx[0] < d.cluster_count(); ++idx[0]) {
        for (idx[1] = 0; idx[1] < d.cluster_count(); ++idx[1]) {
            sup = std::max(sup, std::abs(phi(idx)));
        }
    }
    const double lhs = evaluate_symbol(phi, d, std::span<const Matrix>(&v, 1)).norm();
    const double rhs = sup * v.norm();
    return lhs <= rhs + 1e-12 * (1.0 + rhs);
}

bool hilbert_schmidt_bound_check(const ScalarFunction& f, const SpectralDecomposition& d, const Matrix& v) {
    return hilbert_schmidt_bound_check(divided_difference_symbol(f, d, 1), d, v);
}

}  // namespace spt
