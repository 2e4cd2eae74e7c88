#include "spt/taylor.hpp"

#include "spt/quadrature.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace spt {

namespace {

double trace_of(const ScalarFunction& f, const SpectralDecomposition& d) {
    double acc = 0.0;
    for (const auto& c : d.clusters()) {
        acc += f(c.value) * static_cast<double>(c.size());
    }
    return acc;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) {
        r *= i;
    }
    return r;
}

void check_order(const ScalarFunction& f, int n) {
    if (n < 1) {
        throw DomainError("expansion order n must be >= 1");
    }
    if (n - 1 > f.max_order()) {
        throw DomainError("expansion order " + std::to_string(n) + " needs derivatives beyond max_order " +
                          std::to_string(f.max_order()));
    }
}

}  // namespace

std::vector<double> expansion_terms(const ScalarFunction& f, const SpectralDecomposition& d0, const Matrix& v, int n) {
    check_order(f, n);
    std::vector<double> terms;
    for (int p = 1; p < n; ++p) {
        terms.push_back(trace_path_term(f, d0, v, p));
    }
    return terms;
}

std::vector<double> expansion_terms_direct(const ScalarFunction& f, const HermitianOperator& h0,
                                           const HermitianOperator& v, int n) {
    check_order(f, n);
    if (h0.dim() > 6) {
        throw std::invalid_argument("expansion_terms_direct: oracle path is limited to dim <= 6");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h0.matrix());
    const RealVector mu = solver.eigenvalues();
    const Matrix& psi = solver.eigenvectors();
    const auto dim = static_cast<std::size_t>(mu.size());
    // <V psi_i, psi_j> = psi_j^* V psi_i
    const Matrix inner = (psi.adjoint() * v.matrix() * psi).transpose();
    const auto fp = f.derivative(1);

    std::vector<double> terms;
    for (int p = 1; p < n; ++p) {
        std::vector<std::size_t> idx(static_cast<std::size_t>(p), 0);
        std::vector<double> nodes(static_cast<std::size_t>(p));
        Complex acc{};
        while (true) {
            Complex prod{1.0, 0.0};
            for (std::size_t j = 0; j < idx.size(); ++j) {
                const std::size_t next = idx[(j + 1) % idx.size()];
                prod *= inner(static_cast<Eigen::Index>(idx[j]), static_cast<Eigen::Index>(next));
                nodes[j] = mu(static_cast<Eigen::Index>(idx[j]));
            }
            acc += divided_difference(fp, nodes) * prod;
            std::size_t pos = 0;
            while (pos < idx.size() && ++idx[pos] == dim) {
                idx[pos++] = 0;
            }
            if (pos == idx.size()) {
                break;
            }
        }
        terms.push_back(acc.real() / p);
    }
    return terms;
}

ExpansionReport expand(const ScalarFunction& f, const HermitianOperator& h0, const HermitianOperator& v, int n) {
    check_order(f, n);
    const auto d0 = decompose(h0);
    const auto d1 = decompose(h0 + v);
    ExpansionReport r;
    r.n = n;
    r.base_trace = trace_of(f, d0);
    r.perturbed_trace = trace_of(f, d1);
    r.terms = expansion_terms(f, d0, v.matrix(), n);
    r.remainder_trace = r.perturbed_trace - r.base_trace;
    for (double t : r.terms) {
        r.remainder_trace -= t;
    }
    const Matrix rem = operator_remainder(f, h0, v, n);
    r.operator_remainder_trace = rem.trace().real();
    r.operator_remainder_trace_norm = schatten_norm(rem, 1.0);
    return r;
}

double remainder_trace(const ScalarFunction& f, const HermitianOperator& h0, const HermitianOperator& v, int n) {
    check_order(f, n);
    const auto d0 = decompose(h0);
    double r = trace_of(f, decompose(h0 + v)) - trace_of(f, d0);
    for (double t : expansion_terms(f, d0, v.matrix(), n)) {
        r -= t;
    }
    return r;
}

Matrix operator_remainder(const ScalarFunction& f, const HermitianOperator& h0, const HermitianOperator& v, int p) {
    check_order(f, p);
    const auto d0 = decompose(h0);
    Matrix r = apply_function(f, decompose(h0 + v)).matrix();
    for (int k = 0; k < p; ++k) {
        r -= gateaux_derivative(f, d0, v.matrix(), k) / factorial(k);
    }
    return r;
}

double integral_remainder_check(const ScalarFunction& f, const HermitianOperator& h0, const HermitianOperator& v,
                                int p, int quad_nodes, int panels) {
    if (p < 1) {
        throw DomainError("integral_remainder_check: p must be >= 1");
    }
    if (p > f.max_order()) {
        throw DomainError("integral_remainder_check: order exceeds max_order");
    }
    if (panels < 1) {
        throw std::invalid_argument("integral_remainder_check: panels must be >= 1");
    }
    const auto rule = gauss_legendre(quad_nodes);
    const auto n = static_cast<Eigen::Index>(h0.dim());
    Matrix integral = Matrix::Zero(n, n);
    const double h = 1.0 / panels;
    for (int q = 0; q < panels; ++q) {
        const double mid = (q + 0.5) * h;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double t = mid + 0.5 * h * rule.nodes[i];
            const double w = 0.5 * h * rule.weights[i] * std::pow(1.0 - t, p - 1);
            integral += w * gateaux_derivative(f, decompose(h0 + v.scaled(t)), v.matrix(), p);
        }
    }
    integral /= factorial(p - 1);
    return (integral - operator_remainder(f, h0, v, p)).norm();
}

SlopeFit scaling_exponent(const ScalarFunction& f, const HermitianOperator& h0, const HermitianOperator& v, int n,
                          const std::vector<double>& eps_grid, double noise_floor) {
    SlopeFit fit;
    for (double eps : eps_grid) {
        if (!(eps > 0.0)) {
            throw std::invalid_argument("scaling_exponent: epsilon values must be positive");
        }
        const double r = std::abs(remainder_trace(f, h0, v.scaled(eps), n));
        if (r >= noise_floor) {
            fit.epsilons.push_back(eps);
            fit.remainders.push_back(r);
        }
    }
    const std::size_t m = fit.epsilons.size();
    if (m < 3) {
        throw InsufficientData("scaling_exponent: only " + std::to_string(m) +
                               " grid points above the noise floor (need 3)");
    }
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += std::log(fit.epsilons[i]);
        sy += std::log(fit.remainders[i]);
    }
    const double mx = sx / static_cast<double>(m);
    const double my = sy / static_cast<double>(m);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = std::log(fit.epsilons[i]) - mx;
        sxy += dx * (std::log(fit.remainders[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) {
        throw InsufficientData("scaling_exponent: epsilon grid has no spread");
    }
    fit.slope = sxy / sxx;
    return fit;
}

}  // namespace spt
