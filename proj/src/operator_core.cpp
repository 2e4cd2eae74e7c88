#include "spt/operator_core.hpp"

#include "spt/scalar_functions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spt {

HermitianOperator::HermitianOperator(const Matrix& entries) {
    if (entries.rows() != entries.cols()) {
        throw std::invalid_argument("HermitianOperator: matrix must be square");
    }
    if (entries.rows() == 0) {
        throw std::invalid_argument("HermitianOperator: dimension must be positive");
    }
    const double scale = entries.cwiseAbs().maxCoeff();
    const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
        throw std::invalid_argument("HermitianOperator: matrix is not Hermitian (asymmetry " +
                                    std::to_string(asym) + ")");
    }
    entries_ = 0.5 * (entries + entries.adjoint());
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return HermitianOperator(Matrix::Zero(n, n));
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return HermitianOperator(Matrix::Identity(n, n));
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& values) {
    const auto n = static_cast<Eigen::Index>(values.size());
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = values[static_cast<std::size_t>(i)];
    }
    return HermitianOperator(m);
}

double HermitianOperator::operator_norm() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
    if (dim() != other.dim()) {
        throw std::invalid_argument("HermitianOperator: dimension mismatch");
    }
    return HermitianOperator(entries_ + other.entries_, trusted_tag{});
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& other) const {
    if (dim() != other.dim()) {
        throw std::invalid_argument("HermitianOperator: dimension mismatch");
    }
    return HermitianOperator(entries_ - other.entries_, trusted_tag{});
}

HermitianOperator HermitianOperator::scaled(double s) const {
    return HermitianOperator(entries_ * s, trusted_tag{});
}

// ----------------------------------------------------------------------------

Interval Interval::closed(double lo, double hi) {
    if (lo > hi) {
        throw std::invalid_argument("Interval: lo > hi");
    }
    return Interval{lo, hi, true, true};
}

Interval Interval::open(double lo, double hi) {
    if (lo > hi) {
        throw std::invalid_argument("Interval: lo > hi");
    }
    return Interval{lo, hi, false, false};
}

Interval Interval::left_open(double lo, double hi) {
    if (lo > hi) {
        throw std::invalid_argument("Interval: lo > hi");
    }
    return Interval{lo, hi, false, true};
}

bool Interval::contains(double x) const noexcept {
    const bool above = lo_closed ? x >= lo : x > lo;
    const bool below = hi_closed ? x <= hi : x < hi;
    return above && below;
}

double Interval::max_abs() const noexcept { return std::max(std::abs(lo), std::abs(hi)); }

// ----------------------------------------------------------------------------

SpectralDecomposition::SpectralDecomposition(const HermitianOperator& op, double cluster_tol) {
    if (cluster_tol < 0.0) {
        throw std::invalid_argument("decompose: cluster_tol must be >= 0");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("decompose: eigensolver did not converge");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();

    const std::size_t n = dim();
    const double diameter = eigenvalues_(static_cast<Eigen::Index>(n - 1)) - eigenvalues_(0);
    const double gap_tol = cluster_tol * (1.0 + diameter);

    cluster_of_.resize(n);
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        const bool split = i == n || eigenvalues_(static_cast<Eigen::Index>(i)) -
                                             eigenvalues_(static_cast<Eigen::Index>(i - 1)) >=
                                         gap_tol;
        if (!split) {
            continue;
        }
        Cluster c{begin, i, 0.0};
        for (std::size_t k = begin; k < i; ++k) {
            c.value += eigenvalues_(static_cast<Eigen::Index>(k));
            cluster_of_[k] = clusters_.size();
        }
        c.value /= static_cast<double>(c.size());
        const auto cols = eigenvectors_.middleCols(static_cast<Eigen::Index>(begin),
                                                   static_cast<Eigen::Index>(c.size()));
        projections_.push_back(cols * cols.adjoint());
        clusters_.push_back(c);
        begin = i;
    }
}

Matrix SpectralDecomposition::to_eigenbasis(const Matrix& a) const {
    if (a.rows() != eigenvectors_.rows() || a.cols() != eigenvectors_.cols()) {
        throw std::invalid_argument("to_eigenbasis: dimension mismatch");
    }
    return eigenvectors_.adjoint() * a * eigenvectors_;
}

Matrix SpectralDecomposition::from_eigenbasis(const Matrix& a) const {
    if (a.rows() != eigenvectors_.rows() || a.cols() != eigenvectors_.cols()) {
        throw std::invalid_argument("from_eigenbasis: dimension mismatch");
    }
    return eigenvectors_ * a * eigenvectors_.adjoint();
}

Matrix SpectralDecomposition::apply(const std::function<double(double)>& g) const {
    RealVector values(static_cast<Eigen::Index>(dim()));
    for (const auto& c : clusters_) {
        const double gv = g(c.value);
        for (std::size_t k = c.begin; k < c.end; ++k) {
            values(static_cast<Eigen::Index>(k)) = gv;
        }
    }
    return eigenvectors_ * values.asDiagonal() * eigenvectors_.adjoint();
}

Matrix SpectralDecomposition::reconstruct() const {
    return apply([](double x) { return x; });
}

SpectralDecomposition decompose(const HermitianOperator& h, double cluster_tol) {
    return SpectralDecomposition(h, cluster_tol);
}

HermitianOperator apply_function(const ScalarFunction& f, const SpectralDecomposition& d) {
    Matrix m = d.apply([&f](double x) { return f(x); });
    return HermitianOperator(0.5 * (m + m.adjoint()));
}

Complex trace(const Matrix& a) { return a.trace(); }

RealVector singular_values(const Matrix& a) {
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues();
}

double schatten_norm_from_singular_values(const RealVector& s, double alpha) {
    if (std::isnan(alpha) || alpha < 1.0) {
        throw DomainError("schatten_norm: alpha must be >= 1");
    }
    if (s.size() == 0) {
        return 0.0;
    }
    if (std::isinf(alpha)) {
        return s.maxCoeff();
    }
    const double top = s.maxCoeff();
    if (top == 0.0) {
        return 0.0;
    }
    // scaled to avoid overflow for large alpha
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        acc += std::pow(s(i) / top, alpha);
    }
    return top * std::pow(acc, 1.0 / alpha);
}

double schatten_norm(const Matrix& a, double alpha) {
    if (std::isnan(alpha) || alpha < 1.0) {
        throw DomainError("schatten_norm: alpha must be >= 1");
    }
    return schatten_norm_from_singular_values(singular_values(a), alpha);
}

std::size_t counting_trace(const SpectralDecomposition& d, const Interval& interval) {
    std::size_t count = 0;
    for (const auto& c : d.clusters()) {
        if (interval.contains(c.value)) {
            count += c.size();
        }
    }
    return count;
}

bool psd_leq(const Matrix& a, const Matrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("psd_leq: dimension mismatch");
    }
    const Matrix diff = b - a;
    const Matrix herm = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -tol;
}

Matrix inverse_one_plus_square(const SpectralDecomposition& d) {
    return d.apply([](double x) { return 1.0 / (1.0 + x * x); });
}

namespace {

double resolvent_factor(const HermitianOperator& w) {
    const double nw = w.operator_norm();
    return 1.0 + nw + nw * nw;
}

}  // namespace

bool resolvent_inequality_check(const HermitianOperator& h0, const HermitianOperator& w) {
    const auto d0 = decompose(h0);
    const auto d1 = decompose(h0 + w);
    const Matrix lhs = inverse_one_plus_square(d1);
    const Matrix rhs = resolvent_factor(w) * inverse_one_plus_square(d0);
    return psd_leq(lhs, rhs);
}

bool projection_inequality_check(const HermitianOperator& h0, const HermitianOperator& w,
                                 const Interval& interval) {
    const auto d0 = decompose(h0);
    const auto d1 = decompose(h0 + w);
    const Matrix lhs = d1.apply([&interval](double x) { return interval.contains(x) ? 1.0 : 0.0; });
    const double smax = interval.max_abs();
    const Matrix rhs = (1.0 + smax * smax) * resolvent_factor(w) * inverse_one_plus_square(d0);
    return psd_leq(lhs, rhs);
}

bool trace_class_bound_check(const ScalarFunction& f, const SpectralDecomposition& d) {
    const auto supp = f.support();
    if (!supp) {
        throw DomainError("trace_class_bound_check: f must be compactly supported");
    }
    auto within = [](double lhs, double rhs) { return lhs <= rhs + 1e-10 * (1.0 + std::abs(rhs)); };

    double trace_norm = 0.0;
    for (const auto& c : d.clusters()) {
        trace_norm += std::abs(f(c.value)) * static_cast<double>(c.size());
    }
    const double straight_rhs = sup_norm(f) * static_cast<double>(counting_trace(d, *supp));
    if (!within(trace_norm, straight_rhs)) {
        return false;
    }

    double hs_sq = 0.0;
    double resolvent_hs_sq = 0.0;
    for (const auto& c : d.clusters()) {
        const double x = c.value;
        const double fu = f(x) * std::sqrt(1.0 + x * x);
        hs_sq += fu * fu * static_cast<double>(c.size());
        resolvent_hs_sq += static_cast<double>(c.size()) / (1.0 + x * x);
    }
    const double straight2_rhs = sup_norm(product_with_u2(f)) * std::sqrt(resolvent_hs_sq);
    return within(std::sqrt(hs_sq), straight2_rhs);
}

}  // namespace spt
