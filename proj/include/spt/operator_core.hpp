// operator_core.hpp: Hermitian matrices, spectral decompositions, functional
// calculus, traces, Schatten norms and operator-order comparisons.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace spt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

class ScalarFunction;

// Thrown when an argument lies outside an operation's mathematical domain
// (alpha < 1 for a Schatten norm, insufficient derivative order, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class HermitianOperator {
public:
    HermitianOperator() = default;

    // Validates |A - A*| <= 1e-12 * max|A_ij| and stores (A + A*)/2.
    explicit HermitianOperator(const Matrix& entries);

    static HermitianOperator zero(std::size_t dim);
    static HermitianOperator identity(std::size_t dim);
    static HermitianOperator diagonal(const std::vector<double>& values);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix& matrix() const noexcept { return entries_; }

    // Largest singular value.
    double operator_norm() const;

    HermitianOperator operator+(const HermitianOperator& other) const;
    HermitianOperator operator-(const HermitianOperator& other) const;
    HermitianOperator scaled(double s) const;

private:
    struct trusted_tag {};
    HermitianOperator(Matrix entries, trusted_tag) : entries_(std::move(entries)) {}

    Matrix entries_;
};

struct Interval {
    double lo{0.0};
    double hi{0.0};
    bool lo_closed{true};
    bool hi_closed{true};

    static Interval closed(double lo, double hi);
    static Interval open(double lo, double hi);
    // (lo, hi]
    static Interval left_open(double lo, double hi);

    bool contains(double x) const noexcept;
    double length() const noexcept { return hi - lo; }
    // max |s| over the interval
    double max_abs() const noexcept;
};

// Group of numerically coincident eigenvalues treated as one spectral point.
struct Cluster {
    std::size_t begin{0};  // first eigenvalue index (inclusive)
    std::size_t end{0};    // one past the last index
    double value{0.0};     // mean of the member eigenvalues

    std::size_t size() const noexcept { return end - begin; }
};

class SpectralDecomposition {
public:
    static constexpr double kDefaultClusterTol = 1e-8;

    SpectralDecomposition(const HermitianOperator& op, double cluster_tol = kDefaultClusterTol);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(eigenvalues_.size()); }
    const RealVector& eigenvalues() const noexcept { return eigenvalues_; }
    const Matrix& eigenvectors() const noexcept { return eigenvectors_; }
    const std::vector<Cluster>& clusters() const noexcept { return clusters_; }
    const std::vector<Matrix>& projections() const noexcept { return projections_; }
    std::size_t cluster_count() const noexcept { return clusters_.size(); }

    // Cluster index of each eigenvalue index.
    const std::vector<std::size_t>& cluster_of() const noexcept { return cluster_of_; }

    // U* A U
    Matrix to_eigenbasis(const Matrix& a) const;
    // U A U*
    Matrix from_eigenbasis(const Matrix& a) const;

    // Sum_c g(lambda_c) P_c for an arbitrary real scalar map g.
    Matrix apply(const std::function<double(double)>& g) const;

    Matrix reconstruct() const;

private:
    RealVector eigenvalues_;
    Matrix eigenvectors_;
    std::vector<Cluster> clusters_;
    std::vector<Matrix> projections_;
    std::vector<std::size_t> cluster_of_;
};

SpectralDecomposition decompose(const HermitianOperator& h,
                                double cluster_tol = SpectralDecomposition::kDefaultClusterTol);

// f(H) = Sum_c f(lambda_c) P_c.
HermitianOperator apply_function(const ScalarFunction& f, const SpectralDecomposition& d);

Complex trace(const Matrix& a);

// Singular values in descending order.
RealVector singular_values(const Matrix& a);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// (Sum s_i^alpha)^(1/alpha); alpha = infinity gives the operator norm.
double schatten_norm(const Matrix& a, double alpha);
double schatten_norm_from_singular_values(const RealVector& s, double alpha);

// Number of eigenvalues (with multiplicity) in I, i.e. Tr E_H(I).
std::size_t counting_trace(const SpectralDecomposition& d, const Interval& interval);

inline constexpr double kPsdTolerance = 1e-10;

// True iff lambda_min(B - A) >= -tol.
bool psd_leq(const Matrix& a, const Matrix& b, double tol = kPsdTolerance);

// (1 + H^2)^{-1}
Matrix inverse_one_plus_square(const SpectralDecomposition& d);

// (1 + (H0+W)^2)^{-1} <= (1 + |W| + |W|^2) (1 + H0^2)^{-1}
bool resolvent_inequality_check(const HermitianOperator& h0, const HermitianOperator& w);

// E_{H0+W}(I) <= (1 + max_{s in I}|s|^2)(1 + |W| + |W|^2)(1 + H0^2)^{-1}
bool projection_inequality_check(const HermitianOperator& h0, const HermitianOperator& w,
                                 const Interval& interval);

// |f(H)|_1 <= |f|_inf Tr E_H(supp f)  and  |(fu)(H)|_2 <= |fu^2|_inf |(1+H^2)^{-1/2}|_2.
bool trace_class_bound_check(const ScalarFunction& f, const SpectralDecomposition& d);

}  // namespace spt
