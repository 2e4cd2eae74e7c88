// divided_diff.hpp: divided differences with confluent nodes, and the scalar
// identities behind the trace-norm estimates.

#pragma once

#include "spt/scalar_functions.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace spt {

inline constexpr double kDefaultMergeTol = 1e-9;

// Sorted nodes with near-coincident ones snapped to their group mean.
struct NodeList {
    std::vector<double> nodes;
    double merge_tol{kDefaultMergeTol};

    explicit NodeList(std::vector<double> raw, double merge_tol = kDefaultMergeTol);

    std::size_t order() const noexcept { return nodes.size() - 1; }
    // largest confluent group size
    std::size_t max_multiplicity() const;
};

// f^[p](x_0..x_p). Equal nodes take the derivative branch f^(k)/k!; requires
// f.max_order() >= max_multiplicity - 1.
double divided_difference(const ScalarFunction& f, const NodeList& nodes);
double divided_difference(const ScalarFunction& f, std::span<const double> nodes,
                          double merge_tol = kDefaultMergeTol);

// Newton-Hermite table on already sorted nodes whose Taylor jets are supplied:
// jets[i][k] = f^(k)(x_i)/k!. Nodes must be exactly equal to count as confluent.
double divided_difference_from_jets(std::span<const double> sorted_nodes,
                                    std::span<const std::span<const double>> jets);

// f^[q] on tuples drawn from a fixed point set, with jets computed once.
class DividedDifferenceGrid {
public:
    DividedDifferenceGrid(const ScalarFunction& f, std::vector<double> points, int max_q);

    std::size_t size() const noexcept { return points_.size(); }
    int max_q() const noexcept { return max_q_; }
    const std::vector<double>& points() const noexcept { return points_; }

    // f^[q](points[idx[0]], ..., points[idx[q]]) with q = idx.size() - 1.
    double operator()(std::span<const std::size_t> idx) const;

private:
    std::vector<double> points_;
    int max_q_;
    std::vector<std::vector<double>> jets_;
};

// max |f^[p](sigma(nodes)) - f^[p](nodes)| over `trials` random permutations.
double permutation_symmetry_residual(const ScalarFunction& f, std::span<const double> nodes,
                                     std::uint64_t seed = 0, int trials = 10);

// f^[n] against the expansion through sqrt(f) divided differences.
double sqrt_split_residual(const ScalarFunction& f, std::span<const double> nodes);

// u(x_0) f^[n] u(x_n) against (fu^2)^[n] - psi1 - psi2 + psi3.
double u_conjugation_residual(const ScalarFunction& f, std::span<const double> nodes);

// |f^[p]| <= |f^(p)|_inf / p!  (+1e-9)
bool mean_value_bound_check(const ScalarFunction& f, std::span<const double> nodes);

}  // namespace spt
