// quadrature.hpp: Gauss-Legendre rules and composite integration.

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace spt {

struct GaussLegendreRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

// n-point rule from Newton iteration on the Legendre three-term recurrence.
GaussLegendreRule gauss_legendre(int n);

// Integral over [a, b] split into `panels` equal panels of an n-point rule.
double integrate_composite(const std::function<double(double)>& g, double a, double b, int panels,
                           const GaussLegendreRule& rule);

// Integral over [cuts.front(), cuts.back()] with panel boundaries at every cut;
// `panels` are shared across segments in proportion to their length (>= 1 each).
double integrate_segments(const std::function<double(double)>& g, std::span<const double> cuts,
                          int panels, const GaussLegendreRule& rule);

}  // namespace spt
