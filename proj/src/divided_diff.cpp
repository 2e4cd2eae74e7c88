#include "spt/divided_diff.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace spt {

namespace {

constexpr std::size_t kMaxGridOrder = 15;

struct Group {
    double value;
    std::size_t count;
};

std::vector<Group> groups_of(const std::vector<double>& sorted) {
    std::vector<Group> out;
    for (double x : sorted) {
        if (!out.empty() && out.back().value == x) {
            ++out.back().count;
        } else {
            out.push_back({x, 1});
        }
    }
    return out;
}

// Newton table over nodes where equal values are contiguous. In-place: c[i]
// still holds the previous column's c[i+1] when c[i] is overwritten.
double newton_table(std::span<const double> x, std::span<const std::span<const double>> jets) {
    const std::size_t n = x.size();
    std::array<double, kMaxGridOrder + 1> small{};
    std::vector<double> large;
    double* c = small.data();
    if (n > small.size()) {
        large.resize(n);
        c = large.data();
    }
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = jets[i][0];
    }
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = 0; i + k < n; ++i) {
            if (x[i + k] == x[i]) {
                if (jets[i].size() <= k) {
                    throw DomainError("divided_difference: confluent group of size " + std::to_string(k + 1) +
                                      " needs derivative order " + std::to_string(k));
                }
                c[i] = jets[i][k];
            } else {
                c[i] = (c[i + 1] - c[i]) / (x[i + k] - x[i]);
            }
        }
    }
    return c[0];
}

std::vector<std::vector<double>> group_jets(const ScalarFunction& f, const std::vector<Group>& groups) {
    std::vector<std::vector<double>> jets;
    jets.reserve(groups.size());
    for (const auto& g : groups) {
        const int need = static_cast<int>(g.count) - 1;
        if (need > f.max_order()) {
            throw DomainError("divided_difference: confluent group of size " + std::to_string(g.count) +
                              " exceeds max_order " + std::to_string(f.max_order()));
        }
        jets.push_back(f.jet(g.value, need));
    }
    return jets;
}

// Evaluate with groups laid out in the given order.
double evaluate_grouped(const std::vector<Group>& groups, const std::vector<std::vector<double>>& jets) {
    std::vector<double> x;
    std::vector<std::span<const double>> js;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t r = 0; r < groups[g].count; ++r) {
            x.push_back(groups[g].value);
            js.emplace_back(jets[g]);
        }
    }
    return newton_table(x, js);
}

}  // namespace

NodeList::NodeList(std::vector<double> raw, double tol) : nodes(std::move(raw)), merge_tol(tol) {
    if (nodes.empty()) {
        throw std::invalid_argument("NodeList: need at least one node");
    }
    if (merge_tol < 0.0) {
        throw std::invalid_argument("NodeList: merge_tol must be >= 0");
    }
    std::sort(nodes.begin(), nodes.end());
    const double gap = merge_tol * (1.0 + (nodes.back() - nodes.front()));
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= nodes.size(); ++i) {
        if (i < nodes.size() && nodes[i] - nodes[i - 1] < gap) {
            continue;
        }
        if (i - begin > 1) {
            const double mean = std::accumulate(nodes.begin() + static_cast<std::ptrdiff_t>(begin),
                                                nodes.begin() + static_cast<std::ptrdiff_t>(i), 0.0) /
                                static_cast<double>(i - begin);
            std::fill(nodes.begin() + static_cast<std::ptrdiff_t>(begin),
                      nodes.begin() + static_cast<std::ptrdiff_t>(i), mean);
        }
        begin = i;
    }
}

std::size_t NodeList::max_multiplicity() const {
    std::size_t best = 0;
    for (const auto& g : groups_of(nodes)) {
        best = std::max(best, g.count);
    }
    return best;
}

double divided_difference(const ScalarFunction& f, const NodeList& nodes) {
    const auto groups = groups_of(nodes.nodes);
    return evaluate_grouped(groups, group_jets(f, groups));
}

double divided_difference(const ScalarFunction& f, std::span<const double> nodes, double merge_tol) {
    return divided_difference(f, NodeList(std::vector<double>(nodes.begin(), nodes.end()), merge_tol));
}

double divided_difference_from_jets(std::span<const double> sorted_nodes,
                                    std::span<const std::span<const double>> jets) {
    if (sorted_nodes.empty() || jets.size() != sorted_nodes.size()) {
        throw std::invalid_argument("divided_difference_from_jets: size mismatch");
    }
    return newton_table(sorted_nodes, jets);
}

// ---------------------------------------------------------------------------

DividedDifferenceGrid::DividedDifferenceGrid(const ScalarFunction& f, std::vector<double> points, int max_q)
    : points_(std::move(points)), max_q_(max_q) {
    if (max_q < 0 || static_cast<std::size_t>(max_q) > kMaxGridOrder) {
        throw std::invalid_argument("DividedDifferenceGrid: order out of range");
    }
    const int order = std::min(max_q, f.max_order());
    jets_.reserve(points_.size());
    for (double x : points_) {
        jets_.push_back(f.jet(x, order));
    }
}

double DividedDifferenceGrid::operator()(std::span<const std::size_t> idx) const {
    const std::size_t n = idx.size();
    if (n == 0 || n > static_cast<std::size_t>(max_q_) + 1) {
        throw std::invalid_argument("DividedDifferenceGrid: tuple length out of range");
    }
    std::array<std::size_t, kMaxGridOrder + 1> order{};
    std::copy(idx.begin(), idx.end(), order.begin());
    // insertion sort by value; equal points share an index so ties stay contiguous
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t key = order[i];
        std::size_t j = i;
        while (j > 0 && (points_[order[j - 1]] > points_[key] ||
                         (points_[order[j - 1]] == points_[key] && order[j - 1] > key))) {
            order[j] = order[j - 1];
            --j;
        }
        order[j] = key;
    }
    std::array<double, kMaxGridOrder + 1> x{};
    std::array<std::span<const double>, kMaxGridOrder + 1> js{};
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = points_[order[i]];
        js[i] = jets_[order[i]];
    }
    return newton_table(std::span<const double>(x.data(), n),
                        std::span<const std::span<const double>>(js.data(), n));
}

// ---------------------------------------------------------------------------

double permutation_symmetry_residual(const ScalarFunction& f, std::span<const double> nodes, std::uint64_t seed,
                                     int trials) {
    const NodeList canonical(std::vector<double>(nodes.begin(), nodes.end()));
    const auto groups = groups_of(canonical.nodes);
    const auto jets = group_jets(f, groups);
    const double reference = evaluate_grouped(groups, jets);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> perm(groups.size());
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Group> g2;
        std::vector<std::vector<double>> j2;
        for (std::size_t i : perm) {
            g2.push_back(groups[i]);
            j2.push_back(jets[i]);
        }
        worst = std::max(worst, std::abs(evaluate_grouped(g2, j2) - reference));
    }
    return worst;
}

double sqrt_split_residual(const ScalarFunction& f, std::span<const double> nodes) {
    const auto g = dyadic_root(f, 1);
    const NodeList canonical(std::vector<double>(nodes.begin(), nodes.end()));
    const auto& x = canonical.nodes;
    const std::size_t n = x.size() - 1;
    auto dd = [&](std::size_t lo, std::size_t hi) {
        return divided_difference(g, std::span<const double>(x.data() + lo, hi - lo + 1));
    };

    double rhs = 0.0;
    if (n >= 1) {
        for (std::size_t k = 0; k <= (n - 1) / 2; ++k) {
            rhs += dd(0, k) * dd(k, n);
            rhs += dd(0, n - k) * dd(n - k, n);
        }
    }
    if (n % 2 == 0) {
        rhs += dd(0, n / 2) * dd(n / 2, n);
    }
    return std::abs(divided_difference(f, canonical) - rhs);
}

double u_conjugation_residual(const ScalarFunction& f, std::span<const double> nodes) {
    const NodeList canonical(std::vector<double>(nodes.begin(), nodes.end()));
    const auto& x = canonical.nodes;
    const std::size_t n = x.size() - 1;
    const auto u = weight_u();
    const auto fu = product_with_u(f);
    const auto fu2 = product_with_u2(f);
    auto dd = [&](const ScalarFunction& h, std::size_t lo, std::size_t hi) {
        return divided_difference(h, std::span<const double>(x.data() + lo, hi - lo + 1));
    };

    const double lhs = u(x.front()) * divided_difference(f, canonical) * u(x.back());
    double psi1 = 0.0;
    double psi2 = 0.0;
    double psi3 = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        psi1 += dd(fu, 0, n - k) * dd(u, n - k, n);
        psi2 += dd(u, 0, k) * dd(fu, k, n);
    }
    for (std::size_t k = 1; k + 1 <= n; ++k) {
        double inner = 0.0;
        for (std::size_t j = 1; j <= n - k; ++j) {
            inner += dd(f, k, n - j) * dd(u, n - j, n);
        }
        psi3 += dd(u, 0, k) * inner;
    }
    return std::abs(lhs - (dd(fu2, 0, n) - psi1 - psi2 + psi3));
}

bool mean_value_bound_check(const ScalarFunction& f, std::span<const double> nodes) {
    const NodeList canonical(std::vector<double>(nodes.begin(), nodes.end()));
    const int p = static_cast<int>(canonical.order());
    if (p > f.max_order()) {
        throw DomainError("mean_value_bound_check: order exceeds max_order");
    }
    std::optional<Interval> over;
    if (!f.compactly_supported()) {
        over = Interval::closed(canonical.nodes.front(), canonical.nodes.back());
    }
    double fact = 1.0;
    for (int i = 2; i <= p; ++i) {
        fact *= i;
    }
    const double bound = sup_norm(f, p, over) / fact;
    return std::abs(divided_difference(f, canonical)) <= bound + 1e-9;
}

}  // namespace spt
