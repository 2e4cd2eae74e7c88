#include "spt/shift.hpp"

#include "spt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spt {

double StepFunction::operator()(double x) const {
    if (breakpoints.empty() || x < breakpoints.front() || x >= breakpoints.back()) {
        return 0.0;
    }
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

double StepFunction::integral_to(double x) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double lo = breakpoints[k];
        const double hi = std::min(breakpoints[k + 1], x);
        if (hi <= lo) {
            break;
        }
        acc += values[k] * (hi - lo);
    }
    return acc;
}

double AtomicMeasure::total_mass() const {
    double acc = 0.0;
    for (const auto& a : atoms) {
        acc += a.weight;
    }
    return acc;
}

double AtomicMeasure::mass_below(double x) const {
    double acc = 0.0;
    for (const auto& a : atoms) {
        if (a.location < x) {
            acc += a.weight;
        }
    }
    return acc;
}

double PiecewiseLinearFunction::operator()(double x) const {
    for (const auto& p : pieces) {
        if (x > p.lo && x <= p.hi) {
            return p(x);
        }
    }
    return 0.0;
}

double PiecewiseLinearFunction::l1_norm() const {
    double acc = 0.0;
    for (const auto& p : pieces) {
        const double ya = p(p.lo);
        const double yb = p(p.hi);
        const double w = p.hi - p.lo;
        if ((ya >= 0.0) == (yb >= 0.0)) {
            acc += 0.5 * w * std::abs(ya + yb);
        } else {
            // sign change inside: two triangles
            const double root = p.lo + w * ya / (ya - yb);
            acc += 0.5 * (std::abs(ya) * (root - p.lo) + std::abs(yb) * (p.hi - root));
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------

Interval default_window(const HermitianOperator& h0, const HermitianOperator& v,
                        const std::optional<Interval>& must_contain) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h0.matrix(), Eigen::EigenvaluesOnly);
    const double vn = v.operator_norm();
    double a = solver.eigenvalues().minCoeff() - 1.0 - vn;
    double b = solver.eigenvalues().maxCoeff() + 1.0 + vn;
    if (must_contain) {
        a = std::min(a, must_contain->lo - 1.0);
        b = std::max(b, must_contain->hi + 1.0);
    }
    return Interval::open(a, b);
}

namespace {

RealVector eigenvalues_in(const HermitianOperator& h, const Interval& window, const char* which) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
    const RealVector ev = solver.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (!(ev(i) > window.lo && ev(i) < window.hi)) {
            throw DomainError(std::string("xi: eigenvalue ") + std::to_string(ev(i)) + " of " + which +
                              " lies outside the window (" + std::to_string(window.lo) + ", " +
                              std::to_string(window.hi) + ")");
        }
    }
    return ev;
}

void require_support_inside(const ScalarFunction& f, const Interval& window) {
    const auto supp = f.support();
    if (!supp || supp->lo <= window.lo || supp->hi >= window.hi) {
        throw DomainError("shift: supp f must lie inside the window");
    }
}

}  // namespace

StepFunction xi(const HermitianOperator& h0, const HermitianOperator& v, const Interval& window) {
    const RealVector e0 = eigenvalues_in(h0, window, "H0");
    const RealVector e1 = eigenvalues_in(h0 + v, window, "H0+V");
    std::vector<double> pts(e0.begin(), e0.end());
    pts.insert(pts.end(), e1.begin(), e1.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    StepFunction out;
    out.breakpoints = pts;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double t = pts[k];
        const auto n0 = std::count_if(e0.begin(), e0.end(), [t](double x) { return x <= t; });
        const auto n1 = std::count_if(e1.begin(), e1.end(), [t](double x) { return x <= t; });
        out.values.push_back(static_cast<double>(n0 - n1));
    }
    if (pts.size() == 1) {
        out.values.clear();
    }
    return out;
}

double first_order_check(const ScalarFunction& f, const HermitianOperator& h0, const HermitianOperator& v,
                         const Interval& window) {
    require_support_inside(f, window);
    const auto step = xi(h0, v, window);
    double integral = 0.0;
    for (std::size_t k = 0; k < step.values.size(); ++k) {
        integral += step.values[k] * (f(step.breakpoints[k + 1]) - f(step.breakpoints[k]));
    }
    const RealVector e0 = Eigen::SelfAdjointEigenSolver<Matrix>(h0.matrix(), Eigen::EigenvaluesOnly).eigenvalues();
    const RealVector e1 =
        Eigen::SelfAdjointEigenSolver<Matrix>((h0 + v).matrix(), Eigen::EigenvaluesOnly).eigenvalues();
    double diff = 0.0;
    for (Eigen::Index i = 0; i < e0.size(); ++i) {
        diff += f(e1(i)) - f(e0(i));
    }
    return std::abs(diff - integral);
}

AtomicMeasure mu_measure(const SpectralDecomposition& d0, const Matrix& v, const Interval& window) {
    AtomicMeasure mu;
    for (std::size_t c = 0; c < d0.cluster_count(); ++c) {
        const double x = d0.clusters()[c].value;
        if (window.contains(x)) {
            mu.atoms.push_back({x, (d0.projections()[c] * v).trace().real()});
        }
    }
    return mu;
}

PiecewiseLinearFunction eta(const HermitianOperator& h0, const HermitianOperator& v, const Interval& window) {
    const auto step = xi(h0, v, window);
    const auto mu = mu_measure(decompose(h0), v.matrix(), window);
    PiecewiseLinearFunction out;
    const double snap = SpectralDecomposition::kDefaultClusterTol * (1.0 + window.max_abs());
    double xi_integral = 0.0;  // int_a^{t_k} xi
    for (std::size_t k = 0; k < step.values.size(); ++k) {
        const double lo = step.breakpoints[k];
        const double hi = step.breakpoints[k + 1];
        const double s = step.values[k];
        // atoms at or below lo are inside (a, l) for every l in (lo, hi]; a cluster
        // mean can sit a rounding error above its own breakpoint
        double mass = 0.0;
        for (const auto& a : mu.atoms) {
            if (a.location <= lo + snap) {
                mass += a.weight;
            }
        }
        out.pieces.push_back({lo, hi, -s, mass - xi_integral + s * lo});
        xi_integral += s * (hi - lo);
    }
    return out;
}

double second_order_check(const ScalarFunction& f, const HermitianOperator& h0, const HermitianOperator& v,
                          const Interval& window) {
    require_support_inside(f, window);
    if (f.max_order() < 3) {
        throw DomainError("second_order_check: f must be C^3");
    }
    const auto e = eta(h0, v, window);
    const auto supp = *f.support();
    auto cuts_base = f.breakpoints();
    cuts_base.push_back(supp.lo);
    cuts_base.push_back(supp.hi);
    const auto rule = gauss_legendre(8);
    const double panel_width = supp.length() / 64.0;

    double integral = 0.0;
    for (const auto& p : e.pieces) {
        const double lo = std::max(p.lo, supp.lo);
        const double hi = std::min(p.hi, supp.hi);
        if (hi <= lo) {
            continue;
        }
        std::vector<double> cuts{lo, hi};
        for (double c : cuts_base) {
            if (c > lo && c < hi) {
                cuts.push_back(c);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const double len = cuts[s + 1] - cuts[s];
            const int panels = std::max(1, static_cast<int>(std::ceil(len / panel_width)));
            integral += integrate_composite([&](double t) { return f.deriv(2, t) * p(t); }, cuts[s], cuts[s + 1],
                                            panels, rule);
        }
    }
    return std::abs(remainder_trace(f, h0, v, 2) - integral);
}

BoundCertificate eta_l1_bound_check(const HermitianOperator& h0, const HermitianOperator& v, const Interval& window) {
    const double vn = v.operator_norm();
    const double res_trace = resolvent_trace(decompose(h0));
    const double cab = c_ab(window.lo, window.hi);
    BoundCertificate cert;
    cert.kind = "eta_l1";
    cert.lhs = eta(h0, v, window).l1_norm();
    cert.rhs = cab * res_trace * (1.0 + vn + vn * vn) * vn * vn;
    cert.ingredients = {
        {"a", window.lo},
        {"b", window.hi},
        {"C_ab", cab},
        {"V_norm", vn},
        {"resolvent_trace", res_trace},
    };
    return cert;
}

nlohmann::json ShiftData::to_json() const {
    nlohmann::json j;
    j["breakpoints"] = xi.breakpoints;
    j["xi_values"] = xi.values;
    auto pieces = nlohmann::json::array();
    for (const auto& p : eta.pieces) {
        pieces.push_back({{"lo", p.lo}, {"hi", p.hi}, {"slope", p.slope}, {"intercept", p.intercept}});
    }
    j["eta_pieces"] = pieces;
    auto atoms = nlohmann::json::array();
    for (const auto& a : mu.atoms) {
        atoms.push_back({{"location", a.location}, {"weight", a.weight}});
    }
    j["atoms"] = atoms;
    return j;
}

ShiftData shift_data(const HermitianOperator& h0, const HermitianOperator& v, const Interval& window) {
    return ShiftData{xi(h0, v, window), eta(h0, v, window), mu_measure(decompose(h0), v.matrix(), window)};
}

}  // namespace spt
