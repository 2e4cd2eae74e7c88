#include "spt/scalar_functions.hpp"

#include "spt/constants.hpp"
#include "spt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace spt {

namespace detail {

std::shared_ptr<const FunctionNode> FunctionNode::dyadic_root(int /*k*/) const { return nullptr; }

}  // namespace detail

namespace {

using detail::FunctionNode;
using NodePtr = std::shared_ptr<const FunctionNode>;

constexpr int kUnlimitedOrder = 1 << 20;

double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) {
        r *= i;
    }
    return r;
}

// h = a * b on truncated Taylor series.
void multiply_jets(std::span<const double> a, std::span<const double> b, std::span<double> h) {
    for (std::size_t j = 0; j < h.size(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i <= j; ++i) {
            acc += a[i] * b[j - i];
        }
        h[j] = acc;
    }
}

// h = g^alpha for g[0] > 0:  j g0 h_j = Sum_{i=1..j} (alpha i - (j-i)) g_i h_{j-i}.
void power_jet(std::span<const double> g, double alpha, std::span<double> h) {
    const double g0 = g[0];
    h[0] = std::pow(g0, alpha);
    for (std::size_t j = 1; j < h.size(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 1; i <= j; ++i) {
            acc += (alpha * static_cast<double>(i) - static_cast<double>(j - i)) * g[i] * h[j - i];
        }
        h[j] = acc / (static_cast<double>(j) * g0);
    }
}

std::optional<Interval> hull(const std::optional<Interval>& a, const std::optional<Interval>& b) {
    if (!a || !b) {
        return std::nullopt;
    }
    return Interval::closed(std::min(a->lo, b->lo), std::max(a->hi, b->hi));
}

std::optional<Interval> intersect(const std::optional<Interval>& a, const std::optional<Interval>& b) {
    if (!a) {
        return b;
    }
    if (!b) {
        return a;
    }
    const double lo = std::max(a->lo, b->lo);
    const double hi = std::min(a->hi, b->hi);
    if (lo > hi) {
        return Interval::closed(lo, lo);
    }
    return Interval::closed(lo, hi);
}

std::vector<double> merge_breakpoints(std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

// ---------------------------------------------------------------------------

class PolyBumpNode final : public FunctionNode {
public:
    PolyBumpNode(double center, double radius, int m) : center_(center), radius_(radius), m_(m) {}

    void jet(double x, std::span<double> out) const override {
        std::fill(out.begin(), out.end(), 0.0);
        const double s = (x - center_) / radius_;
        if (std::abs(s) >= 1.0) {
            return;
        }
        // (1 - s^2)^m = (1 - s)^m (1 + s)^m, each factor expanded without cancellation
        const std::size_t len = std::min<std::size_t>(out.size(), static_cast<std::size_t>(2 * m_ + 1));
        std::vector<double> a(len, 0.0);
        std::vector<double> b(len, 0.0);
        for (std::size_t i = 0; i < len && static_cast<int>(i) <= m_; ++i) {
            const int ii = static_cast<int>(i);
            const double c = binomial(m_, ii) * std::pow(1.0 / radius_, ii);
            a[i] = c * ((ii % 2 == 0) ? 1.0 : -1.0) * std::pow(1.0 - s, m_ - ii);
            b[i] = c * std::pow(1.0 + s, m_ - ii);
        }
        multiply_jets(a, b, out.first(len));
    }

    int max_order() const override { return m_ - 1; }
    std::optional<Interval> support() const override {
        return Interval::closed(center_ - radius_, center_ + radius_);
    }
    Family family() const override { return Family::PolyBump; }
    std::vector<double> breakpoints() const override { return {center_ - radius_, center_ + radius_}; }

    NodePtr dyadic_root(int k) const override {
        const int step = 1 << k;
        if (m_ % step != 0 || m_ / step < 2) {
            return nullptr;
        }
        return std::make_shared<PolyBumpNode>(center_, radius_, m_ / step);
    }

private:
    double center_;
    double radius_;
    int m_;
};

class PolynomialNode final : public FunctionNode {
public:
    explicit PolynomialNode(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

    void jet(double x, std::span<double> out) const override {
        const int deg = static_cast<int>(coeffs_.size()) - 1;
        for (std::size_t j = 0; j < out.size(); ++j) {
            const int jj = static_cast<int>(j);
            double acc = 0.0;
            for (int k = deg; k >= jj; --k) {
                acc += coeffs_[static_cast<std::size_t>(k)] * binomial(k, jj) * std::pow(x, k - jj);
            }
            out[j] = acc;
        }
    }

    int max_order() const override { return kUnlimitedOrder; }
    std::optional<Interval> support() const override { return std::nullopt; }
    Family family() const override { return Family::Polynomial; }

private:
    std::vector<double> coeffs_;
};

class WeightNode final : public FunctionNode {
public:
    void jet(double x, std::span<double> out) const override {
        std::vector<double> g(out.size(), 0.0);
        g[0] = 1.0 + x * x;
        if (g.size() > 1) {
            g[1] = 2.0 * x;
        }
        if (g.size() > 2) {
            g[2] = 1.0;
        }
        power_jet(g, 0.5, out);
    }

    int max_order() const override { return kUnlimitedOrder; }
    std::optional<Interval> support() const override { return std::nullopt; }
    Family family() const override { return Family::Weight; }
};

class PlateauPowerNode final : public FunctionNode {
public:
    PlateauPowerNode(Interval core, double pad, int smoothness, int power)
        : core_(core), pad_(pad), k_(smoothness), power_(power) {}

    void jet(double x, std::span<double> out) const override {
        std::fill(out.begin(), out.end(), 0.0);
        const double left = core_.lo - pad_;
        const double right = core_.hi + pad_;
        if (x <= left || x >= right) {
            return;
        }
        if (x >= core_.lo && x <= core_.hi) {
            out[0] = 1.0;
            return;
        }
        const bool on_left = x < core_.lo;
        const double t = on_left ? (x - left) / pad_ : (right - x) / pad_;
        const double dt = on_left ? 1.0 / pad_ : -1.0 / pad_;
        std::vector<double> beta(out.size());
        smoothstep_jet(t, beta);
        double scale = 1.0;
        for (double& b : beta) {
            b *= scale;
            scale *= dt;
        }
        std::vector<double> acc = beta;
        std::vector<double> tmp(out.size());
        for (int p = 1; p < power_; ++p) {
            multiply_jets(acc, beta, tmp);
            acc.swap(tmp);
        }
        std::copy(acc.begin(), acc.end(), out.begin());
    }

    int max_order() const override { return k_; }
    std::optional<Interval> support() const override {
        return Interval::closed(core_.lo - pad_, core_.hi + pad_);
    }
    Family family() const override { return Family::Plateau; }
    std::vector<double> breakpoints() const override {
        return {core_.lo - pad_, core_.lo, core_.hi, core_.hi + pad_};
    }

    NodePtr dyadic_root(int k) const override {
        const int step = 1 << k;
        if (power_ % step != 0) {
            return nullptr;
        }
        return std::make_shared<PlateauPowerNode>(core_, pad_, k_, power_ / step);
    }

    int power() const { return power_; }
    const Interval& core() const { return core_; }
    double pad() const { return pad_; }
    int smoothness() const { return k_; }

private:
    // S(t) = t^{K+1} Sum_{i=0..K} C(K+i, i) (1-t)^i, Taylor coefficients in t.
    void smoothstep_jet(double t, std::span<double> out) const {
        const std::size_t len = out.size();
        std::vector<double> a(len, 0.0);
        std::vector<double> b(len, 0.0);
        for (std::size_t l = 0; l < len && static_cast<int>(l) <= k_ + 1; ++l) {
            const int ll = static_cast<int>(l);
            a[l] = binomial(k_ + 1, ll) * std::pow(t, k_ + 1 - ll);
        }
        for (int i = 0; i <= k_; ++i) {
            const double c = binomial(k_ + i, i);
            for (std::size_t l = 0; l < len && static_cast<int>(l) <= i; ++l) {
                const int ll = static_cast<int>(l);
                b[l] += c * binomial(i, ll) * ((ll % 2 == 0) ? 1.0 : -1.0) * std::pow(1.0 - t, i - ll);
            }
        }
        multiply_jets(a, b, out);
    }

    Interval core_;
    double pad_;
    int k_;
    int power_;
};

class ScaledNode final : public FunctionNode {
public:
    ScaledNode(double c, NodePtr g) : c_(c), g_(std::move(g)) {}

    void jet(double x, std::span<double> out) const override {
        g_->jet(x, out);
        for (double& v : out) {
            v *= c_;
        }
    }
    int max_order() const override { return g_->max_order(); }
    std::optional<Interval> support() const override { return g_->support(); }
    Family family() const override { return Family::ScalarMultiple; }
    std::vector<double> breakpoints() const override { return g_->breakpoints(); }

    NodePtr dyadic_root(int k) const override {
        if (c_ < 0.0) {
            return nullptr;
        }
        auto root = g_->dyadic_root(k);
        if (!root) {
            return nullptr;
        }
        return std::make_shared<ScaledNode>(std::pow(c_, 1.0 / (1 << k)), std::move(root));
    }

private:
    double c_;
    NodePtr g_;
};

class SumNode final : public FunctionNode {
public:
    SumNode(NodePtr f, NodePtr g) : f_(std::move(f)), g_(std::move(g)) {}

    void jet(double x, std::span<double> out) const override {
        std::vector<double> tmp(out.size());
        f_->jet(x, out);
        g_->jet(x, tmp);
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] += tmp[j];
        }
    }
    int max_order() const override { return std::min(f_->max_order(), g_->max_order()); }
    std::optional<Interval> support() const override { return hull(f_->support(), g_->support()); }
    Family family() const override { return Family::Sum; }
    std::vector<double> breakpoints() const override {
        return merge_breakpoints(f_->breakpoints(), g_->breakpoints());
    }

private:
    NodePtr f_;
    NodePtr g_;
};

class ProductNode final : public FunctionNode {
public:
    ProductNode(NodePtr f, NodePtr g, Family tag) : f_(std::move(f)), g_(std::move(g)), tag_(tag) {}

    void jet(double x, std::span<double> out) const override {
        std::vector<double> a(out.size());
        std::vector<double> b(out.size());
        f_->jet(x, a);
        g_->jet(x, b);
        multiply_jets(a, b, out);
    }
    int max_order() const override { return std::min(f_->max_order(), g_->max_order()); }
    std::optional<Interval> support() const override { return intersect(f_->support(), g_->support()); }
    Family family() const override { return tag_; }
    std::vector<double> breakpoints() const override {
        return merge_breakpoints(f_->breakpoints(), g_->breakpoints());
    }

private:
    NodePtr f_;
    NodePtr g_;
    Family tag_;
};

class DerivativeNode final : public FunctionNode {
public:
    DerivativeNode(NodePtr g, int d) : g_(std::move(g)), d_(d) {}

    void jet(double x, std::span<double> out) const override {
        std::vector<double> full(out.size() + static_cast<std::size_t>(d_));
        g_->jet(x, full);
        for (std::size_t j = 0; j < out.size(); ++j) {
            const int jj = static_cast<int>(j);
            // f^(j+d)/j! = full[j+d] (j+d)!/j!
            double ratio = 1.0;
            for (int i = jj + 1; i <= jj + d_; ++i) {
                ratio *= i;
            }
            out[j] = full[j + static_cast<std::size_t>(d_)] * ratio;
        }
    }
    int max_order() const override { return g_->max_order() - d_; }
    std::optional<Interval> support() const override { return g_->support(); }
    Family family() const override { return Family::Derivative; }
    std::vector<double> breakpoints() const override { return g_->breakpoints(); }

private:
    NodePtr g_;
    int d_;
};

// (c + f)^alpha on supp f, c^alpha * beta^{N'} outside; the dyadic root of the
// shifted sum c*beta^N + f when beta = 1 on supp f.
class ShiftedRootNode final : public FunctionNode {
public:
    ShiftedRootNode(NodePtr f, Interval core, std::shared_ptr<const PlateauPowerNode> b_root, double c,
                    double alpha)
        : f_(std::move(f)), core_(core), b_root_(std::move(b_root)), c_(c), alpha_(alpha) {}

    void jet(double x, std::span<double> out) const override {
        if (core_.contains(x)) {
            std::vector<double> g(out.size());
            f_->jet(x, g);
            g[0] += c_;
            power_jet(g, alpha_, out);
            return;
        }
        b_root_->jet(x, out);
        const double scale = std::pow(c_, alpha_);
        for (double& v : out) {
            v *= scale;
        }
    }
    int max_order() const override { return std::min(f_->max_order(), b_root_->max_order()); }
    std::optional<Interval> support() const override { return b_root_->support(); }
    Family family() const override { return Family::DyadicRoot; }
    std::vector<double> breakpoints() const override {
        return merge_breakpoints(f_->breakpoints(), b_root_->breakpoints());
    }

private:
    NodePtr f_;
    Interval core_;
    std::shared_ptr<const PlateauPowerNode> b_root_;
    double c_;
    double alpha_;
};

// c * beta^N + f with beta = 1 on supp f and c >= 2|f|_inf, so the sum is >= |f|_inf
// on supp f and every dyadic root down to beta^1 is smooth.
class ShiftedSumNode final : public FunctionNode {
public:
    ShiftedSumNode(NodePtr f, std::shared_ptr<const PlateauPowerNode> b, double c)
        : f_(std::move(f)), b_(std::move(b)), c_(c) {}

    void jet(double x, std::span<double> out) const override {
        std::vector<double> tmp(out.size());
        b_->jet(x, out);
        f_->jet(x, tmp);
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] = c_ * out[j] + tmp[j];
        }
    }
    int max_order() const override { return std::min(f_->max_order(), b_->max_order()); }
    std::optional<Interval> support() const override { return b_->support(); }
    Family family() const override { return Family::Sum; }
    std::vector<double> breakpoints() const override {
        return merge_breakpoints(f_->breakpoints(), b_->breakpoints());
    }

    NodePtr dyadic_root(int k) const override {
        const int step = 1 << k;
        if (b_->power() % step != 0 || c_ <= 0.0) {
            return nullptr;
        }
        auto b_root = std::make_shared<PlateauPowerNode>(b_->core(), b_->pad(), b_->smoothness(),
                                                         b_->power() / step);
        return std::make_shared<ShiftedRootNode>(f_, *f_->support(), std::move(b_root), c_,
                                                 1.0 / static_cast<double>(step));
    }

private:
    NodePtr f_;
    std::shared_ptr<const PlateauPowerNode> b_;
    double c_;
};

}  // namespace

std::string to_string(Family family) {
    switch (family) {
        case Family::PolyBump: return "poly_bump";
        case Family::Polynomial: return "polynomial";
        case Family::Weight: return "weight";
        case Family::Plateau: return "plateau";
        case Family::Product: return "product";
        case Family::Sum: return "sum";
        case Family::ScalarMultiple: return "scalar_multiple";
        case Family::DyadicRoot: return "dyadic_root";
        case Family::Weighted: return "weighted";
        case Family::Derivative: return "derivative";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------

ScalarFunction::ScalarFunction(std::shared_ptr<const detail::FunctionNode> node) : node_(std::move(node)) {
    if (!node_) {
        throw std::invalid_argument("ScalarFunction: null node");
    }
}

double ScalarFunction::operator()(double x) const {
    double v = 0.0;
    node_->jet(x, std::span<double>(&v, 1));
    return v;
}

double ScalarFunction::deriv(int j, double x) const {
    if (j < 0 || j > max_order()) {
        throw DomainError("ScalarFunction::deriv: order " + std::to_string(j) + " exceeds max_order " +
                          std::to_string(max_order()));
    }
    std::vector<double> out(static_cast<std::size_t>(j) + 1);
    node_->jet(x, out);
    return out.back() * factorial(j);
}

std::vector<double> ScalarFunction::jet(double x, int order) const {
    std::vector<double> out(static_cast<std::size_t>(order) + 1);
    node_->jet(x, out);
    return out;
}

void ScalarFunction::jet_into(double x, std::span<double> out) const { node_->jet(x, out); }

ScalarFunction ScalarFunction::derivative(int order) const {
    if (order < 0 || order > max_order()) {
        throw DomainError("ScalarFunction::derivative: order exceeds max_order");
    }
    if (order == 0) {
        return *this;
    }
    return ScalarFunction(std::make_shared<DerivativeNode>(node_, order));
}

ScalarFunction ScalarFunction::scaled(double c) const {
    return ScalarFunction(std::make_shared<ScaledNode>(c, node_));
}

ScalarFunction operator+(const ScalarFunction& f, const ScalarFunction& g) {
    return ScalarFunction(std::make_shared<SumNode>(f.node(), g.node()));
}

ScalarFunction operator-(const ScalarFunction& f, const ScalarFunction& g) { return f + g.scaled(-1.0); }

ScalarFunction operator*(const ScalarFunction& f, const ScalarFunction& g) {
    return ScalarFunction(std::make_shared<ProductNode>(f.node(), g.node(), Family::Product));
}

ScalarFunction operator*(double c, const ScalarFunction& f) { return f.scaled(c); }

ScalarFunction make_poly_bump(double center, double radius, int m) {
    if (m < 2) {
        throw DomainError("make_poly_bump: exponent m must be >= 2");
    }
    if (!(radius > 0.0)) {
        throw DomainError("make_poly_bump: radius must be positive");
    }
    return ScalarFunction(std::make_shared<PolyBumpNode>(center, radius, m));
}

ScalarFunction make_polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) {
        coeffs.push_back(0.0);
    }
    return ScalarFunction(std::make_shared<PolynomialNode>(std::move(coeffs)));
}

ScalarFunction make_monomial(int k) {
    if (k < 0) {
        throw DomainError("make_monomial: negative degree");
    }
    std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
    c.back() = 1.0;
    return make_polynomial(std::move(c));
}

ScalarFunction make_plateau(const Interval& core, double pad, int smoothness) {
    return make_plateau_power(core, pad, smoothness, 1);
}

ScalarFunction make_plateau_power(const Interval& core, double pad, int smoothness, int power) {
    if (!(pad > 0.0) || smoothness < 1 || power < 1) {
        throw DomainError("make_plateau_power: need pad > 0, smoothness >= 1, power >= 1");
    }
    return ScalarFunction(std::make_shared<PlateauPowerNode>(core, pad, smoothness, power));
}

ScalarFunction weight_u() { return ScalarFunction(std::make_shared<WeightNode>()); }

ScalarFunction product_with_u(const ScalarFunction& f) {
    return ScalarFunction(std::make_shared<ProductNode>(f.node(), weight_u().node(), Family::Weighted));
}

ScalarFunction product_with_u2(const ScalarFunction& f) {
    auto u2 = make_polynomial({1.0, 0.0, 1.0});
    return ScalarFunction(std::make_shared<ProductNode>(f.node(), u2.node(), Family::Weighted));
}

ScalarFunction dyadic_root(const ScalarFunction& f, int k) {
    if (k < 0) {
        throw DomainError("dyadic_root: k must be >= 0");
    }
    if (k == 0) {
        return f;
    }
    auto root = f.node()->dyadic_root(k);
    if (!root) {
        throw UnsupportedFamily("dyadic_root: no closed-form 2^-" + std::to_string(k) + " root for family " +
                                to_string(f.family()));
    }
    return ScalarFunction(std::move(root));
}

// ---------------------------------------------------------------------------

double sup_norm(const ScalarFunction& f, int order, const std::optional<Interval>& over) {
    const auto range = over ? over : f.support();
    if (!range) {
        throw DomainError("sup_norm: unbounded support needs an explicit interval");
    }
    const double lo = range->lo;
    const double hi = range->hi;
    auto g = [&](double x) { return std::abs(f.deriv(order, x)); };
    if (hi <= lo) {
        return g(lo);
    }

    constexpr int kSamples = 4096;
    const double h = (hi - lo) / kSamples;
    std::vector<double> xs(kSamples + 1);
    std::vector<double> vs(kSamples + 1);
    for (int i = 0; i <= kSamples; ++i) {
        xs[i] = (i == kSamples) ? hi : lo + i * h;
        vs[i] = g(xs[i]);
    }
    double best = *std::max_element(vs.begin(), vs.end());
    for (double bp : f.breakpoints()) {
        if (bp >= lo && bp <= hi) {
            best = std::max(best, g(bp));
        }
    }

    // golden-section refinement around the strongest local maxima
    std::vector<int> peaks;
    for (int i = 0; i <= kSamples; ++i) {
        const bool left_ok = i == 0 || vs[i] >= vs[i - 1];
        const bool right_ok = i == kSamples || vs[i] >= vs[i + 1];
        if (left_ok && right_ok) {
            peaks.push_back(i);
        }
    }
    std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return vs[a] > vs[b]; });
    if (peaks.size() > 8) {
        peaks.resize(8);
    }
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i : peaks) {
        double a = std::max(lo, xs[i] - h);
        double b = std::min(hi, xs[i] + h);
        double c = b - phi * (b - a);
        double d = a + phi * (b - a);
        double gc = g(c);
        double gd = g(d);
        for (int it = 0; it < 60; ++it) {
            if (gc > gd) {
                b = d;
                d = c;
                gd = gc;
                c = b - phi * (b - a);
                gc = g(c);
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + phi * (b - a);
                gd = g(d);
            }
        }
        best = std::max({best, gc, gd});
    }
    return best;
}

namespace {

std::vector<double> quadrature_cuts(const ScalarFunction& f, const Interval& supp) {
    std::vector<double> cuts{supp.lo, supp.hi};
    for (double bp : f.breakpoints()) {
        if (bp > supp.lo && bp < supp.hi) {
            cuts.push_back(bp);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

double squared_l2(const ScalarFunction& f, int order, int panels, const GaussLegendreRule& rule) {
    if (f.family() == Family::Weight) {
        // x = tan(theta): the integrand decays like cos^{2 order} at the ends
        auto integrand = [&](double theta) {
            const double x = std::tan(theta);
            const double c = std::cos(theta);
            const double v = f.deriv(order, x);
            return v * v / (c * c);
        };
        const double half_pi = std::numbers::pi / 2.0;
        return integrate_composite(integrand, -half_pi, half_pi, panels, rule);
    }
    const auto supp = f.support();
    auto integrand = [&](double x) {
        const double v = f.deriv(order, x);
        return v * v;
    };
    const auto cuts = quadrature_cuts(f, *supp);
    return integrate_segments(integrand, cuts, panels, rule);
}

}  // namespace

L2Norm l2_norm_of_derivative(const ScalarFunction& f, int order, int panels, int nodes) {
    if (order < 0 || order > f.max_order()) {
        throw DomainError("l2_norm_of_derivative: order exceeds max_order");
    }
    if (f.family() == Family::Weight) {
        if (order < 2) {
            throw DomainError("l2_norm_of_derivative: u^(j) is square integrable only for j >= 2");
        }
    } else if (!f.compactly_supported()) {
        throw DomainError("l2_norm_of_derivative: function must be compactly supported");
    }
    const auto rule = gauss_legendre(nodes);
    const double coarse = std::sqrt(squared_l2(f, order, panels, rule));
    const double fine = std::sqrt(squared_l2(f, order, 2 * panels, rule));
    return L2Norm{coarse, std::abs(fine - coarse)};
}

GpSeminorm gp_seminorm(const ScalarFunction& f, int p, int panels) {
    if (p < 0) {
        throw DomainError("gp_seminorm: p must be >= 0");
    }
    if (p + 1 > f.max_order()) {
        throw DomainError("gp_seminorm: need max_order >= p+1 (p=" + std::to_string(p) +
                          ", max_order=" + std::to_string(f.max_order()) + ")");
    }
    const auto a = l2_norm_of_derivative(f, p, panels);
    const auto b = l2_norm_of_derivative(f, p + 1, panels);
    const double c = std::sqrt(2.0) / factorial(p);
    return GpSeminorm{p, c * (a.value + b.value), c * (a.error_estimate + b.error_estimate)};
}

namespace {

// 2 * trapezoid over s in [0, span] of |(2π)^{-1/2} Sum_j w_j g_j e^{-i s j dx}|,
// returning the |F| samples as well.
std::vector<double> fourier_abs_samples(std::span<const double> weighted, double dx, double span,
                                        std::size_t ns) {
    std::vector<double> out(ns + 1);
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t k = 0; k <= ns; ++k) {
        const double s = span * static_cast<double>(k) / static_cast<double>(ns);
        const std::complex<double> step = std::polar(1.0, -s * dx);
        std::complex<double> phase{1.0, 0.0};
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < weighted.size(); ++j) {
            acc += weighted[j] * phase;
            phase *= step;
            if ((j & 1023u) == 1023u) {
                phase = std::polar(1.0, -s * dx * static_cast<double>(j + 1));
            }
        }
        out[k] = norm * std::abs(acc);
    }
    return out;
}

double symmetric_trapezoid(std::span<const double> samples, double span, std::size_t stride) {
    const std::size_t n = (samples.size() - 1) / stride;
    const double h = span / static_cast<double>(n);
    double acc = 0.5 * (samples.front() + samples.back());
    for (std::size_t k = 1; k < n; ++k) {
        acc += samples[k * stride];
    }
    return 2.0 * h * acc;
}

}  // namespace

FourierL1Norm fourier_l1_norm(const ScalarFunction& f, int p, std::size_t grid, double span) {
    const auto supp = f.support();
    if (!supp) {
        throw DomainError("fourier_l1_norm: function must be compactly supported");
    }
    if (p < 0 || p > f.max_order()) {
        throw DomainError("fourier_l1_norm: p exceeds max_order");
    }
    if (grid < 16) {
        throw std::invalid_argument("fourier_l1_norm: grid too small");
    }
    grid = (grid + 3) / 4 * 4;  // both halvings stay integral
    const double radius = 0.5 * supp->length();
    if (radius <= 0.0) {
        return {};
    }
    if (span <= 0.0) {
        span = 200.0 / radius;
    }
    const double dx = supp->length() / static_cast<double>(grid);
    std::vector<double> values(grid + 1);
    for (std::size_t j = 0; j <= grid; ++j) {
        const double x = (j == grid) ? supp->hi : supp->lo + static_cast<double>(j) * dx;
        values[j] = f.deriv(p, x);
    }
    std::vector<double> weighted(grid + 1);
    for (std::size_t j = 0; j <= grid; ++j) {
        weighted[j] = ((j == 0 || j == grid) ? 0.5 * dx : dx) * values[j];
    }
    const std::size_t half = grid / 2;
    std::vector<double> coarse(half + 1);
    for (std::size_t j = 0; j <= half; ++j) {
        coarse[j] = ((j == 0 || j == half) ? dx : 2.0 * dx) * values[2 * j];
    }

    const std::size_t ns = grid / 2;
    const auto fine_samples = fourier_abs_samples(weighted, dx, span, ns);
    const auto coarse_samples = fourier_abs_samples(coarse, 2.0 * dx, span, ns);

    FourierL1Norm out;
    out.value = symmetric_trapezoid(fine_samples, span, 1);
    const double coarse_x = symmetric_trapezoid(coarse_samples, span, 1);
    const double coarse_s = symmetric_trapezoid(fine_samples, span, 2);
    out.refinement_error = std::abs(out.value - coarse_x) + std::abs(out.value - coarse_s);

    // |F(s)| ~ s^{-q} beyond the window; envelope from the last 5% of samples
    const int q = f.max_order() - p + 2;
    const std::size_t tail_start = ns - ns / 20;
    const double envelope = *std::max_element(fine_samples.begin() + static_cast<std::ptrdiff_t>(tail_start),
                                              fine_samples.end());
    out.tail_estimate = q > 1 ? 2.0 * envelope * span / (q - 1) : kInfinity;
    return out;
}

SeminormReport seminorm_report(const ScalarFunction& f, int p, std::size_t fourier_grid) {
    const auto gp = gp_seminorm(f, p);
    const auto fl = fourier_l1_norm(f, p, fourier_grid);
    const double pf = factorial(p);
    return SeminormReport{p, gp.value, fl.value / pf, gp.error_estimate, fl.error_estimate() / pf};
}

SignedDecomposition decompose_signed(const ScalarFunction& f, int n) {
    const auto supp = f.support();
    if (!supp) {
        throw UnsupportedFamily("decompose_signed: f must be compactly supported");
    }
    if (f.max_order() < n + 1) {
        throw DomainError("decompose_signed: f must be C^{n+1}");
    }
    const int jn = j_of(n);
    const int power = 1 << jn;
    const double radius = 0.5 * supp->length();
    const double pad = radius > 0.0 ? 0.5 * radius : 0.5;
    const int smoothness = std::max(n + 1, std::min(f.max_order(), 16));
    auto b = std::make_shared<PlateauPowerNode>(*supp, pad, smoothness, power);
    const double shift = 2.0 * sup_norm(f);

    SignedDecomposition out{
        ScalarFunction(std::make_shared<ShiftedSumNode>(f.node(), b, shift)),
        ScalarFunction(std::make_shared<ScaledNode>(shift, b)),
        ScalarFunction(b),
        shift,
        jn,
        Interval::closed(supp->lo - pad, supp->hi + pad),
    };
    return out;
}

}  // namespace spt
