#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

namespace rissa::quad {

inline constexpr int kOrder = 12;

struct Rule {
    std::array<double, kOrder> nodes{};
    std::array<double, kOrder> weights{};
};

// Gauss-Legendre nodes/weights on [-1, 1], by Newton iteration on P_n.
inline const Rule& gauss_legendre() {
    static const Rule rule = [] {
        Rule r;
        constexpr int n = kOrder;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0;
                double p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            r.nodes[static_cast<std::size_t>(i)] = x;
            r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

struct Tolerance {
    double rel = 1e-10;
    double abs = 1e-14;
    int max_panels = 4000;
};

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    double l1 = 0.0;  // estimate of the integral of |f|
    int panels = 0;
    long evaluations = 0;
    bool converged = false;
};

// Adaptive panel quadrature: every panel is integrated with one Gauss-Legendre
// rule over the whole panel and over its two halves; the halves are kept and
// the difference is the panel's error estimate. The panel with the largest
// error is split until the total error meets the tolerance.
template <class T, class F>
class AdaptiveGaussLegendre {
public:
    struct Panel {
        double a = 0.0;
        double b = 0.0;
        T left{};
        T right{};
        double error = 0.0;
        double l1 = 0.0;
        bool live = true;
    };

    explicit AdaptiveGaussLegendre(F f, int max_panels = 4000)
        : f_(std::move(f)), max_panels_(max_panels) {}

    // Appends panels covering [a, b], none wider than max_width.
    void cover(double a, double b, double max_width) {
        if (!(b > a)) return;
        const auto count = static_cast<int>(std::max(1.0, std::ceil((b - a) / max_width)));
        const double w = (b - a) / count;
        for (int i = 0; i < count; ++i) {
            const double lo = a + i * w;
            const double hi = (i + 1 == count) ? b : lo + w;
            add_panel(lo, hi, rule_sum(lo, hi));
        }
    }

    // Splits panels until error <= max(abs, rel * |value|). Returns false when
    // the panel budget runs out first.
    bool refine(double rel, double abs) {
        for (;;) {
            const double target = std::max(abs, rel * std::abs(sum_value_));
            if (sum_error_ <= target) return true;
            if (live_count_ >= max_panels_ || heap_.empty()) return false;
            const std::size_t idx = heap_.top().second;
            heap_.pop();
            Panel& p = panels_[idx];
            if (!p.live) continue;
            p.live = false;
            --live_count_;
            sum_value_ -= p.left + p.right;
            sum_error_ -= p.error;
            sum_l1_ -= p.l1;
            const double mid = 0.5 * (p.a + p.b);
            const double a = p.a;
            const double b = p.b;
            const T left = p.left;
            const T right = p.right;
            add_panel(a, mid, left);
            add_panel(mid, b, right);
            if (live_count_ % 256 == 0) resum();
        }
    }

    Result<T> result(bool converged) const {
        Result<T> r;
        std::vector<const Panel*> live;
        live.reserve(static_cast<std::size_t>(live_count_));
        for (const auto& p : panels_) {
            if (p.live) live.push_back(&p);
        }
        std::sort(live.begin(), live.end(), [](const Panel* x, const Panel* y) { return x->a < y->a; });
        for (const Panel* p : live) {
            r.value += p->left + p->right;
            r.error += p->error;
            r.l1 += p->l1;
        }
        r.panels = live_count_;
        r.evaluations = evaluations_;
        r.converged = converged;
        return r;
    }

    // The live panel with the largest right endpoint.
    const Panel* last_panel() const {
        const Panel* best = nullptr;
        for (const auto& p : panels_) {
            if (p.live && (best == nullptr || p.b > best->b)) best = &p;
        }
        return best;
    }

    double error() const { return sum_error_; }
    T value() const { return sum_value_; }

private:
    struct RuleOut {
        T value{};
        double l1 = 0.0;
    };

    RuleOut rule_sum(double a, double b) {
        const Rule& rule = gauss_legendre();
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        RuleOut out;
        for (int i = 0; i < kOrder; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const T v = f_(mid + half * rule.nodes[k]);
            out.value += rule.weights[k] * v;
            out.l1 += rule.weights[k] * std::abs(v);
        }
        evaluations_ += kOrder;
        out.value *= half;
        out.l1 *= half;
        return out;
    }

    void add_panel(double a, double b, const RuleOut& whole) { add_panel(a, b, whole.value); }

    void add_panel(double a, double b, const T& whole) {
        const double mid = 0.5 * (a + b);
        const RuleOut l = rule_sum(a, mid);
        const RuleOut r = rule_sum(mid, b);
        Panel p;
        p.a = a;
        p.b = b;
        p.left = l.value;
        p.right = r.value;
        p.error = std::abs((l.value + r.value) - whole);
        p.l1 = l.l1 + r.l1;
        if (!std::isfinite(p.error)) p.error = std::numeric_limits<double>::infinity();
        panels_.push_back(p);
        heap_.emplace(p.error, panels_.size() - 1);
        ++live_count_;
        sum_value_ += p.left + p.right;
        sum_error_ += p.error;
        sum_l1_ += p.l1;
    }

    void resum() {
        sum_value_ = T{};
        sum_error_ = 0.0;
        sum_l1_ = 0.0;
        for (const auto& p : panels_) {
            if (!p.live) continue;
            sum_value_ += p.left + p.right;
            sum_error_ += p.error;
            sum_l1_ += p.l1;
        }
    }

    F f_;
    int max_panels_;
    std::vector<Panel> panels_;
    std::priority_queue<std::pair<double, std::size_t>> heap_;
    int live_count_ = 0;
    long evaluations_ = 0;
    T sum_value_{};
    double sum_error_ = 0.0;
    double sum_l1_ = 0.0;
};

// Integrates f over the panels delimited by consecutive breakpoints.
template <class T = double, class F>
Result<T> integrate(F&& f, std::span<const double> breaks, const Tolerance& tol = {}) {
    AdaptiveGaussLegendre<T, std::decay_t<F>> engine(std::forward<F>(f), tol.max_panels);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        engine.cover(breaks[i], breaks[i + 1], std::numeric_limits<double>::infinity());
    }
    const bool ok = engine.refine(tol.rel, tol.abs);
    return engine.result(ok);
}

template <class T = double, class F>
Result<T> integrate(F&& f, double a, double b, const Tolerance& tol = {}) {
    const std::array<double, 2> breaks{a, b};
    return integrate<T>(std::forward<F>(f), std::span<const double>(breaks), tol);
}

}  // namespace rissa::quad
