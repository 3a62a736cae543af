#include "defstat/windows.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

namespace defstat {

DeferredWindow::DeferredWindow(WindowKind kind, std::string label, IndexFn alpha,
                               IndexFn theta, std::optional<Index> max_n)
    : kind_(kind), label_(std::move(label)), alpha_(std::move(alpha)),
      theta_(std::move(theta)), max_n_(max_n) {}

DeferredWindow DeferredWindow::classical() {
    return DeferredWindow(WindowKind::Classical, "classical",
                          [](Index) { return Index{0}; },
                          [](Index n) { return n; }, std::nullopt);
}

DeferredWindow DeferredWindow::lambda_window(IndexFn lambda_fn, std::string label) {
    if (!lambda_fn) throw ConfigError("lambda window requires a callable");
    auto alpha = [lambda_fn](Index n) { return n - lambda_fn(n); };
    return DeferredWindow(WindowKind::Lambda, std::move(label), std::move(alpha),
                          [](Index n) { return n; }, std::nullopt);
}

DeferredWindow DeferredWindow::lacunary(std::vector<Index> k_terms) {
    if (k_terms.size() < 2) throw ConfigError("lacunary window needs at least two terms");
    for (std::size_t i = 1; i < k_terms.size(); ++i)
        if (k_terms[i] <= k_terms[i - 1])
            throw ConfigError("lacunary terms must be strictly increasing");
    if (k_terms[0] < 0) throw ConfigError("lacunary terms must be nonnegative");
    const auto max_r = static_cast<Index>(k_terms.size()) - 1;
    auto terms = std::make_shared<std::vector<Index>>(std::move(k_terms));
    auto at = [terms, max_r](Index r, int off) {
        if (r < 1 || r > max_r)
            throw IndexOutOfRange("lacunary window index " + std::to_string(r) +
                                  " outside 1.." + std::to_string(max_r));
        return (*terms)[static_cast<std::size_t>(r + off)];
    };
    return DeferredWindow(WindowKind::Lacunary, "lacunary",
                          [at](Index r) { return at(r, -1); },
                          [at](Index r) { return at(r, 0); }, max_r);
}

DeferredWindow DeferredWindow::lacunary_geometric(Index k0, Index ratio, int terms) {
    if (k0 < 1 || ratio < 2 || terms < 2)
        throw ConfigError("geometric lacunary needs k0 >= 1, ratio >= 2, terms >= 2");
    std::vector<Index> ks;
    ks.reserve(static_cast<std::size_t>(terms));
    Index v = k0;
    for (int i = 0; i < terms; ++i) {
        ks.push_back(v);
        if (v > (std::int64_t{1} << 62) / ratio)
            throw ConfigError("geometric lacunary overflows int64");
        v *= ratio;
    }
    return lacunary(std::move(ks));
}

DeferredWindow DeferredWindow::affine(Index a, Index b, Index c, Index d) {
    std::string label = "affine(" + std::to_string(a) + "n+" + std::to_string(b) + ", " +
                        std::to_string(c) + "n+" + std::to_string(d) + ")";
    return DeferredWindow(WindowKind::Affine, std::move(label),
                          [a, b](Index n) { return a * n + b; },
                          [c, d](Index n) { return c * n + d; }, std::nullopt);
}

DeferredWindow DeferredWindow::explicit_fn(IndexFn alpha, IndexFn theta, std::string label) {
    if (!alpha || !theta) throw ConfigError("explicit window requires two callables");
    return DeferredWindow(WindowKind::Explicit, std::move(label), std::move(alpha),
                          std::move(theta), std::nullopt);
}

DeferredWindow DeferredWindow::explicit_seq(std::vector<Index> alpha, std::vector<Index> theta) {
    if (alpha.empty() || alpha.size() != theta.size())
        throw ConfigError("explicit window tables must be nonempty and equal length");
    const auto max_n = static_cast<Index>(alpha.size());
    auto a = std::make_shared<std::vector<Index>>(std::move(alpha));
    auto t = std::make_shared<std::vector<Index>>(std::move(theta));
    auto lookup = [max_n](const std::vector<Index>& v, Index n) {
        if (n < 1 || n > max_n)
            throw IndexOutOfRange("explicit window index " + std::to_string(n) +
                                  " outside 1.." + std::to_string(max_n));
        return v[static_cast<std::size_t>(n - 1)];
    };
    return DeferredWindow(WindowKind::Explicit, "explicit-table",
                          [a, lookup](Index n) { return lookup(*a, n); },
                          [t, lookup](Index n) { return lookup(*t, n); }, max_n);
}

Index DeferredWindow::alpha(Index n) const { return alpha_(n); }
Index DeferredWindow::theta(Index n) const { return theta_(n); }

std::pair<Index, Index> DeferredWindow::window_at(Index n) const {
    if (n < 1) throw IndexOutOfRange("window index must be >= 1");
    const Index a = alpha_(n), t = theta_(n);
    if (a < 0 || a >= t)
        throw WindowOrderError("window at n=" + std::to_string(n) + " has alpha=" +
                               std::to_string(a) + ", theta=" + std::to_string(t));
    return {a, t};
}

Index DeferredWindow::length(Index n) const {
    auto [a, t] = window_at(n);
    return t - a;
}

WindowValidation validate_prefix(const DeferredWindow& w, Index N) {
    WindowValidation out;
    if (N < 1) throw ConfigError("validation horizon must be >= 1");
    if (w.max_n()) N = std::min(N, *w.max_n());
    out.checked_upto = N;

    Index prev_theta = 0;
    Index theta1 = 0;
    for (Index n = 1; n <= N; ++n) {
        const Index a = w.alpha(n), t = w.theta(n);
        if (a < 0 || a >= t) {
            out.valid = false;
            out.first_violation_n = n;
            out.message = "alpha/theta ordering fails at n=" + std::to_string(n) +
                          " (alpha=" + std::to_string(a) + ", theta=" + std::to_string(t) + ")";
            return out;
        }
        if (n == 1) theta1 = t;
        if (n > 1 && t < prev_theta) {
            out.valid = false;
            out.theta_nondecreasing = false;
            out.first_violation_n = n;
            out.message = "theta decreases at n=" + std::to_string(n);
            return out;
        }
        prev_theta = t;
    }
    if (N > 1 && prev_theta <= theta1) {
        out.valid = false;
        out.grows = false;
        out.first_violation_n = N;
        out.message = "theta(N) does not exceed theta(1); window does not grow";
    }
    return out;
}

RatioReport ratio_sequence(const DeferredWindow& w, Index N) {
    RatioReport out;
    if (w.max_n()) N = std::min(N, *w.max_n());
    out.values.reserve(static_cast<std::size_t>(N));
    for (Index n = 1; n <= N; ++n) {
        auto [a, t] = w.window_at(n);
        const double r = static_cast<double>(a) / static_cast<double>(t - a);
        out.values.push_back(r);
        out.max_value = std::max(out.max_value, r);
    }
    // Trend over the last decile: nondecreasing there with a strict net rise.
    const auto sz = static_cast<std::size_t>(N);
    const std::size_t start = sz - std::max<std::size_t>(sz / 10, std::min<std::size_t>(sz, 2));
    bool nondec = true;
    for (std::size_t i = start + 1; i < sz; ++i)
        if (out.values[i] < out.values[i - 1]) nondec = false;
    out.increasing_trend = nondec && sz >= 2 && out.values[sz - 1] > out.values[start];
    out.bounded = !out.increasing_trend;
    return out;
}

WindowPair WindowPair::validated(DeferredWindow outer, DeferredWindow inner, Index N) {
    Index upto = N;
    if (outer.max_n()) upto = std::min(upto, *outer.max_n());
    if (inner.max_n()) upto = std::min(upto, *inner.max_n());
    for (Index n = 1; n <= upto; ++n) {
        auto [a, t] = outer.window_at(n);
        auto [r, s] = inner.window_at(n);
        if (!(a <= r && r < s && s <= t))
            throw WindowNestingError("nesting fails at n=" + std::to_string(n) + ": outer (" +
                                     std::to_string(a) + ", " + std::to_string(t) +
                                     "], inner (" + std::to_string(r) + ", " +
                                     std::to_string(s) + "]");
    }
    return WindowPair(std::move(outer), std::move(inner));
}

WindowPair WindowPair::trimmed(const DeferredWindow& outer, Index trim, Index N) {
    if (trim < 0) throw ConfigError("trim must be >= 0");
    DeferredWindow o = outer;
    auto rho = [o, trim](Index n) {
        auto [a, t] = o.window_at(n);
        const Index cut = std::min(trim, (t - a - 1) / 2);
        return a + cut;
    };
    auto sig = [o, trim](Index n) {
        auto [a, t] = o.window_at(n);
        const Index cut = std::min(trim, (t - a - 1) / 2);
        return t - cut;
    };
    DeferredWindow inner = DeferredWindow::explicit_fn(
        std::move(rho), std::move(sig), outer.label() + "-trim" + std::to_string(trim));
    return validated(outer, std::move(inner), N);
}

std::pair<Index, Index> WindowPair::tail_sizes(Index n) const {
    auto [a, t] = outer_.window_at(n);
    auto [r, s] = inner_.window_at(n);
    return {r - a, t - s};
}

} // namespace defstat
