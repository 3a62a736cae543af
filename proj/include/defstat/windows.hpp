#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "defstat/errors.hpp"

namespace defstat {

using Index = std::int64_t;

enum class WindowKind { Classical, Lambda, Lacunary, Explicit, Affine };

// A deferred window assigns to each n >= 1 the half-open index range
// (alpha(n), theta(n)] with 0 <= alpha(n) < theta(n).  Evaluation is lazy;
// validity over a prefix is established separately by validate_prefix.
class DeferredWindow {
public:
    using IndexFn = std::function<Index(Index)>;

    // alpha(n) = 0, theta(n) = n: plain initial segments.
    static DeferredWindow classical();

    // alpha(n) = n - lambda(n), theta(n) = n for a nondecreasing lambda(n) <= n.
    static DeferredWindow lambda_window(IndexFn lambda_fn, std::string label = "lambda");

    // Windows (k[r-1], k[r]] indexed by r = 1..k.size()-1; k[0] is the base
    // term.  The ratio k[r]/k[r-1] should stay bounded away from 1.
    static DeferredWindow lacunary(std::vector<Index> k_terms);
    static DeferredWindow lacunary_geometric(Index k0, Index ratio, int terms);

    // alpha(n) = a*n + b, theta(n) = c*n + d.
    static DeferredWindow affine(Index a, Index b, Index c, Index d);

    // Arbitrary endpoint callables (1-based n).
    static DeferredWindow explicit_fn(IndexFn alpha, IndexFn theta,
                                      std::string label = "explicit");

    // Endpoint tables; element i corresponds to n = i+1.
    static DeferredWindow explicit_seq(std::vector<Index> alpha, std::vector<Index> theta);

    Index alpha(Index n) const;
    Index theta(Index n) const;

    // (alpha(n), theta(n)] after checking the ordering; throws WindowOrderError.
    std::pair<Index, Index> window_at(Index n) const;

    Index length(Index n) const; // theta(n) - alpha(n), validated

    WindowKind kind() const noexcept { return kind_; }
    const std::string& label() const noexcept { return label_; }

    // Largest valid n for table-backed windows; empty when unbounded.
    std::optional<Index> max_n() const noexcept { return max_n_; }

private:
    DeferredWindow(WindowKind kind, std::string label, IndexFn alpha, IndexFn theta,
                   std::optional<Index> max_n);

    WindowKind kind_;
    std::string label_;
    IndexFn alpha_;
    IndexFn theta_;
    std::optional<Index> max_n_;
};

// Outcome of checking a window over n = 1..checked_upto: the ordering
// 0 <= alpha(n) < theta(n) everywhere, theta nondecreasing, and actual growth
// (theta at the end strictly above theta(1)) as a finite-horizon stand-in for
// unboundedness.
struct WindowValidation {
    bool valid = true;
    Index checked_upto = 0;
    Index first_violation_n = 0;
    std::string message;
    bool theta_nondecreasing = true;
    bool grows = true;
};

WindowValidation validate_prefix(const DeferredWindow& w, Index N);

// alpha(n) / (theta(n) - alpha(n)) for n = 1..N, with the prefix maximum and a
// flag when the values trend upward across the last decile (a sign the ratio
// is unbounded, which breaks comparisons against classical density).
struct RatioReport {
    std::vector<double> values;
    double max_value = 0.0;
    bool increasing_trend = false;
    bool bounded = true;
};

RatioReport ratio_sequence(const DeferredWindow& w, Index N);

// Two windows with (rho(n), sigma(n)] nested inside (alpha(n), theta(n)]:
// alpha(n) <= rho(n) < sigma(n) <= theta(n) for all checked n.
class WindowPair {
public:
    // Validates nesting on n = 1..N; throws WindowNestingError with the first
    // offending n on failure.
    static WindowPair validated(DeferredWindow outer, DeferredWindow inner, Index N);

    // Inner window obtained by trimming at most `trim` indices off each end of
    // the outer window (less when the window is too short to stay nonempty).
    static WindowPair trimmed(const DeferredWindow& outer, Index trim, Index N);

    const DeferredWindow& outer() const noexcept { return outer_; }
    const DeferredWindow& inner() const noexcept { return inner_; }

    // Sizes of the left tail (alpha, rho] and right tail (sigma, theta] at n.
    std::pair<Index, Index> tail_sizes(Index n) const;

private:
    WindowPair(DeferredWindow outer, DeferredWindow inner)
        : outer_(std::move(outer)), inner_(std::move(inner)) {}

    DeferredWindow outer_;
    DeferredWindow inner_;
};

} // namespace defstat
