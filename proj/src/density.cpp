#include "defstat/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace defstat {

namespace predicates {

IndexPredicate squares() {
    return {"squares", [](Index k) { return is_perfect_square(k); }};
}

IndexPredicate evens() {
    return {"evens", [](Index k) { return k % 2 == 0; }};
}

IndexPredicate all() {
    return {"all", [](Index) { return true; }};
}

IndexPredicate none() {
    return {"none", [](Index) { return false; }};
}

IndexPredicate complement(IndexPredicate p) {
    auto inner = std::move(p.test);
    return {"not-" + p.name, [inner](Index k) { return !inner(k); }};
}

IndexPredicate custom(std::string name, std::function<bool(Index)> test) {
    if (!test) throw ConfigError("custom predicate requires a callable");
    return {std::move(name), std::move(test)};
}

} // namespace predicates

PrefixCounter::PrefixCounter(IndexPredicate p) : pred_(std::move(p)) {
    if (!pred_.test) throw ConfigError("prefix counter requires a predicate");
    prefix_.push_back(0);
}

void PrefixCounter::extend(Index m) {
    const auto have = static_cast<Index>(prefix_.size()) - 1;
    if (m <= have) return;
    prefix_.reserve(static_cast<std::size_t>(m) + 1);
    for (Index k = have + 1; k <= m; ++k)
        prefix_.push_back(prefix_.back() + (pred_.test(k) ? 1 : 0));
}

Index PrefixCounter::count_prefix(Index m) {
    if (m < 0) throw IndexOutOfRange("prefix count of negative index");
    extend(m);
    return prefix_[static_cast<std::size_t>(m)];
}

Index PrefixCounter::count_window(Index a, Index b) {
    if (a > b) throw WindowOrderError("count_window: a > b");
    return count_prefix(b) - count_prefix(a);
}

Index deferred_count(const IndexPredicate& p, const DeferredWindow& w, Index n) {
    auto [a, t] = w.window_at(n);
    Index c = 0;
    for (Index k = a + 1; k <= t; ++k)
        if (p.test(k)) ++c;
    return c;
}

double natural_density_ratio(const IndexPredicate& p, Index n) {
    if (n < 1) throw IndexOutOfRange("natural density needs n >= 1");
    Index c = 0;
    for (Index k = 1; k <= n; ++k)
        if (p.test(k)) ++c;
    return static_cast<double>(c) / static_cast<double>(n);
}

std::string to_string(DensityVerdict v) {
    switch (v) {
    case DensityVerdict::TendsToZero: return "tends-to-zero";
    case DensityVerdict::TendsToOne: return "tends-to-one";
    case DensityVerdict::TendsTo: return "tends-to";
    case DensityVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

int ToleranceSchedule::final_count(std::size_t grid_size) const {
    const auto q = static_cast<int>(std::llround(final_fraction * static_cast<double>(grid_size)));
    return std::clamp(q, 1, static_cast<int>(grid_size));
}

namespace {

double segment_mean(std::span<const double> xs, std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += xs[i];
    return s / static_cast<double>(e - b);
}

// Trend over the final segment: compare means of its two halves.
bool trend_nonincreasing(std::span<const double> xs, std::size_t begin) {
    const std::size_t count = xs.size() - begin;
    if (count < 2) return true;
    const std::size_t mid = begin + count / 2;
    return segment_mean(xs, mid, xs.size()) <= segment_mean(xs, begin, mid) + 1e-12;
}

bool trend_nondecreasing(std::span<const double> xs, std::size_t begin) {
    const std::size_t count = xs.size() - begin;
    if (count < 2) return true;
    const std::size_t mid = begin + count / 2;
    return segment_mean(xs, mid, xs.size()) >= segment_mean(xs, begin, mid) - 1e-12;
}

} // namespace

DensityVerdict classify_trace(std::span<const double> ratios, std::span<const Index> lengths,
                              const ToleranceSchedule& schedule, std::size_t* final_begin,
                              double* limit_value) {
    if (ratios.empty() || ratios.size() != lengths.size())
        throw ConfigError("classify_trace: empty or mismatched trace");
    const auto fc = static_cast<std::size_t>(schedule.final_count(ratios.size()));
    const std::size_t begin = ratios.size() - fc;
    if (final_begin) *final_begin = begin;
    if (limit_value) *limit_value = 0.0;

    bool under = true, over = true;
    double lo = ratios[begin], hi = ratios[begin];
    for (std::size_t i = begin; i < ratios.size(); ++i) {
        const double thr =
            schedule.threshold_coeff / std::sqrt(static_cast<double>(lengths[i]));
        under = under && ratios[i] <= thr;
        over = over && (1.0 - ratios[i]) <= thr;
        lo = std::min(lo, ratios[i]);
        hi = std::max(hi, ratios[i]);
    }
    if (under && trend_nonincreasing(ratios, begin)) return DensityVerdict::TendsToZero;
    if (over && trend_nondecreasing(ratios, begin)) return DensityVerdict::TendsToOne;
    if (hi - lo <= schedule.stability_tol) {
        if (limit_value) *limit_value = segment_mean(ratios, begin, ratios.size());
        return DensityVerdict::TendsTo;
    }
    return DensityVerdict::Inconclusive;
}

bool persistently_at_least(std::span<const double> ratios, const ToleranceSchedule& schedule,
                           double bound) {
    if (ratios.empty()) return false;
    const auto fc = static_cast<std::size_t>(schedule.final_count(ratios.size()));
    for (std::size_t i = ratios.size() - fc; i < ratios.size(); ++i)
        if (ratios[i] < bound) return false;
    return true;
}

bool persistently_at_most(std::span<const double> ratios, const ToleranceSchedule& schedule,
                          double bound) {
    if (ratios.empty()) return false;
    const auto fc = static_cast<std::size_t>(schedule.final_count(ratios.size()));
    for (std::size_t i = ratios.size() - fc; i < ratios.size(); ++i)
        if (ratios[i] > bound) return false;
    return true;
}

DensityTrace deferred_density(const IndexPredicate& p, const DeferredWindow& w,
                              std::span<const Index> n_grid, const ToleranceSchedule& schedule) {
    if (n_grid.empty()) throw ConfigError("deferred_density: empty grid");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw ConfigError("deferred_density: grid must be strictly increasing");

    DensityTrace tr;
    PrefixCounter counter(p);
    std::vector<Index> lengths;
    lengths.reserve(n_grid.size());
    for (Index n : n_grid) {
        auto [a, t] = w.window_at(n);
        const Index c = counter.count_window(a, t);
        tr.n_grid.push_back(n);
        tr.alphas.push_back(a);
        tr.thetas.push_back(t);
        tr.counts.push_back(c);
        tr.ratios.push_back(static_cast<double>(c) / static_cast<double>(t - a));
        lengths.push_back(t - a);
    }
    tr.verdict = classify_trace(tr.ratios, lengths, schedule, &tr.final_begin, &tr.verdict_value);
    return tr;
}

double deferred_cesaro_mean(const SequenceSource& s, const DeferredWindow& w, Index n) {
    auto [a, t] = w.window_at(n);
    double sum = 0.0;
    for (Index k = a + 1; k <= t; ++k) sum += sequences::eval1(s, k);
    return sum / static_cast<double>(t - a);
}

double strong_deferred_deviation(const SequenceSource& s, double xi, const DeferredWindow& w,
                                 Index n) {
    auto [a, t] = w.window_at(n);
    double sum = 0.0;
    for (Index k = a + 1; k <= t; ++k) sum += std::fabs(sequences::eval1(s, k) - xi);
    return sum / static_cast<double>(t - a);
}

std::vector<Index> default_grid(Index horizon) {
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    std::vector<Index> grid;
    if (horizon <= 64) {
        for (Index n = 1; n <= horizon; ++n) grid.push_back(n);
        return grid;
    }
    for (Index v = 16; v < horizon; v *= 2) grid.push_back(v);
    if (grid.empty() || grid.back() != horizon) grid.push_back(horizon);
    return grid;
}

std::vector<Index> default_grid_for(const DeferredWindow& w, Index horizon) {
    Index h = horizon;
    if (w.max_n()) h = std::min(h, *w.max_n());
    return default_grid(h);
}

} // namespace defstat
