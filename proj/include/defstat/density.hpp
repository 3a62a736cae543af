#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "defstat/sequences.hpp"
#include "defstat/windows.hpp"

namespace defstat {

// A named membership test over indices k >= 1.
struct IndexPredicate {
    std::string name;
    std::function<bool(Index)> test;

    bool operator()(Index k) const { return test(k); }
};

namespace predicates {
IndexPredicate squares();
IndexPredicate evens();
IndexPredicate all();
IndexPredicate none();
IndexPredicate complement(IndexPredicate p);
IndexPredicate custom(std::string name, std::function<bool(Index)> test);
} // namespace predicates

// Incremental window counting via cached prefix sums.  count_window(a, b) is
// |{k in (a, b] : p(k)}|; the cache extends itself monotonically so repeated
// queries over a growing grid evaluate each index exactly once.
class PrefixCounter {
public:
    explicit PrefixCounter(IndexPredicate p);

    Index count_prefix(Index m);          // |{k <= m : p(k)}|
    Index count_window(Index a, Index b); // over (a, b], requires a <= b

    const IndexPredicate& predicate() const { return pred_; }

private:
    void extend(Index m);

    IndexPredicate pred_;
    std::vector<Index> prefix_; // prefix_[m] = count_prefix(m); prefix_[0] = 0
};

// Single-pass direct count over (alpha(n), theta(n)]; the oracle the cached
// path is tested against.
Index deferred_count(const IndexPredicate& p, const DeferredWindow& w, Index n);

// |{k <= n : p(k)}| / n, the classical-density ratio at horizon n.
double natural_density_ratio(const IndexPredicate& p, Index n);

enum class DensityVerdict { TendsToZero, TendsToOne, TendsTo, Inconclusive };

std::string to_string(DensityVerdict v);

// How finite evidence is turned into a verdict.  The final segment is the
// last final_fraction of the evaluation grid; on it, ratios must sit under
// the shrinking threshold threshold_coeff / sqrt(window length) (or above
// 1 minus that, for TendsToOne) with the right trend.  Ratios that stay
// within stability_tol of each other yield TendsTo at their mean.  A ratio
// that never leaves [refutation_floor, 1 - refutation_floor] on the final
// segment counts as persistent mass for refutation purposes.
struct ToleranceSchedule {
    double final_fraction = 0.25;
    double threshold_coeff = 10.0;
    double stability_tol = 1e-3;
    double refutation_floor = 0.01;

    int final_count(std::size_t grid_size) const;
};

// Windowed counts and ratios over an evaluation grid, plus the classified
// trend.  Also reused for mean-valued traces (ratios hold the means and
// counts stay empty).
struct DensityTrace {
    std::vector<Index> n_grid;
    std::vector<Index> alphas;
    std::vector<Index> thetas;
    std::vector<Index> counts;
    std::vector<double> ratios;
    DensityVerdict verdict = DensityVerdict::Inconclusive;
    double verdict_value = 0.0; // limit value when verdict == TendsTo
    std::size_t final_begin = 0; // first grid slot of the final segment

    bool mean_trace = false;
};

// Evaluates |{k in window(n)} ∩ p| / window length over the grid and
// classifies the trend.  The grid must be strictly increasing.
DensityTrace deferred_density(const IndexPredicate& p, const DeferredWindow& w,
                              std::span<const Index> n_grid,
                              const ToleranceSchedule& schedule = {});

// Classification used by deferred_density, exposed for reuse on mean traces
// and in tests.  lengths[i] is the window length backing ratios[i].
DensityVerdict classify_trace(std::span<const double> ratios, std::span<const Index> lengths,
                              const ToleranceSchedule& schedule, std::size_t* final_begin,
                              double* limit_value);

// Refutation helpers: true when every final-segment ratio stays at or above
// (resp. at or below) the bound -- persistent mass that rules out a limit at
// the corresponding edge.
bool persistently_at_least(std::span<const double> ratios, const ToleranceSchedule& schedule,
                           double bound);
bool persistently_at_most(std::span<const double> ratios, const ToleranceSchedule& schedule,
                          double bound);

// Mean of s over (alpha(n), theta(n)] (scalar sequences).
double deferred_cesaro_mean(const SequenceSource& s, const DeferredWindow& w, Index n);

// Mean of |s_k - xi| over the window (scalar sequences).
double strong_deferred_deviation(const SequenceSource& s, double xi, const DeferredWindow& w,
                                 Index n);

// Geometric evaluation grid 16, 32, ..., capped at the horizon, with the
// horizon itself as the last point.  Small horizons (< 64) fall back to every
// n.  Grids never exceed the bound of a table-backed window.
std::vector<Index> default_grid(Index horizon);
std::vector<Index> default_grid_for(const DeferredWindow& w, Index horizon);

// Serialization of traces lives in serialize.hpp.

} // namespace defstat
