#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "defstat/density.hpp"
#include "defstat/pns.hpp"
#include "defstat/sequences.hpp"
#include "defstat/windows.hpp"

namespace defstat {

// One (eps, sigma) point of the quantifier grid.
struct ExceedanceParams {
    double eps;
    double sigma;

    ExceedanceParams(double e, double s) : eps(e), sigma(s) {
        if (!(e > 0.0)) throw ConfigError("eps must be > 0");
        if (!(s > 0.0 && s < 1.0)) throw ConfigError("sigma must lie in (0,1)");
    }
};

// Finite stand-in for "for every eps > 0 and sigma in (0,1)".
struct ParamGrid {
    std::vector<double> eps_values;
    std::vector<double> sigma_values;

    static ParamGrid defaults(); // eps {0.1, 0.5, 1, 2}, sigma {0.1, 0.25, 0.5, 0.75, 0.9}
    static ParamGrid make(std::vector<double> eps, std::vector<double> sigma); // validates
    static ParamGrid single(double eps, double sigma);

    std::size_t size() const { return eps_values.size() * sigma_values.size(); }
    std::vector<ExceedanceParams> points() const; // row-major, eps outer
};

enum class TestMode { Phi, StrongDeferred, DeferredStat, DeferredStatCauchy };
enum class Outcome { Certified, Refuted, Inconclusive };

std::string to_string(TestMode m);
std::string to_string(Outcome o);

// Evidence for one grid point: its density (or mean) trace plus the local
// conclusion.  anchor is the n0 witness for the Phi mode and the pivot index
// for the Cauchy mode.
struct PointResult {
    double eps = 0.0;
    double sigma = 0.0;
    bool certified = false;
    bool refuted = false;
    DensityTrace trace;
    std::optional<Index> anchor;
};

// Finite-horizon certification of one convergence mode.  Certified requires
// every grid point to pass its criterion; Refuted requires at least one point
// with persistent contrary mass; everything else is Inconclusive.
struct Verdict {
    TestMode mode = TestMode::DeferredStat;
    Outcome outcome = Outcome::Inconclusive;
    std::optional<Vec> limit;   // candidate xi the test was run against
    std::optional<Index> anchor; // largest per-point anchor when certified
    std::vector<PointResult> points;
    std::string subject;

    bool certified() const { return outcome == Outcome::Certified; }
};

// {k : phi(w_k - xi; eps) <= 1 - sigma}, the non-strict boundary included.
IndexPredicate exceedance_predicate(SequencePtr s, const ProbabilisticNorm& pn, Vec xi,
                                    ExceedanceParams p);

// Deferred-statistical convergence: every grid point's exceedance set must
// show a TendsToZero density trace.
Verdict test_dstat(SequencePtr s, const ProbabilisticNorm& pn, Vec xi,
                   const DeferredWindow& w, const ParamGrid& grid,
                   std::span<const Index> n_grid, const ToleranceSchedule& schedule = {});

// Strong deferred convergence: windowed means of phi(w_k - xi; eps) must
// exceed 1 - sigma on the final schedule segment.
Verdict test_strong_deferred(SequencePtr s, const ProbabilisticNorm& pn, Vec xi,
                             const DeferredWindow& w, const ParamGrid& grid,
                             std::span<const Index> n_grid,
                             const ToleranceSchedule& schedule = {});

// Plain phi-convergence at finite horizon: per grid point there must be an
// n0 <= (1 - tail_fraction) * horizon with phi(w_k - xi; eps) > 1 - sigma for
// all k in [n0, horizon].  A violation inside the final tail refutes.
Verdict test_phi(SequencePtr s, const ProbabilisticNorm& pn, Vec xi, const ParamGrid& grid,
                 Index horizon, double tail_fraction = 0.25);

// How test_dstat_cauchy picks its pivot index n0 inside the final window.
struct AnchorRule {
    enum class Kind { Auto, Fixed };
    Kind kind = Kind::Auto;
    Index fixed_n0 = 0;
    // With a certified limit available, Auto picks the first final-window
    // index outside its exceedance set (mirroring the pivot choice in the
    // convergent-implies-Cauchy argument); otherwise the median index.
    std::optional<Vec> certified_xi;

    static AnchorRule automatic(std::optional<Vec> xi = std::nullopt);
    static AnchorRule fixed(Index n0);
};

// Deferred-statistical Cauchy test: per grid point, anchors at n0 and runs
// the density trace of {k : phi(w_k - w_n0; eps) <= 1 - sigma}.
Verdict test_dstat_cauchy(SequencePtr s, const ProbabilisticNorm& pn, const DeferredWindow& w,
                          const ParamGrid& grid, std::span<const Index> n_grid,
                          const ToleranceSchedule& schedule = {}, AnchorRule anchor = {});

struct LimitEstimate {
    std::optional<Vec> best;
    std::vector<double> scores; // per candidate: worst final exceedance ratio
};

// Runs test_dstat per candidate; unique certified candidate wins.  Two
// certified candidates raise AmbiguousLimit (the schedule cannot separate
// them at this grid).
LimitEstimate estimate_limit(SequencePtr s, const ProbabilisticNorm& pn,
                             const DeferredWindow& w, std::span<const Vec> candidates,
                             const ParamGrid& grid, std::span<const Index> n_grid,
                             const ToleranceSchedule& schedule = {});

// Number of worker threads used for grid points; results are merged in grid
// order so the outcome is independent of the degree of parallelism.  0 means
// one per hardware thread.
void set_parallel_jobs(int jobs);
int parallel_jobs();

} // namespace defstat
