#include "defstat/convergence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>
#include <thread>
#include <utility>

namespace defstat {

ParamGrid ParamGrid::defaults() {
    return make({0.1, 0.5, 1.0, 2.0}, {0.1, 0.25, 0.5, 0.75, 0.9});
}

ParamGrid ParamGrid::make(std::vector<double> eps, std::vector<double> sigma) {
    if (eps.empty() || sigma.empty()) throw ConfigError("param grid must be nonempty");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0)) throw ConfigError("grid eps values must be > 0");
        if (i && eps[i] <= eps[i - 1]) throw ConfigError("grid eps values must be sorted");
    }
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (!(sigma[i] > 0.0 && sigma[i] < 1.0))
            throw ConfigError("grid sigma values must lie in (0,1)");
        if (i && sigma[i] <= sigma[i - 1]) throw ConfigError("grid sigma values must be sorted");
    }
    ParamGrid g;
    g.eps_values = std::move(eps);
    g.sigma_values = std::move(sigma);
    return g;
}

ParamGrid ParamGrid::single(double eps, double sigma) { return make({eps}, {sigma}); }

std::vector<ExceedanceParams> ParamGrid::points() const {
    std::vector<ExceedanceParams> out;
    out.reserve(size());
    for (double e : eps_values)
        for (double s : sigma_values) out.emplace_back(e, s);
    return out;
}

std::string to_string(TestMode m) {
    switch (m) {
    case TestMode::Phi: return "phi";
    case TestMode::StrongDeferred: return "strong";
    case TestMode::DeferredStat: return "dstat";
    case TestMode::DeferredStatCauchy: return "dstat-cauchy";
    }
    return "?";
}

std::string to_string(Outcome o) {
    switch (o) {
    case Outcome::Certified: return "certified";
    case Outcome::Refuted: return "refuted";
    case Outcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

std::atomic<int> g_jobs{1};

// Evaluates fn(0..count-1) into a vector, optionally across threads; slot i
// always holds fn(i), so the merged result is independent of the job count.
template <typename Fn>
auto indexed_map(std::size_t count, Fn&& fn) {
    using R = decltype(fn(std::size_t{0}));
    std::vector<R> results(count);
    const int jobs = std::min<int>(g_jobs.load(), static_cast<int>(count));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) {
        workers.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                results[i] = fn(i);
        }));
    }
    for (auto& w : workers) w.get();
    return results;
}

Outcome aggregate(const std::vector<PointResult>& points) {
    bool all_certified = true, any_refuted = false;
    for (const auto& p : points) {
        all_certified = all_certified && p.certified;
        any_refuted = any_refuted || p.refuted;
    }
    if (all_certified) return Outcome::Certified;
    if (any_refuted) return Outcome::Refuted;
    return Outcome::Inconclusive;
}

std::optional<Index> max_anchor(const std::vector<PointResult>& points) {
    std::optional<Index> out;
    for (const auto& p : points)
        if (p.anchor) out = out ? std::max(*out, *p.anchor) : *p.anchor;
    return out;
}

void require_dims(const SequencePtr& s, const ProbabilisticNorm& pn, const Vec& xi) {
    if (!s) throw ConfigError("null sequence");
    if (s->dim() != xi.size())
        throw DimensionError("sequence dimension " + std::to_string(s->dim()) +
                             " vs candidate dimension " + std::to_string(xi.size()));
    if (pn.fixed_dim() && *pn.fixed_dim() != xi.size())
        throw DimensionError("probabilistic norm pinned to dimension " +
                             std::to_string(*pn.fixed_dim()));
}

std::string param_tag(double eps, double sigma) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "(eps=%g, sigma=%g)", eps, sigma);
    return buf;
}

} // namespace

void set_parallel_jobs(int jobs) {
    if (jobs == 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        jobs = hc ? static_cast<int>(hc) : 1;
    }
    g_jobs.store(std::max(1, jobs));
}
int parallel_jobs() { return g_jobs.load(); }

IndexPredicate exceedance_predicate(SequencePtr s, const ProbabilisticNorm& pn, Vec xi,
                                    ExceedanceParams p) {
    require_dims(s, pn, xi);
    const double bound = 1.0 - p.sigma;
    const double eps = p.eps;
    auto test = [s, pn, xi = std::move(xi), eps, bound, buf = Vec{}](Index k) mutable {
        s->eval_to(k, buf);
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] -= xi[i];
        return pn.eval_raw(buf, eps) <= bound;
    };
    return {"exceed" + param_tag(p.eps, p.sigma), std::move(test)};
}

Verdict test_dstat(SequencePtr s, const ProbabilisticNorm& pn, Vec xi,
                   const DeferredWindow& w, const ParamGrid& grid,
                   std::span<const Index> n_grid, const ToleranceSchedule& schedule) {
    require_dims(s, pn, xi);
    const auto pts = grid.points();
    auto results = indexed_map(pts.size(), [&](std::size_t i) {
        const auto& p = pts[i];
        PointResult r;
        r.eps = p.eps;
        r.sigma = p.sigma;
        r.trace = deferred_density(exceedance_predicate(s, pn, xi, p), w, n_grid, schedule);
        r.certified = r.trace.verdict == DensityVerdict::TendsToZero;
        r.refuted = !r.certified &&
                    persistently_at_least(r.trace.ratios, schedule, schedule.refutation_floor);
        return r;
    });

    Verdict v;
    v.mode = TestMode::DeferredStat;
    v.limit = xi;
    v.points = std::move(results);
    v.outcome = aggregate(v.points);
    v.subject = s->describe() + " | " + pn.name() + " | " + w.label();
    return v;
}

Verdict test_strong_deferred(SequencePtr s, const ProbabilisticNorm& pn, Vec xi,
                             const DeferredWindow& w, const ParamGrid& grid,
                             std::span<const Index> n_grid, const ToleranceSchedule& schedule) {
    require_dims(s, pn, xi);
    const auto pts = grid.points();
    auto results = indexed_map(pts.size(), [&](std::size_t i) {
        const auto& p = pts[i];
        PointResult r;
        r.eps = p.eps;
        r.sigma = p.sigma;

        // Windowed means of phi(w_k - xi; eps), evaluated once per index via
        // a running prefix sum over the union of the (nested or not) windows.
        DensityTrace tr;
        tr.mean_trace = true;
        Vec buf;
        std::vector<double> phis; // phis[k-1] = phi(w_k - xi; eps), filled on demand
        auto phi_at = [&](Index k) {
            const auto idx = static_cast<std::size_t>(k - 1);
            if (idx >= phis.size()) {
                const std::size_t old = phis.size();
                phis.resize(idx + 1);
                for (std::size_t j = old; j <= idx; ++j) {
                    s->eval_to(static_cast<Index>(j + 1), buf);
                    for (std::size_t c = 0; c < buf.size(); ++c) buf[c] -= xi[c];
                    phis[j] = pn.eval_raw(buf, p.eps);
                }
            }
            return phis[idx];
        };

        std::vector<Index> lengths;
        for (Index n : n_grid) {
            auto [a, t] = w.window_at(n);
            phi_at(t); // extend the table
            double sum = 0.0;
            for (Index k = a + 1; k <= t; ++k) sum += phis[static_cast<std::size_t>(k - 1)];
            const double mean = sum / static_cast<double>(t - a);
            tr.n_grid.push_back(n);
            tr.alphas.push_back(a);
            tr.thetas.push_back(t);
            tr.ratios.push_back(mean);
            lengths.push_back(t - a);
        }
        tr.verdict = classify_trace(tr.ratios, lengths, schedule, &tr.final_begin,
                                    &tr.verdict_value);
        r.trace = std::move(tr);

        // Criterion: means strictly above 1 - sigma on the final segment.
        const double bound = 1.0 - p.sigma;
        bool above = true, below = true;
        for (std::size_t j = r.trace.final_begin; j < r.trace.ratios.size(); ++j) {
            above = above && r.trace.ratios[j] > bound;
            below = below && r.trace.ratios[j] <= bound;
        }
        r.certified = above;
        r.refuted = below;
        return r;
    });

    Verdict v;
    v.mode = TestMode::StrongDeferred;
    v.limit = xi;
    v.points = std::move(results);
    v.outcome = aggregate(v.points);
    v.subject = s->describe() + " | " + pn.name() + " | " + w.label();
    return v;
}

Verdict test_phi(SequencePtr s, const ProbabilisticNorm& pn, Vec xi, const ParamGrid& grid,
                 Index horizon, double tail_fraction) {
    require_dims(s, pn, xi);
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
        throw ConfigError("tail_fraction must lie in (0,1)");
    const auto cutoff = static_cast<Index>(
        std::floor((1.0 - tail_fraction) * static_cast<double>(horizon)));

    const auto pts = grid.points();
    auto results = indexed_map(pts.size(), [&](std::size_t i) {
        const auto& p = pts[i];
        PointResult r;
        r.eps = p.eps;
        r.sigma = p.sigma;

        // One upward pass: total violation count and the last violating index.
        const double bound = 1.0 - p.sigma;
        Vec buf;
        Index last_violation = 0;
        Index count = 0;
        for (Index k = 1; k <= horizon; ++k) {
            s->eval_to(k, buf);
            for (std::size_t c = 0; c < buf.size(); ++c) buf[c] -= xi[c];
            if (pn.eval_raw(buf, p.eps) <= bound) {
                last_violation = k;
                ++count;
            }
        }
        r.certified = last_violation <= cutoff;
        r.refuted = last_violation > cutoff;
        if (r.certified) r.anchor = last_violation + 1;

        DensityTrace tr;
        tr.n_grid = {horizon};
        tr.alphas = {0};
        tr.thetas = {horizon};
        tr.counts = {count};
        tr.ratios = {static_cast<double>(count) / static_cast<double>(horizon)};
        tr.verdict = r.certified ? DensityVerdict::TendsToZero : DensityVerdict::Inconclusive;
        r.trace = std::move(tr);
        return r;
    });

    Verdict v;
    v.mode = TestMode::Phi;
    v.limit = xi;
    v.points = std::move(results);
    v.outcome = aggregate(v.points);
    if (v.outcome == Outcome::Certified) v.anchor = max_anchor(v.points);
    v.subject = s->describe() + " | " + pn.name() + " | horizon " + std::to_string(horizon);
    return v;
}

AnchorRule AnchorRule::automatic(std::optional<Vec> xi) {
    AnchorRule r;
    r.kind = Kind::Auto;
    r.certified_xi = std::move(xi);
    return r;
}

AnchorRule AnchorRule::fixed(Index n0) {
    if (n0 < 1) throw ConfigError("fixed anchor must be >= 1");
    AnchorRule r;
    r.kind = Kind::Fixed;
    r.fixed_n0 = n0;
    return r;
}

Verdict test_dstat_cauchy(SequencePtr s, const ProbabilisticNorm& pn, const DeferredWindow& w,
                          const ParamGrid& grid, std::span<const Index> n_grid,
                          const ToleranceSchedule& schedule, AnchorRule anchor) {
    if (!s) throw ConfigError("null sequence");
    if (n_grid.empty()) throw ConfigError("empty n grid");
    if (anchor.certified_xi && anchor.certified_xi->size() != s->dim())
        throw DimensionError("anchor candidate dimension mismatch");

    const auto [fin_a, fin_t] = w.window_at(n_grid.back());
    const auto pts = grid.points();
    auto results = indexed_map(pts.size(), [&, fa = fin_a, ft = fin_t](std::size_t i) {
        const auto& p = pts[i];
        PointResult r;
        r.eps = p.eps;
        r.sigma = p.sigma;

        Index n0 = 0;
        if (anchor.kind == AnchorRule::Kind::Fixed) {
            n0 = anchor.fixed_n0;
        } else if (anchor.certified_xi) {
            // First final-window index outside the certified limit's
            // exceedance set; the pivot the convergent-implies-Cauchy
            // argument builds on.
            auto in_exceed = exceedance_predicate(s, pn, *anchor.certified_xi, p);
            for (Index k = fa + 1; k <= ft; ++k) {
                if (!in_exceed(k)) {
                    n0 = k;
                    break;
                }
            }
        }
        if (n0 == 0) n0 = fa + (ft - fa + 1) / 2; // median of the final window
        r.anchor = n0;

        const Vec pivot = s->eval(n0);
        r.trace = deferred_density(
            exceedance_predicate(s, pn, pivot, p), w, n_grid, schedule);
        r.certified = r.trace.verdict == DensityVerdict::TendsToZero;
        r.refuted = !r.certified &&
                    persistently_at_least(r.trace.ratios, schedule, schedule.refutation_floor);
        return r;
    });

    Verdict v;
    v.mode = TestMode::DeferredStatCauchy;
    v.points = std::move(results);
    v.outcome = aggregate(v.points);
    v.anchor = max_anchor(v.points);
    v.subject = s->describe() + " | " + pn.name() + " | " + w.label();
    return v;
}

LimitEstimate estimate_limit(SequencePtr s, const ProbabilisticNorm& pn,
                             const DeferredWindow& w, std::span<const Vec> candidates,
                             const ParamGrid& grid, std::span<const Index> n_grid,
                             const ToleranceSchedule& schedule) {
    if (candidates.empty()) throw ConfigError("estimate_limit needs candidates");
    LimitEstimate est;
    std::optional<std::size_t> winner;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Verdict v = test_dstat(s, pn, candidates[i], w, grid, n_grid, schedule);
        double worst = 0.0;
        for (const auto& p : v.points)
            worst = std::max(worst, p.trace.ratios.back());
        est.scores.push_back(worst);
        if (v.certified()) {
            if (winner)
                throw AmbiguousLimit(
                    "both " + format_vec(candidates[*winner]) + " and " +
                    format_vec(candidates[i]) +
                    " certify; tolerance schedule too loose for this grid");
            winner = i;
        }
    }
    if (winner) est.best = candidates[*winner];
    return est;
}

} // namespace defstat
