#include "defstat/pns.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "defstat/rng.hpp"

namespace defstat {

ProbabilisticNorm::ProbabilisticNorm(std::string name, Fn fn, bool phi0, BaseNorm base)
    : name_(std::move(name)), fn_(std::move(fn)), phi0_(phi0), base_(base) {}

ProbabilisticNorm ProbabilisticNorm::phi0(BaseNorm base) {
    auto fn = [base](const Vec& tau, double eps) {
        if (eps <= 0.0) return 0.0;
        return eps / (eps + norm(tau, base));
    };
    return ProbabilisticNorm("phi0(" + to_string(base) + ")", std::move(fn), true, base);
}

ProbabilisticNorm ProbabilisticNorm::custom(Fn fn, std::string name) {
    if (!fn) throw ConfigError("custom probabilistic norm requires a callable");
    return ProbabilisticNorm(std::move(name), std::move(fn), false, BaseNorm::Euclidean);
}

BaseNorm ProbabilisticNorm::base() const {
    if (!phi0_) throw Error("base norm only defined for the phi0 construction");
    return base_;
}

double ProbabilisticNorm::eval_raw(const Vec& tau, double eps) const {
    if (dim_ && tau.size() != *dim_)
        throw DimensionError("probabilistic norm expects dimension " + std::to_string(*dim_) +
                             ", got " + std::to_string(tau.size()));
    return fn_(tau, eps);
}

UnitValue ProbabilisticNorm::eval(const Vec& tau, double eps) const {
    return UnitValue(eval_raw(tau, eps));
}

namespace {

std::string point_str(const Vec& tau, double eps) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "; eps=%.17g", eps);
    return "tau=" + format_vec(tau) + buf;
}

} // namespace

AxiomReport check_pn_axioms(const ProbabilisticNorm& pn, const TNorm& t, int dim,
                            int sample_count, std::uint64_t seed, double tol) {
    AxiomReport rep;
    rep.subject = "pn:" + pn.name() + " with " + t.name();
    rep.seed = seed;
    rep.sample_count = sample_count;
    rep.tol = tol;

    Sampler rng(seed);
    const Vec theta = zero_vec(static_cast<std::size_t>(dim));
    const double eps_ladder[] = {1e-6, 1e-3, 0.1, 1.0, 10.0, 1e3, 1e6};

    AxiomResult zero = make_axiom("nonpositive-eps", /*exact=*/true);
    AxiomResult range = make_axiom("range", /*exact=*/true);
    AxiomResult ident = make_axiom("identity-at-zero");
    AxiomResult scal = make_axiom("scaling");
    AxiomResult tri = make_axiom("triangle");

    auto fail = [](AxiomResult& r, const std::string& cx, double disc = 0.0) {
        if (r.passed) r.counterexample = cx;
        r.passed = false;
        ++r.violations;
        r.worst_discrepancy = std::max(r.worst_discrepancy, disc);
    };

    auto rand_vec = [&](double span) {
        Vec v(static_cast<std::size_t>(dim));
        for (auto& x : v) x = rng.uniform(-span, span);
        return v;
    };

    for (int i = 0; i < sample_count; ++i) {
        // Mix magnitudes so both near-zero and large points are exercised.
        const double span = (i % 3 == 0) ? 0.01 : (i % 3 == 1 ? 1.0 : 100.0);
        Vec tau = rand_vec(span);
        if (i % 16 == 0) tau = theta; // exercise the zero vector too
        const Vec zeta = rand_vec(span);
        const double eps = rng.positive(2.0 * span + 1.0);
        const double lam = rng.positive(2.0 * span + 1.0);

        // (1a) eps <= 0 pins the value to 0.
        ++zero.samples;
        if (pn.eval_raw(tau, 0.0) != 0.0 || pn.eval_raw(tau, -eps) != 0.0)
            fail(zero, point_str(tau, -eps));

        // (1b) range.
        ++range.samples;
        const double v = pn.eval_raw(tau, eps);
        if (!in_unit_interval(v)) fail(range, point_str(tau, eps));

        // (2) identity at the zero vector, probed on the eps ladder; and the
        // converse: a nonzero point must fall below 1 somewhere on the ladder.
        ++ident.samples;
        for (double e : eps_ladder) {
            if (std::fabs(pn.eval_raw(theta, e) - 1.0) > tol)
                fail(ident, point_str(theta, e), std::fabs(pn.eval_raw(theta, e) - 1.0));
        }
        if (!is_zero(tau)) {
            bool below = false;
            for (double e : eps_ladder)
                if (pn.eval_raw(tau, e) < 1.0 - tol) below = true;
            if (!below) fail(ident, point_str(tau, eps_ladder[0]));
        }

        // (3) scaling.
        ++scal.samples;
        const double k = (i % 2 ? -1.0 : 1.0) * rng.positive(8.0);
        const double lhs = pn.eval_raw(scale(k, tau), eps);
        const double rhs = pn.eval_raw(tau, eps / std::fabs(k));
        const double sdisc = std::fabs(lhs - rhs);
        scal.worst_discrepancy = std::max(scal.worst_discrepancy, sdisc);
        if (sdisc > tol) fail(scal, point_str(tau, eps) + " k=" + std::to_string(k), sdisc);

        // (4) triangle inequality under the t-norm.
        ++tri.samples;
        const double both = pn.eval_raw(add(tau, zeta), eps + lam);
        const double parts = t.apply_raw(pn.eval_raw(tau, eps), pn.eval_raw(zeta, lam));
        if (both < parts - tol)
            fail(tri, point_str(tau, eps) + " zeta=" + format_vec(zeta), parts - both);
    }

    rep.axioms = {zero, range, ident, scal, tri};
    return rep;
}

DistributionProbe probe_distribution(const ProbabilisticNorm& pn, const Vec& tau,
                                     std::span<const double> eps_grid) {
    DistributionProbe out;
    out.tau = tau;
    out.eps.assign(eps_grid.begin(), eps_grid.end());
    for (std::size_t i = 1; i < out.eps.size(); ++i)
        if (!(out.eps[i] > out.eps[i - 1]))
            throw ConfigError("eps grid must be strictly increasing");
    out.values.reserve(out.eps.size());
    for (double e : out.eps) out.values.push_back(pn.eval_raw(tau, e));
    for (std::size_t i = 1; i < out.values.size(); ++i) {
        if (out.values[i] < out.values[i - 1]) {
            out.nondecreasing = false;
            out.first_violation = static_cast<int>(i);
            break;
        }
    }
    return out;
}

} // namespace defstat
