#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "defstat/report.hpp"
#include "defstat/tnorm.hpp"
#include "defstat/unit_interval.hpp"
#include "defstat/vec.hpp"

namespace defstat {

// phi(tau; eps): for each point tau, a distribution function of eps.  Values
// lie in [0,1], phi(tau; eps) = 0 for eps <= 0, and phi is nondecreasing in
// eps with limit 1 only at the zero vector.
//
// The standard construction uses a base vector norm:
//     phi0(tau; eps) = eps / (eps + ||tau||)   (eps > 0)
class ProbabilisticNorm {
public:
    using Fn = std::function<double(const Vec&, double)>;

    static ProbabilisticNorm phi0(BaseNorm base);
    static ProbabilisticNorm custom(Fn fn, std::string name = "custom");

    UnitValue eval(const Vec& tau, double eps) const;

    // Hot-path variant: skips the UnitValue wrapper, keeps the dim check.
    double eval_raw(const Vec& tau, double eps) const;

    const std::string& name() const noexcept { return name_; }
    bool is_phi0() const noexcept { return phi0_; }
    BaseNorm base() const; // throws Error unless is_phi0()

    // Pin the expected dimension; eval then rejects other arities.
    void fix_dim(std::size_t dim) { dim_ = dim; }
    std::optional<std::size_t> fixed_dim() const noexcept { return dim_; }

private:
    ProbabilisticNorm(std::string name, Fn fn, bool phi0, BaseNorm base);

    std::string name_;
    Fn fn_;
    bool phi0_;
    BaseNorm base_;
    std::optional<std::size_t> dim_;
};

// Samples points and eps values and probes the four defining axioms:
//   (1) range/zero: values in [0,1] and phi(tau; eps) = 0 for eps <= 0
//   (2) identity:   phi(tau; eps) = 1 for all sampled eps > 0 iff tau = 0
//   (3) scaling:    phi(k*tau; eps) = phi(tau, eps/|k|) for k != 0
//   (4) triangle:   phi(tau+zeta; eps+lam) >= T(phi(tau;eps), phi(zeta;lam))
// (2) is necessarily a finite probe of an "for all eps" statement; it uses an
// eps ladder spanning several orders of magnitude.
AxiomReport check_pn_axioms(const ProbabilisticNorm& pn, const TNorm& t, int dim,
                            int sample_count, std::uint64_t seed, double tol = 1e-9);

// Evaluations of phi(tau; .) on an increasing eps grid, with a monotonicity
// summary.  Used to eyeball distribution shape and in tests.
struct DistributionProbe {
    Vec tau;
    std::vector<double> eps;
    std::vector<double> values;
    bool nondecreasing = true;
    int first_violation = -1;
};

DistributionProbe probe_distribution(const ProbabilisticNorm& pn, const Vec& tau,
                                     std::span<const double> eps_grid);

} // namespace defstat
