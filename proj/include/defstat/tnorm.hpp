#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "defstat/report.hpp"
#include "defstat/unit_interval.hpp"

namespace defstat {

enum class TNormKind { Min, Product, Lukasiewicz, Custom };

// A triangular norm: an associative, commutative, monotone binary operation on
// [0,1] with identity 1.  The three built-ins are evaluated branch-free where
// possible; a custom one wraps an arbitrary callable and should be vetted with
// check_tnorm_axioms before use.
class TNorm {
public:
    using Fn = std::function<double(double, double)>;

    static TNorm minimum();
    static TNorm product();
    static TNorm lukasiewicz();
    static TNorm custom(Fn fn, std::string name = "custom");

    // Accepts "min", "product", "lukasiewicz" (case-insensitive).
    static TNorm from_name(std::string_view name);

    TNormKind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }

    UnitValue apply(UnitValue a, UnitValue b) const;

    // Hot-path variant; inputs must already lie in [0,1].
    double apply_raw(double a, double b) const;

private:
    TNorm(TNormKind kind, std::string name, Fn fn);

    TNormKind kind_;
    std::string name_;
    Fn fn_; // only set for Custom
};

inline UnitValue apply(const TNorm& t, UnitValue a, UnitValue b) { return t.apply(a, b); }

// Probes commutativity and identity exactly, associativity within tol, and
// monotonicity on ordered sample pairs.  A continuity probe (finite-difference
// Lipschitz estimate) is included as an informative entry that never fails the
// report.  Boundary points {0, 1/2, 1} are always included in the samples.
AxiomReport check_tnorm_axioms(const TNorm& t, int sample_count, std::uint64_t seed,
                               double tol = 1e-12);

} // namespace defstat
