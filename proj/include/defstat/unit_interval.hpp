#pragma once

#include <cmath>
#include <compare>

#include "defstat/errors.hpp"

namespace defstat {

// A double constrained to [0, 1] at construction time.  Used wherever a value
// is meant to be a probability-like level: t-norm arguments, distribution
// values, sigma levels.  Arithmetic stays on raw doubles; this type only marks
// the boundary where range checking happens.
class UnitValue {
public:
    explicit UnitValue(double v) : v_(v) {
        if (!(v >= 0.0 && v <= 1.0)) // also rejects NaN
            throw Error("unit value out of range: " + std::to_string(v));
    }

    double value() const noexcept { return v_; }

    friend auto operator<=>(UnitValue a, UnitValue b) noexcept { return a.v_ <=> b.v_; }
    friend bool operator==(UnitValue a, UnitValue b) noexcept { return a.v_ == b.v_; }

private:
    double v_;
};

// True iff v is a finite double inside [0, 1].
inline bool in_unit_interval(double v) noexcept { return v >= 0.0 && v <= 1.0; }

} // namespace defstat
