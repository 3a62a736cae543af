#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "defstat/errors.hpp"

namespace defstat {

// Points of the underlying real linear space.  Dimension is the length.
using Vec = std::vector<double>;

enum class BaseNorm { Euclidean, Absolute, MaxCoordinate };

BaseNorm base_norm_from_name(std::string_view name);
std::string to_string(BaseNorm b);

double norm(const Vec& v, BaseNorm b);

Vec add(const Vec& a, const Vec& b);   // throws DimensionError on mismatch
Vec sub(const Vec& a, const Vec& b);   // throws DimensionError on mismatch
Vec scale(double k, const Vec& v);
Vec zero_vec(std::size_t dim);
bool is_zero(const Vec& v);

std::string format_vec(const Vec& v);  // "(a, b, c)" for diagnostics

inline void require_same_dim(const Vec& a, const Vec& b, const char* what) {
    if (a.size() != b.size())
        throw DimensionError(std::string(what) + ": dimension mismatch " +
                             std::to_string(a.size()) + " vs " + std::to_string(b.size()));
}

} // namespace defstat
