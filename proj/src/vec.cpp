#include "defstat/vec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace defstat {

namespace {
std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}
} // namespace

BaseNorm base_norm_from_name(std::string_view name) {
    const std::string n = lower(name);
    if (n == "euclidean" || n == "l2") return BaseNorm::Euclidean;
    if (n == "absolute" || n == "l1") return BaseNorm::Absolute;
    if (n == "max" || n == "maxcoordinate" || n == "max_coordinate" || n == "linf")
        return BaseNorm::MaxCoordinate;
    throw ConfigError("unknown base norm: " + std::string(name));
}

std::string to_string(BaseNorm b) {
    switch (b) {
    case BaseNorm::Euclidean: return "euclidean";
    case BaseNorm::Absolute: return "absolute";
    case BaseNorm::MaxCoordinate: return "max";
    }
    return "?";
}

double norm(const Vec& v, BaseNorm b) {
    switch (b) {
    case BaseNorm::Euclidean: {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    }
    case BaseNorm::Absolute: {
        double s = 0.0;
        for (double x : v) s += std::fabs(x);
        return s;
    }
    case BaseNorm::MaxCoordinate: {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::fabs(x));
        return m;
    }
    }
    return 0.0;
}

Vec add(const Vec& a, const Vec& b) {
    require_same_dim(a, b, "add");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Vec sub(const Vec& a, const Vec& b) {
    require_same_dim(a, b, "sub");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vec scale(double k, const Vec& v) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = k * v[i];
    return out;
}

Vec zero_vec(std::size_t dim) { return Vec(dim, 0.0); }

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

std::string format_vec(const Vec& v) {
    std::string out = "(";
    char buf[40];
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
        if (i) out += ", ";
        out += buf;
    }
    out += ")";
    return out;
}

} // namespace defstat
