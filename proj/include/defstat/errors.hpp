#pragma once

#include <stdexcept>
#include <string>

namespace defstat {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration (bad names, malformed files, bad ranges).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Vector arity mismatch between a point and the space it is evaluated in.
class DimensionError : public Error {
public:
    using Error::Error;
};

// A window pair (alpha(n), theta(n)] violated alpha(n) < theta(n) or related ordering.
class WindowOrderError : public Error {
public:
    using Error::Error;
};

// Nested windows failed the containment requirement alpha <= rho < sigma <= theta.
class WindowNestingError : public Error {
public:
    using Error::Error;
};

// Limit estimation found more than one candidate that certifies.
class AmbiguousLimit : public Error {
public:
    using Error::Error;
};

// Access past the last record of a bounded sequence source.
class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

// Malformed row while ingesting sequence data from a file.
class ParseError : public Error {
public:
    using Error::Error;
};

// Indices in an ingested file skip a value.
class GapError : public Error {
public:
    using Error::Error;
};

// Ragged rows: a record's arity differs from the first record.
class DimError : public Error {
public:
    using Error::Error;
};

} // namespace defstat
