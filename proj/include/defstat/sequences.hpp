#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "defstat/vec.hpp"
#include "defstat/windows.hpp"

namespace defstat {

// A sequence w_1, w_2, ... of points, evaluated on demand.  Implementations
// must be pure: evaluating k twice yields the same value.  eval_to writes
// into a caller-owned buffer so the testers' inner loops stay allocation-free.
class SequenceSource {
public:
    virtual ~SequenceSource() = default;

    virtual void eval_to(Index k, Vec& out) const = 0; // k >= 1

    Vec eval(Index k) const {
        Vec v;
        eval_to(k, v);
        return v;
    }

    virtual std::size_t dim() const = 0;

    // Last valid index for bounded sources (ingested files); empty = unbounded.
    virtual std::optional<Index> record_count() const { return std::nullopt; }

    virtual std::string describe() const = 0;
};

using SequencePtr = std::shared_ptr<const SequenceSource>;

namespace sequences {

// w_k = value for all k.
SequencePtr constant(Vec value);

// Scalar 0/1 indicator of the perfect squares.
SequencePtr square_indicator();

// Scalar sequence that is k*k on a sparse family of index blocks and 0
// elsewhere.  Blocks have the form (q - block_len, q] with q = isqrt(theta(n))
// for selected n, spaced out so that any single window (alpha(n), theta(n)]
// with n <= validate_n meets at most one block; hence at most block_len
// nonzero entries fall in any such window.  Construction checks that theta is
// nondecreasing and that the gate 0 < alpha(n) <= isqrt(theta(n)) - block_len
// holds from some n0 on through validate_n, and throws otherwise.
SequencePtr sparse_blocks(Index block_len, const DeferredWindow& window, Index validate_n);

// w_k = xi + direction / k.
SequencePtr harmonic_approach(Vec xi, Vec direction);

// w_k = even_value for even k, odd_value for odd k.
SequencePtr even_odd(Vec even_value, Vec odd_value);

// w_k = kappa * s_k.
SequencePtr scaled(double kappa, SequencePtr s);

// w_k = a_k + b_k (dims must agree).
SequencePtr sum(SequencePtr a, SequencePtr b);

// Arbitrary callable; fn(k) must return vectors of the stated dimension.
SequencePtr pointwise(std::size_t dim, std::function<Vec(Index)> fn, std::string label);

enum class FileFormat { Csv, JsonLines };

// Reads and validates a whole file of records "index, coordinates...".
// Indices must start at 1 and increase by exactly 1 (GapError otherwise);
// every record must match the first record's arity (DimError); anything
// unreadable is a ParseError carrying the 1-based row number.  The result is
// bounded: eval past the last record throws IndexOutOfRange.
SequencePtr ingest_file(const std::filesystem::path& path, FileFormat format);

// Convenience for scalar sequences in tests and bindings.
double eval1(const SequenceSource& s, Index k);

// Nonzero block intervals (lo, hi] of a sparse_blocks sequence, for
// diagnostics; throws Error for other sources.
std::vector<std::pair<Index, Index>> block_intervals(const SequenceSource& s);

} // namespace sequences

// Exact integer square root for k >= 0.
Index isqrt(Index k);
bool is_perfect_square(Index k);

} // namespace defstat
