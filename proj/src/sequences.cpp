#include "defstat/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

namespace defstat {

Index isqrt(Index k) {
    if (k < 0) throw Error("isqrt of negative value");
    auto r = static_cast<Index>(std::sqrt(static_cast<double>(k)));
    while (r > 0 && r * r > k) --r;
    while ((r + 1) * (r + 1) <= k) ++r;
    return r;
}

bool is_perfect_square(Index k) {
    if (k < 0) return false;
    const Index r = isqrt(k);
    return r * r == k;
}

namespace sequences {

namespace {

void require_index(Index k) {
    if (k < 1) throw IndexOutOfRange("sequence index must be >= 1, got " + std::to_string(k));
}

class ConstantSeq final : public SequenceSource {
public:
    explicit ConstantSeq(Vec v) : v_(std::move(v)) {}
    void eval_to(Index k, Vec& out) const override {
        require_index(k);
        out = v_;
    }
    std::size_t dim() const override { return v_.size(); }
    std::string describe() const override { return "constant" + format_vec(v_); }

private:
    Vec v_;
};

class SquareIndicatorSeq final : public SequenceSource {
public:
    void eval_to(Index k, Vec& out) const override {
        require_index(k);
        out.assign(1, is_perfect_square(k) ? 1.0 : 0.0);
    }
    std::size_t dim() const override { return 1; }
    std::string describe() const override { return "square_indicator"; }
};

class SparseBlocksSeq final : public SequenceSource {
public:
    SparseBlocksSeq(Index block_len, std::vector<std::pair<Index, Index>> blocks,
                    std::string desc)
        : block_len_(block_len), blocks_(std::move(blocks)), desc_(std::move(desc)) {}

    void eval_to(Index k, Vec& out) const override {
        require_index(k);
        // Blocks are sorted and disjoint; find the first with hi >= k.
        auto it = std::lower_bound(blocks_.begin(), blocks_.end(), k,
                                   [](const auto& b, Index key) { return b.second < key; });
        const bool in = it != blocks_.end() && it->first < k && k <= it->second;
        out.assign(1, in ? static_cast<double>(k) * static_cast<double>(k) : 0.0);
    }
    std::size_t dim() const override { return 1; }
    std::string describe() const override { return desc_; }

    const std::vector<std::pair<Index, Index>>& blocks() const { return blocks_; }
    Index block_len() const { return block_len_; }

private:
    Index block_len_;
    std::vector<std::pair<Index, Index>> blocks_; // (lo, hi], sorted, disjoint
    std::string desc_;
};

class HarmonicSeq final : public SequenceSource {
public:
    HarmonicSeq(Vec xi, Vec dir) : xi_(std::move(xi)), dir_(std::move(dir)) {
        require_same_dim(xi_, dir_, "harmonic_approach");
    }
    void eval_to(Index k, Vec& out) const override {
        require_index(k);
        out.resize(xi_.size());
        const double inv = 1.0 / static_cast<double>(k);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = xi_[i] + dir_[i] * inv;
    }
    std::size_t dim() const override { return xi_.size(); }
    std::string describe() const override {
        return "harmonic" + format_vec(xi_) + "+" + format_vec(dir_) + "/k";
    }

private:
    Vec xi_, dir_;
};

class EvenOddSeq final : public SequenceSource {
public:
    EvenOddSeq(Vec even, Vec odd) : even_(std::move(even)), odd_(std::move(odd)) {
        require_same_dim(even_, odd_, "even_odd");
    }
    void eval_to(Index k, Vec& out) const override {
        require_index(k);
        out = (k % 2 == 0) ? even_ : odd_;
    }
    std::size_t dim() const override { return even_.size(); }
    std::string describe() const override {
        return "even_odd(even=" + format_vec(even_) + ", odd=" + format_vec(odd_) + ")";
    }

private:
    Vec even_, odd_;
};

class ScaledSeq final : public SequenceSource {
public:
    ScaledSeq(double kappa, SequencePtr s) : kappa_(kappa), s_(std::move(s)) {
        if (!s_) throw ConfigError("scaled: null sequence");
    }
    void eval_to(Index k, Vec& out) const override {
        s_->eval_to(k, out);
        for (auto& x : out) x *= kappa_;
    }
    std::size_t dim() const override { return s_->dim(); }
    std::optional<Index> record_count() const override { return s_->record_count(); }
    std::string describe() const override {
        return std::to_string(kappa_) + "*" + s_->describe();
    }

private:
    double kappa_;
    SequencePtr s_;
};

class SumSeq final : public SequenceSource {
public:
    SumSeq(SequencePtr a, SequencePtr b) : a_(std::move(a)), b_(std::move(b)) {
        if (!a_ || !b_) throw ConfigError("sum: null sequence");
        if (a_->dim() != b_->dim())
            throw DimensionError("sum: dimension mismatch " + std::to_string(a_->dim()) +
                                 " vs " + std::to_string(b_->dim()));
    }
    void eval_to(Index k, Vec& out) const override {
        thread_local Vec tmp;
        a_->eval_to(k, out);
        b_->eval_to(k, tmp);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += tmp[i];
    }
    std::size_t dim() const override { return a_->dim(); }
    std::optional<Index> record_count() const override {
        const auto ra = a_->record_count(), rb = b_->record_count();
        if (ra && rb) return std::min(*ra, *rb);
        return ra ? ra : rb;
    }
    std::string describe() const override {
        return a_->describe() + " + " + b_->describe();
    }

private:
    SequencePtr a_, b_;
};

class PointwiseSeq final : public SequenceSource {
public:
    PointwiseSeq(std::size_t dim, std::function<Vec(Index)> fn, std::string label)
        : dim_(dim), fn_(std::move(fn)), label_(std::move(label)) {
        if (!fn_) throw ConfigError("pointwise: null callable");
    }
    void eval_to(Index k, Vec& out) const override {
        require_index(k);
        out = fn_(k);
        if (out.size() != dim_)
            throw DimensionError("pointwise '" + label_ + "' returned dimension " +
                                 std::to_string(out.size()) + ", expected " +
                                 std::to_string(dim_));
    }
    std::size_t dim() const override { return dim_; }
    std::string describe() const override { return label_; }

private:
    std::size_t dim_;
    std::function<Vec(Index)> fn_;
    std::string label_;
};

class TableSeq final : public SequenceSource {
public:
    TableSeq(std::size_t dim, std::vector<double> flat, std::string desc)
        : dim_(dim), flat_(std::move(flat)), desc_(std::move(desc)) {}

    void eval_to(Index k, Vec& out) const override {
        require_index(k);
        const auto rows = static_cast<Index>(flat_.size() / dim_);
        if (k > rows)
            throw IndexOutOfRange("sequence file has " + std::to_string(rows) +
                                  " records, index " + std::to_string(k) + " requested");
        const auto off = static_cast<std::size_t>(k - 1) * dim_;
        out.assign(flat_.begin() + static_cast<std::ptrdiff_t>(off),
                   flat_.begin() + static_cast<std::ptrdiff_t>(off + dim_));
    }
    std::size_t dim() const override { return dim_; }
    std::optional<Index> record_count() const override {
        return static_cast<Index>(flat_.size() / dim_);
    }
    std::string describe() const override { return desc_; }

private:
    std::size_t dim_;
    std::vector<double> flat_; // row-major records
    std::string desc_;
};

} // namespace

SequencePtr constant(Vec value) {
    if (value.empty()) throw ConfigError("constant sequence needs dimension >= 1");
    return std::make_shared<ConstantSeq>(std::move(value));
}

SequencePtr square_indicator() { return std::make_shared<SquareIndicatorSeq>(); }

SequencePtr sparse_blocks(Index block_len, const DeferredWindow& window, Index validate_n) {
    if (block_len < 1) throw ConfigError("sparse_blocks: block length must be >= 1");
    if (validate_n < 1) throw ConfigError("sparse_blocks: validation horizon must be >= 1");
    const WindowValidation wv = validate_prefix(window, validate_n);
    const Index N = wv.checked_upto;
    if (!wv.valid)
        throw Error("sparse_blocks: window invalid over prefix: " + wv.message);

    // The gate must hold on a suffix [n0, N]; find the maximal such suffix.
    auto gate = [&](Index n) {
        const Index a = window.alpha(n);
        return a > 0 && a <= isqrt(window.theta(n)) - block_len;
    };
    Index n0 = N + 1;
    for (Index n = N; n >= 1 && gate(n); --n) n0 = n;
    if (n0 > N)
        throw Error("sparse_blocks: gate 0 < alpha(n) <= isqrt(theta(n)) - " +
                    std::to_string(block_len) + " never holds up to n=" + std::to_string(N));

    // Greedy block placement.  A window n can reach block (q - L, q] only if
    // alpha(n) < q, so the next block must start past every theta(n) those
    // windows attain; that keeps "one block per window" and hence the count
    // bound |S ∩ (alpha(n), theta(n)]| <= L for all n <= N.
    std::vector<std::pair<Index, Index>> blocks;
    Index n = n0;
    while (true) {
        const Index q = isqrt(window.theta(n));
        blocks.emplace_back(std::max<Index>(q - block_len, 0), q);
        Index reach = 0;
        for (Index m = 1; m <= N; ++m)
            if (window.alpha(m) < q) reach = std::max(reach, window.theta(m));
        const Index next_q = reach + block_len;
        Index next_n = 0;
        for (Index m = n + 1; m <= N; ++m) {
            if (isqrt(window.theta(m)) >= next_q) {
                next_n = m;
                break;
            }
        }
        if (next_n == 0) break;
        n = next_n;
    }

    std::string desc = "sparse_blocks(len=" + std::to_string(block_len) + ", " +
                       window.label() + ", n<=" + std::to_string(N) + ")";
    return std::make_shared<SparseBlocksSeq>(block_len, std::move(blocks), std::move(desc));
}

SequencePtr harmonic_approach(Vec xi, Vec direction) {
    if (xi.empty()) throw ConfigError("harmonic_approach needs dimension >= 1");
    return std::make_shared<HarmonicSeq>(std::move(xi), std::move(direction));
}

SequencePtr even_odd(Vec even_value, Vec odd_value) {
    if (even_value.empty()) throw ConfigError("even_odd needs dimension >= 1");
    return std::make_shared<EvenOddSeq>(std::move(even_value), std::move(odd_value));
}

SequencePtr scaled(double kappa, SequencePtr s) {
    return std::make_shared<ScaledSeq>(kappa, std::move(s));
}

SequencePtr sum(SequencePtr a, SequencePtr b) {
    return std::make_shared<SumSeq>(std::move(a), std::move(b));
}

SequencePtr pointwise(std::size_t dim, std::function<Vec(Index)> fn, std::string label) {
    if (dim == 0) throw ConfigError("pointwise needs dimension >= 1");
    return std::make_shared<PointwiseSeq>(dim, std::move(fn), std::move(label));
}

namespace {

[[noreturn]] void parse_fail(std::size_t row, const std::string& what) {
    throw ParseError("row " + std::to_string(row) + ": " + what);
}

void check_record(std::size_t row, Index k, Index expected, std::size_t arity,
                  std::size_t expected_arity) {
    if (k != expected)
        throw GapError("row " + std::to_string(row) + ": index " + std::to_string(k) +
                       ", expected " + std::to_string(expected));
    if (arity != expected_arity)
        throw DimError("row " + std::to_string(row) + ": arity " + std::to_string(arity) +
                       ", expected " + std::to_string(expected_arity));
}

double parse_double(std::size_t row, const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') parse_fail(row, "bad number '" + tok + "'");
    return v;
}

SequencePtr ingest_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::vector<double> flat;
    std::size_t dim = 0;
    std::size_t row = 0;
    Index expected = 1;
    std::string line;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // Skip blank lines and a possible header on the first row.
        if (line.empty()) continue;
        if (row == 1 && line.find_first_not_of("0123456789+-., \teE") != std::string::npos)
            continue;
        std::vector<std::string> toks;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const auto b = tok.find_first_not_of(" \t");
            if (b == std::string::npos) parse_fail(row, "empty field");
            const auto e = tok.find_last_not_of(" \t");
            toks.push_back(tok.substr(b, e - b + 1));
        }
        if (toks.size() < 2) parse_fail(row, "need an index and at least one coordinate");
        char* end = nullptr;
        const long long k = std::strtoll(toks[0].c_str(), &end, 10);
        if (end == toks[0].c_str() || *end != '\0')
            parse_fail(row, "bad index '" + toks[0] + "'");
        if (dim == 0) dim = toks.size() - 1;
        check_record(row, k, expected, toks.size() - 1, dim);
        for (std::size_t i = 1; i < toks.size(); ++i)
            flat.push_back(parse_double(row, toks[i]));
        ++expected;
    }
    if (flat.empty()) throw ParseError("row 1: file has no records");
    return std::make_shared<TableSeq>(dim, std::move(flat), "file:" + path.filename().string());
}

SequencePtr ingest_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::vector<double> flat;
    std::size_t dim = 0;
    std::size_t row = 0;
    Index expected = 1;
    std::string line;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            parse_fail(row, e.what());
        }
        if (!j.is_object() || !j.contains("k") || !j.contains("v"))
            parse_fail(row, "expected an object with fields 'k' and 'v'");
        if (!j["k"].is_number_integer()) parse_fail(row, "'k' must be an integer");
        if (!j["v"].is_array() || j["v"].empty()) parse_fail(row, "'v' must be a nonempty array");
        for (const auto& x : j["v"])
            if (!x.is_number()) parse_fail(row, "'v' entries must be numbers");
        const auto k = j["k"].get<Index>();
        if (dim == 0) dim = j["v"].size();
        check_record(row, k, expected, j["v"].size(), dim);
        for (const auto& x : j["v"]) flat.push_back(x.get<double>());
        ++expected;
    }
    if (flat.empty()) throw ParseError("row 1: file has no records");
    return std::make_shared<TableSeq>(dim, std::move(flat), "file:" + path.filename().string());
}

} // namespace

SequencePtr ingest_file(const std::filesystem::path& path, FileFormat format) {
    switch (format) {
    case FileFormat::Csv: return ingest_csv(path);
    case FileFormat::JsonLines: return ingest_jsonl(path);
    }
    throw ConfigError("unknown file format");
}

double eval1(const SequenceSource& s, Index k) {
    thread_local Vec buf;
    s.eval_to(k, buf);
    if (buf.size() != 1) throw DimensionError("eval1 on a sequence of dimension " +
                                              std::to_string(buf.size()));
    return buf[0];
}

std::vector<std::pair<Index, Index>> block_intervals(const SequenceSource& s) {
    if (const auto* sb = dynamic_cast<const SparseBlocksSeq*>(&s)) return sb->blocks();
    throw Error("block_intervals: not a sparse_blocks sequence");
}

} // namespace sequences
} // namespace defstat
