#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bgc/rng.hpp"

namespace bgc {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One coordinate of a partial gradient: a k-bit unsigned value.
using Symbol = std::uint32_t;

// A length-d vector of symbols (a quantized partial gradient or a sum of them).
using GradientVec = std::vector<Symbol>;

// The ring Z_{2^k}. Symbols are k-bit values with wrapping addition; sums of
// partial gradients are exact and bit-reproducible. Symbols serialize as k-bit
// unsigned big-endian fields; cost accounting uses exactly k bits per symbol.
class Alphabet {
public:
    explicit Alphabet(int size_log2) : k_(size_log2) {
        if (k_ < 1 || k_ > 31)
            throw ConfigError("alphabet size_log2 must be in [1, 31], got " + std::to_string(k_));
        mask_ = (k_ == 31) ? 0x7fffffffu : ((1u << k_) - 1u);
    }

    int bits_per_symbol() const { return k_; }
    std::uint64_t size() const { return std::uint64_t{1} << k_; }

    Symbol mask(std::uint64_t raw) const { return static_cast<Symbol>(raw) & mask_; }
    Symbol add(Symbol a, Symbol b) const { return (a + b) & mask_; }
    Symbol sub(Symbol a, Symbol b) const { return (a - b) & mask_; }
    Symbol neg(Symbol a) const { return (0u - a) & mask_; }

    bool contains(Symbol a) const { return (a & ~mask_) == 0; }

    bool operator==(const Alphabet& o) const { return k_ == o.k_; }

private:
    int k_;
    Symbol mask_;
};

inline int bits_per_symbol(const Alphabet& a) { return a.bits_per_symbol(); }

// Coordinate-wise sum mod |A|. Lengths must match.
GradientVec add(const Alphabet& a, const GradientVec& x, const GradientVec& y);

void add_in_place(const Alphabet& a, GradientVec& acc, std::span<const Symbol> x);
void sub_in_place(const Alphabet& a, GradientVec& acc, std::span<const Symbol> x);

// Sum of vals[lo..hi] (1-based closed interval). Empty or out-of-range intervals
// are configuration errors.
GradientVec sum_range(const Alphabet& a, std::span<const GradientVec> vals, int lo, int hi);

// Dense p x d table of true partial gradients, sample-major. Sample ids are
// 1-based like everywhere else in the in-memory model.
class GradientStore {
public:
    GradientStore(int n_samples, int dim)
        : p_(n_samples), d_(dim), data_(static_cast<std::size_t>(n_samples) * dim, 0) {
        if (n_samples < 1 || dim < 1) throw ConfigError("GradientStore needs p >= 1, d >= 1");
    }

    int n_samples() const { return p_; }
    int dim() const { return d_; }

    std::span<const Symbol> row(int sample) const {
        check(sample);
        return {data_.data() + static_cast<std::size_t>(sample - 1) * d_, static_cast<std::size_t>(d_)};
    }
    std::span<Symbol> row(int sample) {
        check(sample);
        return {data_.data() + static_cast<std::size_t>(sample - 1) * d_, static_cast<std::size_t>(d_)};
    }

    GradientVec vec(int sample) const {
        auto r = row(sample);
        return GradientVec(r.begin(), r.end());
    }

    GradientVec sum_range(const Alphabet& a, int lo, int hi) const;
    GradientVec sum_all(const Alphabet& a) const { return sum_range(a, 1, p_); }

    static GradientStore random(int n_samples, int dim, const Alphabet& a, Rng& rng);

private:
    void check(int sample) const {
        if (sample < 1 || sample > p_)
            throw ConfigError("sample index " + std::to_string(sample) + " out of range [1, " +
                              std::to_string(p_) + "]");
    }

    int p_;
    int d_;
    std::vector<Symbol> data_;
};

}  // namespace bgc
