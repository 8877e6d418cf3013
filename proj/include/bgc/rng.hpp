#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace bgc {

// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return mix64(base ^ mix64(stream));
}

// Deterministic RNG. mt19937_64 has a standard-mandated output sequence and all
// bounded draws below use explicit rejection sampling, so identical seeds give
// identical draws on every platform (std::uniform_int_distribution does not
// guarantee that).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // uniform in [0, bound), bound >= 1
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return v % bound;
    }

    // uniform in the closed range [lo, hi]
    int range(int lo, int hi) {
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool coin() { return (gen_() >> 63) != 0; }

    // uniform in [0, 1), 53-bit resolution
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // `count` distinct values drawn uniformly from the closed range [lo, hi], sorted.
    std::vector<int> sample_sorted(int lo, int hi, int count);

private:
    std::mt19937_64 gen_;
};

inline std::vector<int> Rng::sample_sorted(int lo, int hi, int count) {
    std::vector<int> pool;
    pool.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int i = lo; i <= hi; ++i) pool.push_back(i);
    // partial Fisher-Yates: the first `count` entries are a uniform subset
    for (int i = 0; i < count; ++i) {
        int j = i + static_cast<int>(below(pool.size() - static_cast<std::size_t>(i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(count));
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace bgc
