#include "bgc/alphabet.hpp"

#include <string>

namespace bgc {

GradientVec add(const Alphabet& a, const GradientVec& x, const GradientVec& y) {
    if (x.size() != y.size())
        throw ConfigError("gradient length mismatch: " + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()));
    GradientVec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a.add(x[i], y[i]);
    return out;
}

void add_in_place(const Alphabet& a, GradientVec& acc, std::span<const Symbol> x) {
    if (acc.size() != x.size()) throw ConfigError("gradient length mismatch in add_in_place");
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = a.add(acc[i], x[i]);
}

void sub_in_place(const Alphabet& a, GradientVec& acc, std::span<const Symbol> x) {
    if (acc.size() != x.size()) throw ConfigError("gradient length mismatch in sub_in_place");
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = a.sub(acc[i], x[i]);
}

GradientVec sum_range(const Alphabet& a, std::span<const GradientVec> vals, int lo, int hi) {
    if (lo < 1 || hi > static_cast<int>(vals.size()) || lo > hi)
        throw ConfigError("sum_range: bad interval [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "] over " + std::to_string(vals.size()) + " vectors");
    GradientVec acc = vals[static_cast<std::size_t>(lo - 1)];
    for (int i = lo + 1; i <= hi; ++i) add_in_place(a, acc, vals[static_cast<std::size_t>(i - 1)]);
    return acc;
}

GradientVec GradientStore::sum_range(const Alphabet& a, int lo, int hi) const {
    if (lo < 1 || hi > p_ || lo > hi)
        throw ConfigError("GradientStore::sum_range: bad interval");
    GradientVec acc(row(lo).begin(), row(lo).end());
    for (int i = lo + 1; i <= hi; ++i) add_in_place(a, acc, row(i));
    return acc;
}

GradientStore GradientStore::random(int n_samples, int dim, const Alphabet& a, Rng& rng) {
    GradientStore g(n_samples, dim);
    for (auto& v : g.data_) v = a.mask(rng.next());
    return g;
}

}  // namespace bgc
