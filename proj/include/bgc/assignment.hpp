#pragma once

#include <cstdint>
#include <vector>

#include "bgc/alphabet.hpp"

namespace bgc {

// Closed 1-based interval of sample indices.
struct SampleInterval {
    int lo = 0;
    int hi = 0;
    int size() const { return hi - lo + 1; }
    bool contains(int i) const { return lo <= i && i <= hi; }
    bool contains(int l, int h) const { return lo <= l && l <= h && h <= hi; }
};

// Parameters of one run: n workers in m fractional-repetition groups of size
// s+u each, p samples, gradients of dimension d over Z_{2^k}.
//
// Workers and samples are 1-indexed throughout the in-memory model, matching
// the protocol's own counting; serialized formats (CSV, JSON transcripts,
// config files) use 0-based ids.
struct SystemConfig {
    int n_workers = 0;        // n
    int n_malicious = 0;      // s
    int honest_per_group = 1; // u
    int n_groups = 1;         // m
    int n_samples = 0;        // p
    int dim = 1;              // d
    Alphabet alphabet{8};
    std::uint64_t rng_seed = 1;

    int group_size() const { return n_workers / n_groups; }
    int samples_per_group() const { return n_samples / n_groups; }

    // Checks n = m(s+u), m | p, s >= 0, u >= 1, d >= 1. Throws ConfigError.
    void validate() const;
};

// p x n binary data assignment matrix B; B[i,j] = 1 iff sample i is assigned
// to worker j. Only fractional-repetition instances are constructible here,
// but the type is general so baselines with other group sizes reuse it.
class AssignmentMatrix {
public:
    AssignmentMatrix(int n_samples, int n_workers)
        : p_(n_samples), n_(n_workers),
          bits_(static_cast<std::size_t>(n_samples) * n_workers, 0) {}

    int rows() const { return p_; }
    int cols() const { return n_; }

    bool at(int sample, int worker) const {
        return bits_[idx(sample, worker)] != 0;
    }
    void set(int sample, int worker, bool v) { bits_[idx(sample, worker)] = v ? 1 : 0; }

    std::int64_t ones() const;
    int row_sum(int sample) const;
    int col_sum(int worker) const;

private:
    std::size_t idx(int sample, int worker) const {
        return static_cast<std::size_t>(sample - 1) * n_ + (worker - 1);
    }

    int p_;
    int n_;
    std::vector<std::uint8_t> bits_;
};

// Block-diagonal all-ones assignment: worker j belongs to group ceil(j*m/n)
// and group l holds samples ((l-1)p/m, l*p/m].
AssignmentMatrix build_fractional_repetition(const SystemConfig& cfg);

// Average number of workers holding each sample: sum(B) / p.
double replication_factor(const AssignmentMatrix& b);

int group_of(const SystemConfig& cfg, int worker);
SampleInterval samples_of_group(const SystemConfig& cfg, int group);
SampleInterval samples_of_worker(const SystemConfig& cfg, int worker);
std::vector<int> workers_of_group(const SystemConfig& cfg, int group);

}  // namespace bgc
