#include "bgc/assignment.hpp"

#include <numeric>
#include <string>

namespace bgc {

void SystemConfig::validate() const {
    if (n_workers < 1) throw ConfigError("n must be >= 1");
    if (n_malicious < 0) throw ConfigError("s must be >= 0");
    if (honest_per_group < 1) throw ConfigError("u must be >= 1");
    if (n_groups < 1) throw ConfigError("m must be >= 1");
    if (dim < 1) throw ConfigError("d must be >= 1");
    if (n_samples < 1) throw ConfigError("p must be >= 1");
    if (n_workers != n_groups * (n_malicious + honest_per_group))
        throw ConfigError("n = m*(s+u) violated: n=" + std::to_string(n_workers) + " m=" +
                          std::to_string(n_groups) + " s=" + std::to_string(n_malicious) +
                          " u=" + std::to_string(honest_per_group));
    if (n_samples % n_groups != 0)
        throw ConfigError("m must divide p: p=" + std::to_string(n_samples) + " m=" +
                          std::to_string(n_groups));
}

std::int64_t AssignmentMatrix::ones() const {
    return std::accumulate(bits_.begin(), bits_.end(), std::int64_t{0});
}

int AssignmentMatrix::row_sum(int sample) const {
    int s = 0;
    for (int j = 1; j <= n_; ++j) s += at(sample, j) ? 1 : 0;
    return s;
}

int AssignmentMatrix::col_sum(int worker) const {
    int s = 0;
    for (int i = 1; i <= p_; ++i) s += at(i, worker) ? 1 : 0;
    return s;
}

AssignmentMatrix build_fractional_repetition(const SystemConfig& cfg) {
    cfg.validate();
    AssignmentMatrix b(cfg.n_samples, cfg.n_workers);
    const int pg = cfg.samples_per_group();
    const int ng = cfg.group_size();
    for (int i = 1; i <= cfg.n_samples; ++i) {
        const int sample_group = (i - 1) / pg + 1;
        for (int j = 1; j <= cfg.n_workers; ++j) {
            const int worker_group = (j - 1) / ng + 1;
            if (sample_group == worker_group) b.set(i, j, true);
        }
    }
    return b;
}

double replication_factor(const AssignmentMatrix& b) {
    return static_cast<double>(b.ones()) / static_cast<double>(b.rows());
}

int group_of(const SystemConfig& cfg, int worker) {
    if (worker < 1 || worker > cfg.n_workers)
        throw ConfigError("worker id " + std::to_string(worker) + " out of range");
    return (worker - 1) / cfg.group_size() + 1;
}

SampleInterval samples_of_group(const SystemConfig& cfg, int group) {
    if (group < 1 || group > cfg.n_groups)
        throw ConfigError("group id " + std::to_string(group) + " out of range");
    const int pg = cfg.samples_per_group();
    return {(group - 1) * pg + 1, group * pg};
}

SampleInterval samples_of_worker(const SystemConfig& cfg, int worker) {
    return samples_of_group(cfg, group_of(cfg, worker));
}

std::vector<int> workers_of_group(const SystemConfig& cfg, int group) {
    if (group < 1 || group > cfg.n_groups)
        throw ConfigError("group id " + std::to_string(group) + " out of range");
    std::vector<int> out;
    const int ng = cfg.group_size();
    for (int j = (group - 1) * ng + 1; j <= group * ng; ++j) out.push_back(j);
    return out;
}

}  // namespace bgc
