#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bgc {

// Grid-sweep options for the property suite behind `proptest`. The default
// grid covers s <= 5, u <= 3, m <= 3, n <= 12, p/m in {5, 8, 16},
// k in {2, 8}, all adversary strategies, exhaustive malicious placements for
// small n, straggler variants, determinism re-runs and the multi-group
// comparison.
struct PropTestOptions {
    std::uint64_t base_seed = 20240101;
    int seeds_per_case = 2;
    int max_exhaustive_placements = 64;
    int random_placements = 4;
    int dim = 3;
    int determinism_stride = 97;
    bool multigroup_compare = true;
    long long min_runs = 10000;
    std::string dump_path = "proptest_failure.jsonl";
};

struct PropTestReport {
    long long runs = 0;
    long long failures = 0;
    long long symmetrization_runs = 0;
    long long straggler_runs = 0;
    long long determinism_checks = 0;
    long long multigroup_checks = 0;
    std::vector<std::string> messages;  // first few failure details

    bool ok() const { return failures == 0; }
    std::string summary() const;
};

// Runs the whole grid. Every run asserts: exact decode, honest immunity, the
// local-computation / round / match / bit budgets, and for symmetrization runs
// the forced-computation count, the disputed-index witness I >= I~, and the
// communication lower bound. Violations are reported with config + seed and
// the first failing transcript is dumped to dump_path.
PropTestReport run_property_suite(const PropTestOptions& opt, std::ostream* log = nullptr);

}  // namespace bgc
