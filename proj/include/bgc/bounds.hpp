#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace bgc {

// smallest L >= 0 with 2^L >= x, for x >= 1
int ceil_log2(std::int64_t x);

// log2 of binomial(n, k), computed in log space so dataset-scale n is fine
double log2_binom(std::int64_t n, std::int64_t k);

// Minimum number of local gradient computations any valid scheme needs at
// replication s+u with s' stragglers: floor(s / (u - s')). Requires u > s'.
int min_local_comps(int s, int u, int stragglers = 0);

// Information-theoretic lower bound on the protocol's uplink bits when the
// local-computation budget is minimal: log2 C(p/m, floor(s/(u-s'))).
double comm_lower_bound(std::int64_t p, int m, int s, int u, int stragglers = 0);

// Worst-case number of matches for a run that used c local computations:
// s - max(1,c)*(u-1). Zero when s = 0 or u > s (immediate majority).
int max_matches(int s, int u, int c);

// Worst-case protocol rounds: max_matches * (2*ceil(log2(p/m)) + 1).
int max_rounds(std::int64_t p, int m, int s, int u, int c);

// Exact worst-case uplink bits of the scheme for a run with c local
// computations (bisection symbols + votes + final voting rounds).
double comm_upper_bound(std::int64_t p, int m, int s, int u, int c, int alphabet_log2);

// Large-p form: (s - max(1,c)*(u-s'-1)) * (1+k) * ceil(log2(p/m)).
double comm_asymptotic(std::int64_t p, int m, int s, int u, int c, int alphabet_log2,
                       int stragglers = 0);

// Limit of comm_upper/comm_lower as p grows, at the minimal computation
// budget: (1+k) * (1 + (s mod u)/(s div u)). Requires floor(s/u) >= 1.
double overhead_ratio_limit(int s, int u, int alphabet_log2);

// All analytic values for one configuration, evaluated at c = floor(s/u).
struct BoundSet {
    int c_min = 0;
    int c_max = 0;
    double kappa_lower = 0.0;
    int r_max = 0;
    double kappa_upper = 0.0;
    double kappa_asymptotic = 0.0;
    std::optional<double> ratio_limit;
};

BoundSet evaluate_bounds(std::int64_t p, int m, int s, int u, int alphabet_log2,
                         int stragglers = 0);

// Per-run budget verification: measured c, rounds, matches and kappa against
// the formulas with u reduced by the straggler count.
struct BudgetCheck {
    bool ok = true;
    std::string detail;
};

BudgetCheck check_budgets(int s, int u, std::int64_t p, int m, int alphabet_log2, int stragglers,
                          int measured_c, int measured_rounds, int measured_matches,
                          double measured_kappa_bits);

}  // namespace bgc
