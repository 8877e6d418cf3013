#pragma once

#include <cstdint>
#include <string>

namespace bgc {

// CSV generators behind the `figure` subcommand. Each returns the full file
// contents (header line included); plotting is left to external tools.

// fig2: achievable local computations vs normalized replication,
// c = floor(1/(rho_norm - 1)) for rho_norm in (1, 2], 0 beyond 2.
std::string fig2_csv();

// fig3: analytic upper/lower bounds on protocol uplink bits over the dataset
// size, for n workers in one group and malicious fractions 50%..90%.
std::string fig3_csv(int n = 10, int alphabet_log2 = 16);

// fig4: total worker-to-main-node communication vs local computations for
// s = 10 and u = 1..s+1 (the u = s+1 point is the replication-(2s+1)
// majority baseline with c = 0).
std::string fig4_csv(int s = 10, std::int64_t p = 10000, std::int64_t d = 1000000,
                     int alphabet_log2 = 16);

// fig5: convergence of the upper/lower bound ratio to its large-p limit, on a
// power-of-two per-group size grid.
std::string fig5_csv(int m = 10, int alphabet_log2 = 16);

// Analytic total-communication ratio of the interactive scheme at a given u
// against the replication-(2s+1) baseline (fig4's headline number).
double scheme_vs_baseline_ratio(int s, int u, std::int64_t p, std::int64_t d, int alphabet_log2);

}  // namespace bgc
