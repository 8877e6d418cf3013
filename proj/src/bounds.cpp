#include "bgc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bgc/alphabet.hpp"

namespace bgc {

int ceil_log2(std::int64_t x) {
    if (x < 1) throw ConfigError("ceil_log2 needs x >= 1");
    int l = 0;
    std::int64_t v = 1;
    while (v < x) {
        v <<= 1;
        ++l;
    }
    return l;
}

double log2_binom(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) throw ConfigError("log2_binom needs 0 <= k <= n");
    if (k == 0 || k == n) return 0.0;
    const double ln2 = std::log(2.0);
    return (std::lgamma(static_cast<double>(n) + 1.0) -
            std::lgamma(static_cast<double>(k) + 1.0) -
            std::lgamma(static_cast<double>(n - k) + 1.0)) /
           ln2;
}

int min_local_comps(int s, int u, int stragglers) {
    if (s < 0 || u < 1 || stragglers < 0) throw ConfigError("min_local_comps: bad arguments");
    if (u <= stragglers) throw ConfigError("min_local_comps undefined for u <= stragglers");
    return s / (u - stragglers);
}

double comm_lower_bound(std::int64_t p, int m, int s, int u, int stragglers) {
    if (m < 1 || p < 1 || p % m != 0) throw ConfigError("comm_lower_bound: m must divide p");
    const std::int64_t pg = p / m;
    const int c = min_local_comps(s, u, stragglers);
    if (c > pg) throw ConfigError("comm_lower_bound: floor(s/(u-s')) exceeds p/m");
    return log2_binom(pg, c);
}

int max_matches(int s, int u, int c) {
    if (s == 0 || u > s) return 0;
    const int cbar = std::max(1, c);
    return s - cbar * (u - 1);
}

int max_rounds(std::int64_t p, int m, int s, int u, int c) {
    if (m < 1 || p < 1 || p % m != 0) throw ConfigError("max_rounds: m must divide p");
    return max_matches(s, u, c) * (2 * ceil_log2(p / m) + 1);
}

double comm_upper_bound(std::int64_t p, int m, int s, int u, int c, int alphabet_log2) {
    if (m < 1 || p < 1 || p % m != 0) throw ConfigError("comm_upper_bound: m must divide p");
    if (u < 1) throw ConfigError("comm_upper_bound: u must be >= 1");
    if (s == 0 || u > s) return 0.0;
    const double cbar = std::max(1, c);
    const double matches = static_cast<double>(s) - cbar * (u - 1);
    const double height = ceil_log2(p / m);
    const double k = alphabet_log2;
    return matches * ((1.0 + k) * height + (s + (cbar + 2.0) * u - 3.0) / 2.0) -
           cbar * (s - u + 1.0) / 2.0;
}

double comm_asymptotic(std::int64_t p, int m, int s, int u, int c, int alphabet_log2,
                       int stragglers) {
    if (m < 1 || p < 1 || p % m != 0) throw ConfigError("comm_asymptotic: m must divide p");
    const int u_eff = u - stragglers;
    if (u_eff < 1) throw ConfigError("comm_asymptotic: u - stragglers must be >= 1");
    if (s == 0 || u_eff > s) return 0.0;
    const double cbar = std::max(1, c);
    const double matches = static_cast<double>(s) - cbar * (u_eff - 1);
    return matches * (1.0 + alphabet_log2) * ceil_log2(p / m);
}

double overhead_ratio_limit(int s, int u, int alphabet_log2) {
    if (u < 1 || s < u) throw ConfigError("overhead_ratio_limit needs 1 <= u <= s");
    const int div = s / u;
    const int mod = s % u;
    return (1.0 + alphabet_log2) * (1.0 + static_cast<double>(mod) / static_cast<double>(div));
}

BoundSet evaluate_bounds(std::int64_t p, int m, int s, int u, int alphabet_log2,
                         int stragglers) {
    BoundSet b;
    b.c_min = min_local_comps(s, u, stragglers);
    b.c_max = min_local_comps(s, u, 0);
    b.kappa_lower = comm_lower_bound(p, m, s, u, stragglers);
    b.r_max = max_rounds(p, m, s, u, b.c_max);
    b.kappa_upper = comm_upper_bound(p, m, s, u, b.c_max, alphabet_log2);
    b.kappa_asymptotic = comm_asymptotic(p, m, s, u, b.c_max, alphabet_log2, stragglers);
    if (u <= s && s / u >= 1) b.ratio_limit = overhead_ratio_limit(s, u, alphabet_log2);
    return b;
}

BudgetCheck check_budgets(int s, int u, std::int64_t p, int m, int alphabet_log2, int stragglers,
                          int measured_c, int measured_rounds, int measured_matches,
                          double measured_kappa_bits) {
    BudgetCheck out;
    std::ostringstream msg;
    if (u - stragglers < 1) throw ConfigError("check_budgets: u - stragglers must be >= 1");

    const int c_cap = (s == 0) ? 0 : s / (u - stragglers);
    if (measured_c > c_cap) {
        out.ok = false;
        msg << "c=" << measured_c << " exceeds floor(s/(u-s'))=" << c_cap << "; ";
    }
    // The round/match/bit budgets depend on how many stragglers share a group
    // with the malicious workers, which can be anywhere in [0, s']; take the
    // worst case over that range. With s' = 0 this is the plain formula.
    int match_cap = 0, r_cap = 0;
    double kappa_cap = 0.0;
    for (int sigma = 0; sigma <= stragglers; ++sigma) {
        match_cap = std::max(match_cap, max_matches(s, u - sigma, measured_c));
        r_cap = std::max(r_cap, max_rounds(p, m, s, u - sigma, measured_c));
        kappa_cap =
            std::max(kappa_cap, comm_upper_bound(p, m, s, u - sigma, measured_c, alphabet_log2));
    }
    if (measured_matches > match_cap) {
        out.ok = false;
        msg << "matches=" << measured_matches << " exceeds " << match_cap << "; ";
    }
    if (measured_rounds > r_cap) {
        out.ok = false;
        msg << "r=" << measured_rounds << " exceeds " << r_cap << "; ";
    }
    if (measured_kappa_bits > kappa_cap) {
        out.ok = false;
        msg << "kappa=" << measured_kappa_bits << " exceeds " << kappa_cap << "; ";
    }
    out.detail = msg.str();
    return out;
}

}  // namespace bgc
