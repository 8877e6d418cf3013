#include "bgc/figures.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "bgc/bounds.hpp"

namespace bgc {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::string fig2_csv() {
    std::ostringstream os;
    os << "rho_norm,c\n";
    for (int i = 101; i <= 300; ++i) {
        const double rho = i / 100.0;
        const int c = (rho > 2.0) ? 0 : static_cast<int>(std::floor(1.0 / (rho - 1.0)));
        os << fmt(rho) << ',' << c << "\n";
    }
    return os.str();
}

std::string fig3_csv(int n, int alphabet_log2) {
    std::ostringstream os;
    os << "s,u,p,kappa_upper_bits,kappa_lower_bits\n";
    const int m = 1;
    for (int s = n / 2; s <= n - 1; ++s) {  // 50% .. 90% malicious for n = 10
        const int u = n - s;
        const int c = s / u;
        for (int j = 4; j <= 20; ++j) {
            const std::int64_t p = std::int64_t{1} << j;
            if (c > p) continue;
            os << s << ',' << u << ',' << p << ','
               << fmt(comm_upper_bound(p, m, s, u, c, alphabet_log2)) << ','
               << fmt(comm_lower_bound(p, m, s, u)) << "\n";
        }
    }
    return os.str();
}

double scheme_vs_baseline_ratio(int s, int u, std::int64_t p, std::int64_t d, int alphabet_log2) {
    const int m = 1;
    const double k = alphabet_log2;
    const double baseline = (2.0 * s + 1.0) * static_cast<double>(d) * k;
    if (u > s) return ((s + u) * static_cast<double>(d) * k) / baseline;
    const int c = s / u;
    const double total =
        (s + u) * static_cast<double>(d) * k + comm_upper_bound(p, m, s, u, c, alphabet_log2);
    return total / baseline;
}

std::string fig4_csv(int s, std::int64_t p, std::int64_t d, int alphabet_log2) {
    std::ostringstream os;
    os << "u,c,total_bits,ratio_to_baseline\n";
    const int m = 1;
    const double k = alphabet_log2;
    for (int u = 1; u <= s + 1; ++u) {
        const int c = (u > s) ? 0 : s / u;
        const double overhead =
            (u > s) ? 0.0 : comm_upper_bound(p, m, s, u, c, alphabet_log2);
        const double total = (s + u) * static_cast<double>(d) * k + overhead;
        os << u << ',' << c << ',' << fmt(total) << ','
           << fmt(scheme_vs_baseline_ratio(s, u, p, d, alphabet_log2)) << "\n";
    }
    return os.str();
}

std::string fig5_csv(int m, int alphabet_log2) {
    std::ostringstream os;
    os << "s,u,p,ratio,limit\n";
    const int pairs[4][2] = {{1, 1}, {3, 2}, {5, 3}, {9, 5}};
    for (const auto& su : pairs) {
        const int s = su[0], u = su[1];
        const int c = s / u;
        const double limit = overhead_ratio_limit(s, u, alphabet_log2);
        for (int j = 4; j <= 28; ++j) {
            const std::int64_t p = static_cast<std::int64_t>(m) << j;
            const double upper = comm_upper_bound(p, m, s, u, c, alphabet_log2);
            const double lower = comm_lower_bound(p, m, s, u);
            os << s << ',' << u << ',' << p << ',' << fmt(upper / lower) << ',' << fmt(limit)
               << "\n";
        }
    }
    return os.str();
}

}  // namespace bgc
