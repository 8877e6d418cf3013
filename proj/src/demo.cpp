#include "bgc/demo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bgc/protocol.hpp"
#include "bgc/rng.hpp"

namespace bgc {

Symbol quantize_to_symbol(double v, const Alphabet& a, double scale, int n_terms) {
    const std::int64_t half = static_cast<std::int64_t>(a.size() / 2) - 1;
    const std::int64_t limit = std::max<std::int64_t>(1, half / std::max(1, n_terms));
    std::int64_t q = std::llround(v * scale);
    q = std::clamp(q, -limit, limit);
    return a.mask(static_cast<std::uint64_t>(q));
}

double dequantize_symbol(Symbol s, const Alphabet& a, double scale) {
    const std::int64_t half = static_cast<std::int64_t>(a.size() / 2);
    std::int64_t v = static_cast<std::int64_t>(s);
    if (v >= half) v -= static_cast<std::int64_t>(a.size());
    return static_cast<double>(v) / scale;
}

DemoResult run_demo_gd(const DemoConfig& demo, const AttackSpec& attack, bool via_protocol) {
    SystemConfig cfg;
    cfg.n_malicious = demo.s;
    cfg.honest_per_group = demo.u;
    cfg.n_groups = demo.m;
    cfg.n_workers = demo.m * (demo.s + demo.u);
    cfg.n_samples = demo.samples;
    cfg.dim = demo.dim;
    cfg.alphabet = Alphabet(demo.alphabet_log2);
    cfg.validate();

    // synthetic regression data: y_i = <x_i, theta*> + noise
    Rng data_rng(derive_seed(demo.seed, 0x64617461ull));
    const int p = demo.samples, d = demo.dim;
    std::vector<std::vector<double>> xs(static_cast<std::size_t>(p),
                                        std::vector<double>(static_cast<std::size_t>(d)));
    std::vector<double> ys(static_cast<std::size_t>(p));
    std::vector<double> theta_star(static_cast<std::size_t>(d));
    for (auto& v : theta_star) v = 2.0 * data_rng.unit() - 1.0;
    for (int i = 0; i < p; ++i) {
        double dot = 0.0;
        for (int j = 0; j < d; ++j) {
            xs[i][j] = 2.0 * data_rng.unit() - 1.0;
            dot += xs[i][j] * theta_star[static_cast<std::size_t>(j)];
        }
        ys[static_cast<std::size_t>(i)] = dot + 0.01 * (2.0 * data_rng.unit() - 1.0);
    }

    std::vector<double> theta(static_cast<std::size_t>(d), 0.0);
    DemoResult out;
    std::ostringstream csv;
    csv << "iter,loss";
    for (int j = 0; j < d; ++j) csv << ",theta_" << j;
    csv << "\n";

    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };

    for (int iter = 0; iter < demo.iters; ++iter) {
        // quantized partial gradients for the current iterate
        GradientStore grads(p, d);
        for (int i = 1; i <= p; ++i) {
            double residual = -ys[static_cast<std::size_t>(i - 1)];
            for (int j = 0; j < d; ++j)
                residual += xs[i - 1][j] * theta[static_cast<std::size_t>(j)];
            auto row = grads.row(i);
            for (int j = 0; j < d; ++j)
                row[static_cast<std::size_t>(j)] = quantize_to_symbol(
                    residual * xs[i - 1][j], cfg.alphabet, demo.quant_scale, p);
        }

        GradientVec total;
        if (via_protocol) {
            SystemConfig iter_cfg = cfg;
            iter_cfg.rng_seed = derive_seed(demo.seed, 0x69740000ull + iter);
            AttackSpec iter_attack = attack;
            if (iter_attack.rng_seed == 0)
                iter_attack.rng_seed = derive_seed(demo.seed, 0xa1700000ull + iter);
            RunResult r = run_scheme(iter_cfg, iter_attack, grads);
            if (!r.metrics.correct) throw ProtocolError("demo recovery produced a wrong gradient");
            total = std::move(r.decoded);
        } else {
            total = grads.sum_all(cfg.alphabet);
        }

        for (int j = 0; j < d; ++j) {
            const double grad_j =
                dequantize_symbol(total[static_cast<std::size_t>(j)], cfg.alphabet,
                                  demo.quant_scale);
            theta[static_cast<std::size_t>(j)] -= demo.learning_rate / p * grad_j;
        }

        double loss = 0.0;
        for (int i = 0; i < p; ++i) {
            double dot = 0.0;
            for (int j = 0; j < d; ++j) dot += xs[i][j] * theta[static_cast<std::size_t>(j)];
            const double r = dot - ys[static_cast<std::size_t>(i)];
            loss += 0.5 * r * r;
        }
        loss /= p;

        out.losses.push_back(loss);
        out.thetas.push_back(theta);
        csv << iter << ',' << fmt(loss);
        for (int j = 0; j < d; ++j) csv << ',' << fmt(theta[static_cast<std::size_t>(j)]);
        csv << "\n";
    }
    out.csv = csv.str();
    return out;
}

}  // namespace bgc
