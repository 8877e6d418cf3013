#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bgc/adversary.hpp"

namespace bgc {

// Desk-scale quantized gradient descent on a synthetic least-squares problem.
// Each iteration's full gradient is recovered through the protocol (or by
// direct summation for the baseline); since recovery is exact, the attacked
// trajectory is bit-identical to the attack-free one.
struct DemoConfig {
    int dim = 8;       // d
    int samples = 16;  // p
    int iters = 20;    // T
    double learning_rate = 0.05;
    int alphabet_log2 = 16;
    // Fixed-point quantizer: clamp-and-round of v*quant_scale into the
    // symmetric range [-limit, limit] with limit = (2^(k-1)-1)/p, so sums of p
    // quantized values never wrap. Symbols embed signed values as two's
    // complement in Z_{2^k}.
    double quant_scale = 256.0;
    std::uint64_t seed = 7;
    // protocol shape for the recovery step
    int s = 2;
    int u = 1;
    int m = 1;
};

struct DemoResult {
    std::vector<double> losses;               // per iteration
    std::vector<std::vector<double>> thetas;  // per iteration, length dim
    std::string csv;                          // iter,loss,theta_0..theta_{d-1}
};

Symbol quantize_to_symbol(double v, const Alphabet& a, double scale, int n_terms);
double dequantize_symbol(Symbol s, const Alphabet& a, double scale);

DemoResult run_demo_gd(const DemoConfig& cfg, const AttackSpec& attack, bool via_protocol);

}  // namespace bgc
