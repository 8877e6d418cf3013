#include "bgc/harness.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "bgc/rng.hpp"

namespace bgc {

namespace {
constexpr std::uint64_t kGradientStream = 0x67726164ull;  // dataset stream tag
}

std::string attack_label(const AttackSpec& attack) {
    std::string label = to_string(attack.kind);
    if (attack.kind == AttackKind::Symmetrization) {
        if (attack.collapse == CollapseMode::ForceOn) label += "_collapse";
        if (attack.collapse == CollapseMode::ForceOff) label += "_nocollapse";
    }
    return label;
}

GradientStore make_run_gradients(const SystemConfig& cfg) {
    Rng rng(derive_seed(cfg.rng_seed, kGradientStream));
    return GradientStore::random(cfg.n_samples, cfg.dim, cfg.alphabet, rng);
}

SingleRunOutcome execute_run(const SystemConfig& cfg, const AttackSpec& attack) {
    cfg.validate();
    attack.validate(cfg);

    const GradientStore truth = make_run_gradients(cfg);
    const PreparedAttack prepared = prepare_attack(cfg, attack, truth);

    SingleRunOutcome out;
    out.result = run_scheme(cfg, prepared, truth);
    out.correct = out.result.metrics.correct;

    const RunMetrics& mx = out.result.metrics;
    const BudgetCheck budget = check_budgets(
        cfg.n_malicious, cfg.honest_per_group, cfg.n_samples, cfg.n_groups,
        cfg.alphabet.bits_per_symbol(), static_cast<int>(prepared.stragglers.size()),
        mx.local_comps, mx.rounds, mx.matches, static_cast<double>(mx.kappa_bits));
    out.budgets_ok = budget.ok;
    out.budget_detail = budget.detail;

    out.honest_immune = true;
    for (int w : out.result.suspects) {
        if (prepared.is_honest(w)) {
            out.honest_immune = false;
            out.offending_honest.push_back(w);
        }
    }

    std::ostringstream row;
    row << cfg.n_workers << ',' << cfg.n_malicious << ',' << cfg.honest_per_group << ','
        << cfg.n_groups << ',' << cfg.n_samples << ',' << cfg.dim << ','
        << cfg.alphabet.bits_per_symbol() << ',' << attack_label(attack) << ',' << cfg.rng_seed
        << ',' << mx.local_comps << ',' << mx.rounds << ',' << mx.kappa_bits << ','
        << mx.downlink_bits << ',' << mx.matches << ',' << mx.total_uplink_bits << ','
        << (out.correct ? 1 : 0);
    out.csv_row = row.str();
    return out;
}

int cmd_run(const RunInvocation& inv, std::ostream& err) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!inv.out_path.empty()) {
        file.open(inv.out_path, std::ios::trunc);
        if (!file) {
            err << "cannot open output file: " << inv.out_path << "\n";
            return 2;
        }
        os = &file;
    }

    *os << kRunCsvHeader << "\n";
    int exit_code = 0;
    for (int rep = 0; rep < inv.repetitions; ++rep) {
        SystemConfig cfg = inv.system;
        cfg.rng_seed = inv.system.rng_seed + static_cast<std::uint64_t>(rep);
        SingleRunOutcome run = execute_run(cfg, inv.attack);
        *os << run.csv_row << "\n";

        if (!run.correct) {
            err << "decode mismatch at seed " << cfg.rng_seed << "\n";
            exit_code = 1;
        }
        if (!run.budgets_ok) {
            err << "budget violation at seed " << cfg.rng_seed << ": " << run.budget_detail
                << "\n";
            exit_code = 1;
        }
        if (!run.honest_immune) {
            err << "honest worker suspected at seed " << cfg.rng_seed << "\n";
            exit_code = 1;
        }

        if (!inv.transcript_path.empty() && rep == inv.repetitions - 1) {
            std::ofstream ts(inv.transcript_path, std::ios::trunc);
            if (!ts) {
                err << "cannot open transcript file: " << inv.transcript_path << "\n";
                return 2;
            }
            run.result.transcript.write_jsonl(ts);
        }
    }
    return exit_code;
}

}  // namespace bgc
