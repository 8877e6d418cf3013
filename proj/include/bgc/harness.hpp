#pragma once

#include <iosfwd>
#include <string>

#include "bgc/bounds.hpp"
#include "bgc/protocol.hpp"

namespace bgc {

// CSV header written by the `run` subcommand; one row per repetition.
inline constexpr const char* kRunCsvHeader =
    "n,s,u,m,p,d,k,attack,seed,c,r,kappa_bits,downlink_bits,matches,total_bits,correct";

// The attack label used in CSV rows ("symmetrization_collapse" etc.).
std::string attack_label(const AttackSpec& attack);

struct SingleRunOutcome {
    RunResult result;
    bool correct = false;
    bool budgets_ok = false;
    std::string budget_detail;
    bool honest_immune = false;
    std::vector<int> offending_honest;  // honest workers found in S, if any
    std::string csv_row;                // formatted per kRunCsvHeader
};

// Generates the seeded gradient dataset, resolves the attack, runs the scheme,
// verifies correctness / budgets / honest immunity, and formats the CSV row.
SingleRunOutcome execute_run(const SystemConfig& cfg, const AttackSpec& attack);

// Seeded dataset used by execute_run (exposed so callers can cross-check).
GradientStore make_run_gradients(const SystemConfig& cfg);

// Parsed `run` invocation: config file fields with CLI overrides applied.
struct RunInvocation {
    SystemConfig system;
    AttackSpec attack;
    int repetitions = 1;
    std::string out_path;         // empty: stdout
    std::string transcript_path;  // empty: no transcript dump
};

// Executes all repetitions (seed, seed+1, ...), writing CSV and the optional
// JSONL transcript of the last run. Returns the process exit code:
// 0 = all repetitions correct with budgets intact, 1 = violation.
int cmd_run(const RunInvocation& inv, std::ostream& err);

}  // namespace bgc
