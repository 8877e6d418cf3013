#include "bgc/proptest.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "bgc/harness.hpp"
#include "bgc/rng.hpp"

namespace bgc {

std::string PropTestReport::summary() const {
    std::ostringstream os;
    os << "proptest: " << runs << " runs, " << failures << " failures ("
       << symmetrization_runs << " symmetrization, " << straggler_runs << " with stragglers, "
       << determinism_checks << " determinism re-runs, " << multigroup_checks
       << " multi-group comparisons)";
    return os.str();
}

namespace {

struct Ctx {
    const PropTestOptions& opt;
    PropTestReport& report;
    std::ostream* log;
    bool dumped = false;
};

std::string describe(const SystemConfig& cfg, const AttackSpec& attack) {
    std::ostringstream os;
    os << "n=" << cfg.n_workers << " s=" << cfg.n_malicious << " u=" << cfg.honest_per_group
       << " m=" << cfg.n_groups << " p=" << cfg.n_samples << " d=" << cfg.dim
       << " k=" << cfg.alphabet.bits_per_symbol() << " seed=" << cfg.rng_seed
       << " attack=" << attack_label(attack) << " malicious=[";
    for (std::size_t i = 0; i < attack.malicious_workers.size(); ++i)
        os << (i ? " " : "") << attack.malicious_workers[i];
    os << "] stragglers=[";
    for (std::size_t i = 0; i < attack.stragglers.size(); ++i)
        os << (i ? " " : "") << attack.stragglers[i];
    os << "]";
    return os.str();
}

void fail(Ctx& ctx, const SystemConfig& cfg, const AttackSpec& attack, const RunResult* result,
          const std::string& why) {
    ++ctx.report.failures;
    std::string msg = why + " @ " + describe(cfg, attack);
    if (result && !ctx.dumped && !ctx.opt.dump_path.empty()) {
        std::ofstream os(ctx.opt.dump_path, std::ios::trunc);
        if (os) {
            result->transcript.write_jsonl(os);
            msg += " [transcript: " + ctx.opt.dump_path + "]";
            ctx.dumped = true;
        }
    }
    if (ctx.report.messages.size() < 25) ctx.report.messages.push_back(msg);
    if (ctx.log) *ctx.log << "FAIL: " << msg << "\n";
}

// One simulated run plus the full assertion set.
void run_one(Ctx& ctx, SystemConfig cfg, const AttackSpec& attack) {
    ++ctx.report.runs;

    const GradientStore truth = make_run_gradients(cfg);
    PreparedAttack prepared;
    RunResult result;
    try {
        prepared = prepare_attack(cfg, attack, truth);
        result = run_scheme(cfg, prepared, truth);
    } catch (const std::exception& e) {
        fail(ctx, cfg, attack, nullptr, std::string("exception: ") + e.what());
        return;
    }
    const RunMetrics& mx = result.metrics;

    if (!mx.correct) fail(ctx, cfg, attack, &result, "decoded gradient != true gradient");

    for (int w : result.suspects)
        if (prepared.is_honest(w))
            fail(ctx, cfg, attack, &result, "honest worker " + std::to_string(w) + " suspected");

    const int s_prime = static_cast<int>(prepared.stragglers.size());
    BudgetCheck budget = check_budgets(cfg.n_malicious, cfg.honest_per_group, cfg.n_samples,
                                       cfg.n_groups, cfg.alphabet.bits_per_symbol(), s_prime,
                                       mx.local_comps, mx.rounds, mx.matches,
                                       static_cast<double>(mx.kappa_bits));
    if (!budget.ok) fail(ctx, cfg, attack, &result, "budget violation: " + budget.detail);

    if (mx.replication != static_cast<double>(cfg.n_malicious + cfg.honest_per_group))
        fail(ctx, cfg, attack, &result, "replication factor != s+u");

    if (attack.kind == AttackKind::None) {
        if (mx.kappa_bits != 0 || mx.matches != 0 || mx.local_comps != 0 || mx.rounds != 0)
            fail(ctx, cfg, attack, &result, "honest run sent protocol messages");
    }

    if (attack.kind == AttackKind::Symmetrization && !prepared.plans.empty()) {
        ++ctx.report.symmetrization_runs;
        int expected_c = 0;
        for (const auto& plan : prepared.plans)
            expected_c += plan.collapse_index ? 1 : static_cast<int>(plan.corrupted_indices.size());

        if (prepared.plans.size() == 1) {
            // One attacked group: every disputed sample must be adjudicated by
            // a local computation, and their number is forced exactly.
            for (int idx : prepared.plans.front().effective_disagreement())
                if (!result.transcript.has_local_comp(idx))
                    fail(ctx, cfg, attack, &result,
                         "disputed sample " + std::to_string(idx) + " never computed locally");
            if (mx.local_comps != expected_c)
                fail(ctx, cfg, attack, &result,
                     "c=" + std::to_string(mx.local_comps) + " != forced " +
                         std::to_string(expected_c));
            // Full-strength attack also witnesses the communication lower bound.
            if (s_prime == 0 &&
                static_cast<int>(prepared.malicious.size()) == cfg.n_malicious) {
                const double lower = comm_lower_bound(cfg.n_samples, cfg.n_groups,
                                                      cfg.n_malicious, cfg.honest_per_group);
                if (static_cast<double>(mx.kappa_bits) < lower)
                    fail(ctx, cfg, attack, &result, "kappa below the converse bound");
            }
        } else {
            // Several attacked groups: later groups are defused by the proven
            // count carried over, so only the first group's disputes are
            // necessarily adjudicated.
            for (int idx : prepared.plans.front().effective_disagreement())
                if (!result.transcript.has_local_comp(idx))
                    fail(ctx, cfg, attack, &result,
                         "first group's disputed sample " + std::to_string(idx) +
                             " never computed locally");
            if (mx.local_comps > expected_c)
                fail(ctx, cfg, attack, &result,
                     "c=" + std::to_string(mx.local_comps) + " exceeds forced total " +
                         std::to_string(expected_c));
        }
    }

    if (s_prime > 0) ++ctx.report.straggler_runs;

    if (ctx.opt.determinism_stride > 0 &&
        ctx.report.runs % ctx.opt.determinism_stride == 0) {
        ++ctx.report.determinism_checks;
        RunResult again = run_scheme(cfg, prepare_attack(cfg, attack, truth), truth);
        if (again.transcript.to_jsonl() != result.transcript.to_jsonl() ||
            again.decoded != result.decoded)
            fail(ctx, cfg, attack, &result, "re-run transcript differs (nondeterminism)");
    }
}

std::vector<std::vector<int>> placements(Ctx& ctx, const SystemConfig& cfg, Rng& rng) {
    std::vector<std::vector<int>> out;
    const int n = cfg.n_workers, s = cfg.n_malicious;
    if (s == 0) return {{}};

    // count C(n, s) without overflow concerns (n <= 12)
    long long comb = 1;
    for (int i = 1; i <= s; ++i) comb = comb * (n - s + i) / i;

    if (comb <= ctx.opt.max_exhaustive_placements) {
        std::vector<int> idx(static_cast<std::size_t>(s));
        for (int i = 0; i < s; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
        while (true) {
            out.push_back(idx);
            int i = s - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - s + i + 1) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < s; ++j)
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    } else {
        out.push_back({});  // default placement: first s workers of group 1
        for (int r = 0; r < ctx.opt.random_placements; ++r)
            out.push_back(rng.sample_sorted(1, n, s));
    }
    return out;
}

void sweep_attacks(Ctx& ctx, const SystemConfig& base, Rng& rng) {
    std::vector<AttackSpec> attacks;
    attacks.push_back({});  // none
    if (base.n_malicious >= 1) {
        const int c_needed = base.n_malicious / base.honest_per_group;
        if (c_needed <= base.samples_per_group()) {
            for (CollapseMode mode :
                 {CollapseMode::Random, CollapseMode::ForceOn, CollapseMode::ForceOff}) {
                AttackSpec a;
                a.kind = AttackKind::Symmetrization;
                a.collapse = mode;
                attacks.push_back(a);
            }
        }
        AttackSpec stall;
        stall.kind = AttackKind::AlignAndStall;
        attacks.push_back(stall);
        for (double rate : {0.3, 1.0}) {
            AttackSpec rnd;
            rnd.kind = AttackKind::RandomCorruption;
            rnd.corruption_rate = rate;
            attacks.push_back(rnd);
        }
    }

    const auto places = placements(ctx, base, rng);
    for (const AttackSpec& proto : attacks) {
        for (const auto& placement : places) {
            for (int rep = 0; rep < ctx.opt.seeds_per_case; ++rep) {
                SystemConfig cfg = base;
                cfg.rng_seed = derive_seed(ctx.opt.base_seed,
                                           0xc0ffee00ull + static_cast<std::uint64_t>(
                                                               ctx.report.runs + rep));
                AttackSpec attack = proto;
                attack.malicious_workers = placement;
                if (proto.kind == AttackKind::None) attack.malicious_workers.clear();
                run_one(ctx, cfg, attack);
            }
            if (proto.kind == AttackKind::None) break;  // placements are irrelevant
        }
    }

    // Straggler variants: s' < u silent workers on top of the malicious set.
    if (base.honest_per_group >= 2 && base.n_malicious >= 1) {
        for (int s_prime = 1; s_prime < base.honest_per_group; ++s_prime) {
            for (AttackKind kind : {AttackKind::Symmetrization, AttackKind::AlignAndStall,
                                    AttackKind::RandomCorruption}) {
                if (kind == AttackKind::Symmetrization &&
                    base.n_malicious / base.honest_per_group > base.samples_per_group())
                    continue;
                for (int rep = 0; rep < ctx.opt.seeds_per_case; ++rep) {
                    SystemConfig cfg = base;
                    cfg.rng_seed = derive_seed(ctx.opt.base_seed,
                                               0x57726100ull + static_cast<std::uint64_t>(
                                                                   ctx.report.runs + rep));
                    AttackSpec attack;
                    attack.kind = kind;
                    attack.corruption_rate = 1.0;
                    // default malicious 1..s; stragglers drawn from the rest
                    std::vector<int> pool;
                    for (int w = cfg.n_malicious + 1; w <= cfg.n_workers; ++w) pool.push_back(w);
                    rng.shuffle(pool);
                    attack.stragglers.assign(pool.begin(), pool.begin() + s_prime);
                    std::sort(attack.stragglers.begin(), attack.stragglers.end());
                    run_one(ctx, cfg, attack);
                }
            }
        }
    }
}

// Spreading the malicious workers over several groups must never cost more
// uplink than the single-group placement at the same seeds. Restricted to
// u | s and power-of-two p/m, where the single-group kappa is structurally
// maximal and seed-independent.
void multigroup_pass(Ctx& ctx, int alphabet_log2) {
    struct Shape {
        int s, u, m;
    };
    const Shape shapes[] = {{2, 1, 2}, {3, 1, 2}, {4, 1, 2}, {5, 1, 2}, {2, 2, 2},
                            {4, 2, 2}, {2, 1, 3}, {3, 1, 3}, {2, 2, 3}};
    for (const Shape& sh : shapes) {
        const int n = sh.m * (sh.s + sh.u);
        if (n > 12) continue;
        SystemConfig cfg;
        cfg.n_workers = n;
        cfg.n_malicious = sh.s;
        cfg.honest_per_group = sh.u;
        cfg.n_groups = sh.m;
        cfg.n_samples = 8 * sh.m;
        cfg.dim = ctx.opt.dim;
        cfg.alphabet = Alphabet(alphabet_log2);

        for (AttackKind kind : {AttackKind::Symmetrization, AttackKind::AlignAndStall}) {
            for (int rep = 0; rep < 2; ++rep) {
                cfg.rng_seed = derive_seed(ctx.opt.base_seed, 0x6d670000ull +
                                                                  static_cast<std::uint64_t>(
                                                                      ctx.report.runs + rep));
                AttackSpec single;
                single.kind = kind;
                single.collapse = CollapseMode::ForceOff;

                const GradientStore truth = make_run_gradients(cfg);
                RunResult base = run_scheme(cfg, prepare_attack(cfg, single, truth), truth);
                ++ctx.report.runs;

                // spread: malicious round-robin over groups
                AttackSpec spread = single;
                const int gs = cfg.group_size();
                for (int i = 0; i < sh.s; ++i) {
                    const int g = i % sh.m;
                    const int within = i / sh.m;
                    spread.malicious_workers.push_back(g * gs + within + 1);
                }
                std::sort(spread.malicious_workers.begin(), spread.malicious_workers.end());
                RunResult multi = run_scheme(cfg, prepare_attack(cfg, spread, truth), truth);
                ++ctx.report.runs;
                ++ctx.report.multigroup_checks;

                if (multi.metrics.kappa_bits > base.metrics.kappa_bits)
                    fail(ctx, cfg, spread, &multi,
                         "multi-group kappa " + std::to_string(multi.metrics.kappa_bits) +
                             " exceeds single-group " +
                             std::to_string(base.metrics.kappa_bits));
                if (!multi.metrics.correct || !base.metrics.correct)
                    fail(ctx, cfg, spread, &multi, "multigroup pass decode mismatch");
            }
        }
    }
}

}  // namespace

PropTestReport run_property_suite(const PropTestOptions& opt, std::ostream* log) {
    PropTestReport report;
    Ctx ctx{opt, report, log};
    Rng rng(derive_seed(opt.base_seed, 0x70726f70ull));

    for (int k : {2, 8}) {
        for (int pg : {5, 8, 16}) {
            for (int u = 1; u <= 3; ++u) {
                for (int m = 1; m <= 3; ++m) {
                    for (int s = 0; s <= 5; ++s) {
                        const int n = m * (s + u);
                        if (n > 12) continue;
                        SystemConfig cfg;
                        cfg.n_workers = n;
                        cfg.n_malicious = s;
                        cfg.honest_per_group = u;
                        cfg.n_groups = m;
                        cfg.n_samples = pg * m;
                        cfg.dim = opt.dim;
                        cfg.alphabet = Alphabet(k);
                        sweep_attacks(ctx, cfg, rng);
                    }
                }
            }
        }
        if (opt.multigroup_compare) multigroup_pass(ctx, k);
    }

    if (report.runs < opt.min_runs && log)
        *log << "warning: only " << report.runs << " runs executed (< " << opt.min_runs << ")\n";
    if (log) *log << report.summary() << "\n";
    return report;
}

}  // namespace bgc
