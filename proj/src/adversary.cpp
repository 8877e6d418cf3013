#include "bgc/adversary.hpp"

#include <algorithm>
#include <set>

#include "bgc/rng.hpp"

namespace bgc {

const char* to_string(AttackKind k) {
    switch (k) {
        case AttackKind::None: return "none";
        case AttackKind::Symmetrization: return "symmetrization";
        case AttackKind::AlignAndStall: return "align_and_stall";
        case AttackKind::RandomCorruption: return "random";
        case AttackKind::AdaptiveCustom: return "adaptive_custom";
    }
    return "?";
}

AttackKind attack_kind_from_string(const std::string& s) {
    if (s == "none") return AttackKind::None;
    if (s == "symmetrization") return AttackKind::Symmetrization;
    if (s == "align_and_stall" || s == "align-and-stall") return AttackKind::AlignAndStall;
    if (s == "random" || s == "random_corruption") return AttackKind::RandomCorruption;
    if (s == "adaptive_custom") return AttackKind::AdaptiveCustom;
    throw ConfigError("unknown attack kind: " + s);
}

std::vector<int> AttackSpec::resolved_malicious(const SystemConfig& cfg) const {
    if (kind == AttackKind::None) return {};
    std::vector<int> out = malicious_workers;
    if (out.empty()) {
        for (int j = 1; j <= cfg.n_malicious; ++j) out.push_back(j);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void AttackSpec::validate(const SystemConfig& cfg) const {
    const auto mal = resolved_malicious(cfg);
    if (static_cast<int>(mal.size()) > cfg.n_malicious)
        throw ConfigError("attack controls more than s workers");
    std::set<int> seen;
    for (int j : mal) {
        if (j < 1 || j > cfg.n_workers) throw ConfigError("malicious worker id out of range");
        if (!seen.insert(j).second) throw ConfigError("duplicate malicious worker id");
    }
    for (int j : stragglers) {
        if (j < 1 || j > cfg.n_workers) throw ConfigError("straggler id out of range");
        if (seen.count(j)) throw ConfigError("straggler set must be disjoint from malicious set");
    }
    if (kind == AttackKind::RandomCorruption &&
        (corruption_rate < 0.0 || corruption_rate > 1.0))
        throw ConfigError("corruption rate must be in [0, 1]");
    if (kind == AttackKind::AdaptiveCustom && !custom)
        throw ConfigError("adaptive_custom attack needs a callback");
}

std::vector<int> SymmetrizationPlan::effective_disagreement() const {
    if (empty()) return {};
    if (collapse_index) return {*collapse_index};
    return corrupted_indices;
}

std::vector<int> PreparedAttack::disputed_samples() const {
    std::vector<int> out;
    for (const auto& p : plans) {
        auto d = p.effective_disagreement();
        out.insert(out.end(), d.begin(), d.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool PreparedAttack::is_malicious(int worker) const {
    return std::binary_search(malicious.begin(), malicious.end(), worker);
}

bool PreparedAttack::is_straggler(int worker) const {
    return std::binary_search(stragglers.begin(), stragglers.end(), worker);
}

namespace {

// Uniform wrong value: differs from the truth in at least one coordinate.
GradientVec draw_wrong_value(const Alphabet& a, std::span<const Symbol> truth, Rng& rng) {
    GradientVec v(truth.size());
    for (auto& x : v) x = a.mask(rng.next());
    if (std::equal(v.begin(), v.end(), truth.begin())) v[0] = a.add(v[0], 1);
    return v;
}

GradientVec delta_of(const Alphabet& a, std::span<const Symbol> truth, const GradientVec& v) {
    GradientVec d(v);
    sub_in_place(a, d, truth);
    return d;
}

// Wrong value whose offset from the truth differs from all `used` offsets.
// Distinct offsets keep distinct subgroups in distinct agreement classes, so
// every disputed index really forces its own adjudication. Falls back to a
// duplicate only if the alphabet is too small to hold enough distinct offsets.
GradientVec draw_wrong_value_distinct(const Alphabet& a, std::span<const Symbol> truth, Rng& rng,
                                      std::set<GradientVec>& used) {
    for (int attempt = 0; attempt < 256; ++attempt) {
        GradientVec v = draw_wrong_value(a, truth, rng);
        GradientVec d = delta_of(a, truth, v);
        if (used.insert(d).second) return v;
    }
    // systematic sweep over single-coordinate offsets
    for (std::size_t coord = 0; coord < truth.size(); ++coord) {
        for (std::uint64_t val = 1; val < a.size(); ++val) {
            GradientVec d(truth.size(), 0u);
            d[coord] = static_cast<Symbol>(val);
            if (used.insert(d).second) {
                GradientVec v(truth.begin(), truth.end());
                v[coord] = a.add(v[coord], d[coord]);
                return v;
            }
        }
    }
    return draw_wrong_value(a, truth, rng);
}

}  // namespace

SymmetrizationPlan plan_symmetrization(const SystemConfig& cfg,
                                       std::span<const int> malicious_in_group, int group_id,
                                       const GradientStore& truth, Rng& rng, CollapseMode mode) {
    SymmetrizationPlan plan;
    plan.group_id = group_id;
    const int sg = static_cast<int>(malicious_in_group.size());
    const int u = cfg.honest_per_group;
    const int n_disputed = sg / u;
    if (n_disputed == 0) return plan;  // u > s_g: the attack degenerates

    const SampleInterval iv = samples_of_group(cfg, group_id);
    if (n_disputed > iv.size())
        throw ConfigError("symmetrization needs floor(s/u) <= p/m disputable samples");
    plan.corrupted_indices = rng.sample_sorted(iv.lo, iv.hi, n_disputed);

    const bool collapse = (mode == CollapseMode::ForceOn) ||
                          (mode == CollapseMode::Random && rng.coin());

    if (collapse) {
        const int pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_disputed)));
        const int idx = plan.corrupted_indices[static_cast<std::size_t>(pick)];
        plan.collapse_index = idx;
        GradientVec wrong = draw_wrong_value(cfg.alphabet, truth.row(idx), rng);
        plan.corrupted_values[idx] = wrong;
        for (int w : malicious_in_group) plan.worker_overrides[w][idx] = wrong;
        return plan;
    }

    std::vector<int> order(malicious_in_group.begin(), malicious_in_group.end());
    rng.shuffle(order);
    for (int l = 0; l < n_disputed; ++l) {
        std::vector<int> sub(order.begin() + static_cast<std::ptrdiff_t>(l) * u,
                             order.begin() + static_cast<std::ptrdiff_t>(l + 1) * u);
        std::sort(sub.begin(), sub.end());
        plan.subgroups.push_back(std::move(sub));
    }
    plan.remainder.assign(order.begin() + static_cast<std::ptrdiff_t>(n_disputed) * u,
                          order.end());
    std::sort(plan.remainder.begin(), plan.remainder.end());

    std::set<GradientVec> used_offsets;
    for (int l = 0; l < n_disputed; ++l) {
        const int idx = plan.corrupted_indices[static_cast<std::size_t>(l)];
        GradientVec wrong =
            draw_wrong_value_distinct(cfg.alphabet, truth.row(idx), rng, used_offsets);
        plan.corrupted_values[idx] = wrong;
        for (int w : plan.subgroups[static_cast<std::size_t>(l)])
            plan.worker_overrides[w][idx] = plan.corrupted_values[idx];
    }

    // The leftover subgroup mimics either the honest workers or a uniformly
    // chosen subgroup (fair coin per run, drawn from the attack stream).
    if (!plan.remainder.empty()) {
        plan.remainder_mimics_honest = rng.coin();
        if (!plan.remainder_mimics_honest) {
            plan.remainder_copies_subgroup =
                static_cast<int>(rng.below(static_cast<std::uint64_t>(n_disputed)));
            const int idx =
                plan.corrupted_indices[static_cast<std::size_t>(plan.remainder_copies_subgroup)];
            for (int w : plan.remainder) plan.worker_overrides[w][idx] = plan.corrupted_values[idx];
        } else {
            for (int w : plan.remainder) plan.worker_overrides[w];  // present, no overrides
        }
    }
    return plan;
}

std::map<int, std::map<int, GradientVec>> plan_align_and_stall(
    const SystemConfig& cfg, std::span<const int> malicious_in_group, int group_id,
    const GradientStore& truth, Rng& rng) {
    std::map<int, std::map<int, GradientVec>> overrides;
    if (malicious_in_group.empty()) return overrides;
    const SampleInterval iv = samples_of_group(cfg, group_id);
    const int idx = iv.lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(iv.size())));
    GradientVec wrong = draw_wrong_value(cfg.alphabet, truth.row(idx), rng);
    for (int w : malicious_in_group) overrides[w][idx] = wrong;
    return overrides;
}

std::map<int, std::map<int, GradientVec>> plan_random(const SystemConfig& cfg,
                                                      std::span<const int> malicious,
                                                      const GradientStore& truth, Rng& rng,
                                                      double rate) {
    if (rate < 0.0 || rate > 1.0) throw ConfigError("corruption rate must be in [0, 1]");
    std::map<int, std::map<int, GradientVec>> overrides;
    for (int w : malicious) {
        const SampleInterval iv = samples_of_worker(cfg, w);
        auto& mine = overrides[w];
        for (int i = iv.lo; i <= iv.hi; ++i)
            if (rng.unit() < rate) mine[i] = draw_wrong_value(cfg.alphabet, truth.row(i), rng);
    }
    return overrides;
}

PreparedAttack prepare_attack(const SystemConfig& cfg, const AttackSpec& attack,
                              const GradientStore& truth) {
    cfg.validate();
    attack.validate(cfg);

    PreparedAttack out;
    out.name = to_string(attack.kind);
    out.malicious = attack.resolved_malicious(cfg);
    out.stragglers = attack.stragglers;
    std::sort(out.stragglers.begin(), out.stragglers.end());

    out.behaviors.resize(static_cast<std::size_t>(cfg.n_workers) + 1);
    for (int j = 1; j <= cfg.n_workers; ++j)
        out.behaviors[static_cast<std::size_t>(j)] =
            WorkerBehavior::honest(&truth, samples_of_worker(cfg, j));

    const std::uint64_t seed =
        attack.rng_seed != 0 ? attack.rng_seed : derive_seed(cfg.rng_seed, 0x61746bull);  // "atk"

    std::vector<std::vector<int>> per_group(static_cast<std::size_t>(cfg.n_groups) + 1);
    for (int w : out.malicious) per_group[static_cast<std::size_t>(group_of(cfg, w))].push_back(w);

    auto install = [&](const std::map<int, std::map<int, GradientVec>>& overrides, bool stall) {
        for (const auto& [w, table_overrides] : overrides) {
            ClaimTable t(&truth, samples_of_worker(cfg, w));
            for (const auto& [sample, value] : table_overrides) t.override_claim(sample, value);
            out.behaviors[static_cast<std::size_t>(w)] =
                WorkerBehavior::from_table(std::move(t), stall);
        }
    };

    switch (attack.kind) {
        case AttackKind::None:
            break;
        case AttackKind::Symmetrization:
            for (int g = 1; g <= cfg.n_groups; ++g) {
                const auto& mal = per_group[static_cast<std::size_t>(g)];
                if (mal.empty()) continue;
                Rng rng(derive_seed(seed, static_cast<std::uint64_t>(g)));
                SymmetrizationPlan plan =
                    plan_symmetrization(cfg, mal, g, truth, rng, attack.collapse);
                install(plan.worker_overrides, false);
                if (!plan.empty()) out.plans.push_back(std::move(plan));
            }
            break;
        case AttackKind::AlignAndStall:
            for (int g = 1; g <= cfg.n_groups; ++g) {
                const auto& mal = per_group[static_cast<std::size_t>(g)];
                if (mal.empty()) continue;
                Rng rng(derive_seed(seed, static_cast<std::uint64_t>(g)));
                install(plan_align_and_stall(cfg, mal, g, truth, rng), true);
            }
            break;
        case AttackKind::RandomCorruption: {
            Rng rng(seed);
            install(plan_random(cfg, out.malicious, truth, rng, attack.corruption_rate), false);
            break;
        }
        case AttackKind::AdaptiveCustom:
            for (int w : out.malicious) {
                WorkerBehavior b;
                b.kind = WorkerBehavior::Kind::Adaptive;
                b.adaptive = attack.custom;
                b.table.emplace(&truth, samples_of_worker(cfg, w));
                b.malicious = true;
                out.behaviors[static_cast<std::size_t>(w)] = std::move(b);
            }
            break;
    }

    for (int w : out.malicious) out.behaviors[static_cast<std::size_t>(w)].malicious = true;
    for (int w : out.stragglers)
        out.behaviors[static_cast<std::size_t>(w)] = WorkerBehavior::straggler();
    return out;
}

}  // namespace bgc
