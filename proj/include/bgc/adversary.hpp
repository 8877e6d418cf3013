#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bgc/workers.hpp"

namespace bgc {

enum class AttackKind { None, Symmetrization, AlignAndStall, RandomCorruption, AdaptiveCustom };

// Case selector for the probability-1/2 all-agree variant of the
// symmetrization attack. Random draws a fair coin from the attack stream;
// ForceOn / ForceOff pin the variant for converse experiments.
enum class CollapseMode { Random, ForceOn, ForceOff };

const char* to_string(AttackKind k);
AttackKind attack_kind_from_string(const std::string& s);

struct AttackSpec {
    AttackKind kind = AttackKind::None;
    // Controlled workers, |set| <= s. Empty means the default worst-case
    // placement: the first s workers of group 1.
    std::vector<int> malicious_workers;
    // Silent workers, disjoint from the malicious set.
    std::vector<int> stragglers;
    CollapseMode collapse = CollapseMode::Random;
    double corruption_rate = 0.5;  // RandomCorruption only
    std::uint64_t rng_seed = 0;    // 0: derive from SystemConfig::rng_seed
    AdaptiveFn custom;             // AdaptiveCustom only

    std::vector<int> resolved_malicious(const SystemConfig& cfg) const;
    void validate(const SystemConfig& cfg) const;
};

// One group's symmetrization plan: the disputed index set I~ of size
// floor(s_g/u), the size-u subgroups each corrupting one index, the remainder
// subgroup of s_g mod u workers, and the drawn wrong values.
struct SymmetrizationPlan {
    int group_id = 0;
    std::vector<int> corrupted_indices;            // I~, sorted
    std::vector<std::vector<int>> subgroups;       // floor(s_g/u) subgroups of size u
    std::vector<int> remainder;                    // s_g mod u workers
    bool remainder_mimics_honest = false;
    int remainder_copies_subgroup = -1;            // index into subgroups, -1 if honest-mimic
    std::optional<int> collapse_index;             // set iff the all-agree variant fired
    std::map<int, GradientVec> corrupted_values;   // disputed sample -> g''
    std::map<int, std::map<int, GradientVec>> worker_overrides;

    // The samples on which claims actually disagree: {collapse_index} under
    // the all-agree variant, the full I~ otherwise.
    std::vector<int> effective_disagreement() const;
    bool empty() const { return worker_overrides.empty(); }
};

// A resolved attack: one behavior per worker (slot 0 unused) plus plan
// metadata for assertions.
struct PreparedAttack {
    std::vector<WorkerBehavior> behaviors;
    std::vector<SymmetrizationPlan> plans;  // symmetrization runs only, one per attacked group
    std::vector<int> malicious;             // sorted
    std::vector<int> stragglers;            // sorted
    std::string name;

    std::vector<int> disputed_samples() const;  // union of plan disagreements
    bool is_malicious(int worker) const;
    bool is_straggler(int worker) const;
    bool is_honest(int worker) const { return !is_malicious(worker) && !is_straggler(worker); }
};

// Draws one group's plan. `malicious_in_group` must be sorted and contained in
// the group; u > |set| degenerates to an empty plan.
SymmetrizationPlan plan_symmetrization(const SystemConfig& cfg,
                                       std::span<const int> malicious_in_group, int group_id,
                                       const GradientStore& truth, Rng& rng, CollapseMode mode);

// All controlled workers in a group share one corrupted table (one wrong
// index) and reject every final-round proposal, so at most the representative
// is eliminated per match.
std::map<int, std::map<int, GradientVec>> plan_align_and_stall(
    const SystemConfig& cfg, std::span<const int> malicious_in_group, int group_id,
    const GradientStore& truth, Rng& rng);

// Each controlled worker independently corrupts each assigned gradient with
// probability `rate` (drawn value always differs from the truth).
std::map<int, std::map<int, GradientVec>> plan_random(const SystemConfig& cfg,
                                                      std::span<const int> malicious,
                                                      const GradientStore& truth, Rng& rng,
                                                      double rate);

PreparedAttack prepare_attack(const SystemConfig& cfg, const AttackSpec& attack,
                              const GradientStore& truth);

}  // namespace bgc
