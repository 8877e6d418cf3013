#pragma once

#include <optional>
#include <vector>

#include "bgc/adversary.hpp"
#include "bgc/transcript.hpp"
#include "bgc/workers.hpp"

namespace bgc {

// Workers of one fractional-repetition group that sent identical initial
// responses. Members are sorted; classes are kept in canonical order by their
// smallest member id.
struct AgreementClass {
    GradientVec value;
    std::vector<int> members;
    int min_member() const { return members.empty() ? 0 : members.front(); }
};

// Per-group tournament state: the agreement classes still in play, the suspect
// set S, and the effective thresholds. Groups are processed sequentially, so a
// group formed after sigma workers were already proven malicious elsewhere
// runs with s_eff = s - sigma and at least u_base = u + sigma honest members.
// Workers whose response is shared by fewer than u_eff workers (and all silent
// workers) start out in S; a class supported by more than s_eff workers is
// accepted as honest outright.
struct Tournament {
    int group_id = 0;
    SampleInterval samples;
    std::vector<AgreementClass> classes;
    std::vector<int> suspects;
    std::vector<int> proven;  // suspects proven malicious (never silence-only)
    int s_eff = 0;
    int u_base = 1;
    int u_eff = 1;  // max(1, u_base - silent workers in this group)
    std::optional<std::size_t> accepted;  // early-accepted class index
    int matches = 0;
    int matches_aborted = 0;
    int local_comps = 0;
    int rounds = 0;  // rounds spent on this group

    bool decided() const { return accepted.has_value() || classes.size() <= 1; }
    const AgreementClass* survivor() const;
};

// Result of one bisection match. The challenger's leaf claim is bound by
// inference (transmitted or derived by subtraction), never re-transmitted.
// voter_bound is the voter's exactly inferable claim at the leaf; it is known
// only if the voter committed on every descent step.
struct MatchOutcome {
    bool aborted = false;
    int silent_worker = 0;
    int challenger = 0, voter = 0;
    int i_check = 0;
    int coord = 0;  // zeta
    Symbol claimed_leaf = 0;
    std::optional<Symbol> voter_bound;
    int steps = 0;
};

struct VoteTally {
    std::vector<int> committers;  // V, includes the challenger
    std::vector<int> rejectors;   // includes the voter (implied)
};

struct RunMetrics {
    int rounds = 0;           // r: protocol rounds, summed over groups
    int rounds_max_group = 0; // pipelined view: max over groups
    int local_comps = 0;      // c
    int matches = 0;          // completed + aborted
    int matches_aborted = 0;
    double replication = 0.0; // rho
    std::uint64_t kappa_bits = 0;
    std::uint64_t downlink_bits = 0;
    std::uint64_t initial_bits = 0;
    std::uint64_t total_uplink_bits = 0;  // initial + kappa
    bool correct = false;
};

struct RunResult {
    GradientVec decoded;
    RunMetrics metrics;
    Transcript transcript;
    std::vector<int> suspects;  // global S, sorted
};

// The main node: collects initial responses, forms agreement classes, runs the
// elimination tournament per group (sequentially), decodes, and keeps the full
// transcript with bit accounting. Single-threaded and deterministic; the
// per-group RNG streams are derived from (seed, group), so results do not
// depend on scheduling.
class MainNode {
public:
    MainNode(const SystemConfig& cfg, const std::vector<WorkerBehavior>& behaviors,
             const GradientStore& truth);

    RunResult run();

    // Individual protocol stages, exposed so tests can drive them piecewise.
    // proven_elsewhere is the number of workers already proven malicious in
    // previously processed groups.
    std::vector<std::optional<GradientVec>> collect_initial();
    Tournament form_groups(int group_id, const std::vector<std::optional<GradientVec>>& initial,
                           int proven_elsewhere = 0);
    MatchOutcome run_match(int w1, int w2, const GradientVec& z1, const GradientVec& z2,
                           Tournament& t);
    VoteTally final_voting_round(const MatchOutcome& m, Tournament& t, std::size_t c1,
                                 std::size_t c2);
    void resolve_match(const MatchOutcome& m, const VoteTally& v, Tournament& t, std::size_t c1,
                       std::size_t c2);
    void run_tournament(Tournament& t);

    GradientVec local_compute(int sample, int group, int round);

    const Transcript& transcript() const { return transcript_; }
    Transcript& transcript() { return transcript_; }
    int round() const { return round_; }

private:
    WorkerResponse query(int worker, const EncodingRequest& req, int group,
                         std::uint64_t downlink_bits);
    void suspect(Tournament& t, int worker);
    void eliminate(Tournament& t, const std::vector<int>& workers, std::size_t c1, std::size_t c2);
    void drop_thin_classes(Tournament& t);
    void canonicalize(Tournament& t);

    const SystemConfig& cfg_;
    const std::vector<WorkerBehavior>& behaviors_;
    const GradientStore& truth_;
    Transcript transcript_;
    int round_ = 0;
};

// Full pipeline: initial responses, per-group tournaments, decode, metrics.
RunResult run_scheme(const SystemConfig& cfg, const PreparedAttack& attack,
                     const GradientStore& truth);
RunResult run_scheme(const SystemConfig& cfg, const AttackSpec& attack,
                     const GradientStore& truth);

// Replication-(2s+1) majority baseline: group size must be 2s+1 (u = s+1);
// decodes by per-group majority over initial responses, no protocol rounds.
struct BaselineResult {
    GradientVec decoded;
    std::uint64_t total_bits = 0;
    bool correct = false;
};
BaselineResult draco_baseline(const SystemConfig& cfg, const AttackSpec& attack,
                              const GradientStore& truth);

}  // namespace bgc
