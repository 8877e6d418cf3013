#include "bgc/protocol.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "bgc/rng.hpp"

namespace bgc {

const AgreementClass* Tournament::survivor() const {
    if (accepted) return &classes[*accepted];
    if (classes.size() == 1) return &classes.front();
    return nullptr;
}

MainNode::MainNode(const SystemConfig& cfg, const std::vector<WorkerBehavior>& behaviors,
                   const GradientStore& truth)
    : cfg_(cfg), behaviors_(behaviors), truth_(truth) {
    cfg_.validate();
    if (behaviors_.size() != static_cast<std::size_t>(cfg_.n_workers) + 1)
        throw ConfigError("behaviors must have one entry per worker (1-based)");
    if (truth_.n_samples() != cfg_.n_samples || truth_.dim() != cfg_.dim)
        throw ConfigError("gradient store does not match config");
}

WorkerResponse MainNode::query(int worker, const EncodingRequest& req, int group,
                               std::uint64_t downlink_bits) {
    PublicContext ctx{&transcript_, round_, group};
    WorkerResponse resp =
        respond(worker, behaviors_[static_cast<std::size_t>(worker)], req, cfg_.alphabet, ctx);

    TranscriptEntry e;
    e.round = round_;
    e.group = group;
    e.worker = worker;
    e.uplink_bits = uplink_bits(resp, cfg_.alphabet);
    e.downlink_bits = downlink_bits;
    e.silent = std::holds_alternative<SilentResponse>(resp);
    if (std::holds_alternative<PartialSumReq>(req)) {
        const auto& r = std::get<PartialSumReq>(req);
        e.kind = MsgKind::PartialSum;
        e.lo = r.lo;
        e.hi = r.hi;
        e.coord = r.coord;
        if (std::holds_alternative<SymbolResponse>(resp))
            e.value = std::get<SymbolResponse>(resp).value;
        else if (!e.silent)
            throw ProtocolError("worker " + std::to_string(worker) +
                                " sent a malformed partial-sum response");
    } else if (std::holds_alternative<VoteReq>(req)) {
        const auto& r = std::get<VoteReq>(req);
        e.kind = MsgKind::Vote;
        e.lo = r.lo;
        e.hi = r.hi;
        e.coord = r.coord;
        e.proposed = r.proposed;
        e.final_round = r.final_round;
        if (std::holds_alternative<BitResponse>(resp))
            e.commit = std::get<BitResponse>(resp).commit;
        else if (!e.silent)
            throw ProtocolError("worker " + std::to_string(worker) +
                                " sent a malformed vote response");
    } else {
        e.kind = MsgKind::Initial;
    }
    transcript_.entries.push_back(e);
    return resp;
}

std::vector<std::optional<GradientVec>> MainNode::collect_initial() {
    auto initial = initial_responses(cfg_, behaviors_, truth_);
    const auto k = static_cast<std::uint64_t>(cfg_.alphabet.bits_per_symbol());
    for (int j = 1; j <= cfg_.n_workers; ++j) {
        TranscriptEntry e;
        e.round = 0;
        e.group = group_of(cfg_, j);
        e.worker = j;
        e.kind = MsgKind::Initial;
        e.silent = !initial[static_cast<std::size_t>(j)].has_value();
        e.uplink_bits = e.silent ? 0 : static_cast<std::uint64_t>(cfg_.dim) * k;
        transcript_.entries.push_back(e);
    }
    return initial;
}

Tournament MainNode::form_groups(int group_id,
                                 const std::vector<std::optional<GradientVec>>& initial,
                                 int proven_elsewhere) {
    Tournament t;
    t.group_id = group_id;
    t.samples = samples_of_group(cfg_, group_id);
    t.s_eff = std::max(0, cfg_.n_malicious - proven_elsewhere);
    t.u_base = cfg_.honest_per_group + std::min(proven_elsewhere, cfg_.n_malicious);

    int silent = 0;
    std::map<GradientVec, std::vector<int>> by_value;
    for (int j : workers_of_group(cfg_, group_id)) {
        const auto& z = initial[static_cast<std::size_t>(j)];
        if (!z) {
            ++silent;
            t.suspects.push_back(j);
        } else {
            by_value[*z].push_back(j);
        }
    }
    t.u_eff = std::max(1, t.u_base - silent);

    for (auto& [value, members] : by_value) {
        AgreementClass c;
        c.value = value;
        c.members = members;  // already ascending (iteration order of worker ids)
        t.classes.push_back(std::move(c));
    }
    canonicalize(t);

    // A response shared by more than s_eff workers must be correct: accept it
    // and drop everything else without a single match.
    for (std::size_t i = 0; i < t.classes.size(); ++i) {
        if (static_cast<int>(t.classes[i].members.size()) > t.s_eff) {
            for (std::size_t j = 0; j < t.classes.size(); ++j) {
                if (j == i) continue;
                t.suspects.insert(t.suspects.end(), t.classes[j].members.begin(),
                                  t.classes[j].members.end());
                t.proven.insert(t.proven.end(), t.classes[j].members.begin(),
                                t.classes[j].members.end());
            }
            std::vector<AgreementClass> keep;
            keep.push_back(std::move(t.classes[i]));
            t.classes = std::move(keep);
            t.accepted = 0;
            std::sort(t.suspects.begin(), t.suspects.end());
            std::sort(t.proven.begin(), t.proven.end());
            return t;
        }
    }

    // Responses supported by fewer than u_eff workers cannot be the honest
    // one; their senders claimed a wrong initial sum.
    std::vector<AgreementClass> keep;
    for (auto& c : t.classes) {
        if (static_cast<int>(c.members.size()) < t.u_eff) {
            t.suspects.insert(t.suspects.end(), c.members.begin(), c.members.end());
            t.proven.insert(t.proven.end(), c.members.begin(), c.members.end());
        } else {
            keep.push_back(std::move(c));
        }
    }
    t.classes = std::move(keep);
    std::sort(t.suspects.begin(), t.suspects.end());
    std::sort(t.proven.begin(), t.proven.end());
    if (t.classes.empty())
        throw ProtocolError("group " + std::to_string(group_id) +
                            " has no admissible response class");
    return t;
}

MatchOutcome MainNode::run_match(int w1, int w2, const GradientVec& z1, const GradientVec& z2,
                                 Tournament& t) {
    MatchOutcome m;
    m.challenger = w1;
    m.voter = w2;

    int coord = 0;
    for (std::size_t i = 0; i < z1.size(); ++i) {
        if (z1[i] != z2[i]) {
            coord = static_cast<int>(i) + 1;  // smallest disagreeing coordinate
            break;
        }
    }
    if (coord == 0) throw ProtocolError("match requires disagreeing initial responses");
    m.coord = coord;

    const Alphabet& a = cfg_.alphabet;
    const auto k = static_cast<std::uint64_t>(a.bits_per_symbol());
    int lo = t.samples.lo, hi = t.samples.hi;
    Symbol bound_challenger = z1[static_cast<std::size_t>(coord - 1)];
    std::optional<Symbol> bound_voter = z2[static_cast<std::size_t>(coord - 1)];

    while (hi > lo) {
        const int mid = lo + (hi - lo) / 2;

        ++round_;
        ++t.rounds;
        // 1 downlink bit: descent direction to the challenger
        WorkerResponse pr = query(w1, PartialSumReq{lo, mid, coord}, t.group_id, 1);
        if (std::holds_alternative<SilentResponse>(pr)) {
            m.aborted = true;
            m.silent_worker = w1;
            return m;
        }
        const Symbol left = std::get<SymbolResponse>(pr).value;

        ++round_;
        ++t.rounds;
        // k downlink bits: the proposed value forwarded to the voter
        WorkerResponse vr = query(w2, VoteReq{left, lo, mid, coord, false}, t.group_id, k);
        if (std::holds_alternative<SilentResponse>(vr)) {
            m.aborted = true;
            m.silent_worker = w2;
            return m;
        }
        ++m.steps;

        if (std::get<BitResponse>(vr).commit) {
            // Agreement on the left child: the disagreement moved right. Both
            // bound claims follow by subtraction, so the disagreement
            // invariant carries over.
            lo = mid + 1;
            bound_challenger = a.sub(bound_challenger, left);
            if (bound_voter) bound_voter = a.sub(*bound_voter, left);
        } else {
            // Rejection: descend left. The challenger is bound to the value it
            // transmitted; the voter's exact claim is no longer inferable,
            // only that it differs.
            hi = mid;
            bound_challenger = left;
            bound_voter.reset();
        }
    }

    m.i_check = lo;
    m.claimed_leaf = bound_challenger;
    m.voter_bound = bound_voter;
    return m;
}

VoteTally MainNode::final_voting_round(const MatchOutcome& m, Tournament& t, std::size_t c1,
                                       std::size_t c2) {
    VoteTally tally;
    tally.committers.push_back(m.challenger);  // bound to its own leaf claim
    tally.rejectors.push_back(m.voter);        // implied by the match invariant

    std::vector<int> voters;
    for (std::size_t ci : {c1, c2})
        for (int w : t.classes[ci].members)
            if (w != m.challenger && w != m.voter) voters.push_back(w);
    std::sort(voters.begin(), voters.end());

    ++round_;
    ++t.rounds;
    const auto k = static_cast<std::uint64_t>(cfg_.alphabet.bits_per_symbol());
    bool first = true;
    for (int w : voters) {
        // the proposed leaf value reaches the voting workers as one multicast
        WorkerResponse r = query(
            w, VoteReq{m.claimed_leaf, m.i_check, m.i_check, m.coord, true}, t.group_id,
            first ? k : 0);
        first = false;
        if (std::holds_alternative<SilentResponse>(r)) {
            suspect(t, w);
            tally.rejectors.push_back(w);
        } else if (std::get<BitResponse>(r).commit) {
            tally.committers.push_back(w);
        } else {
            tally.rejectors.push_back(w);
        }
    }
    std::sort(tally.committers.begin(), tally.committers.end());
    std::sort(tally.rejectors.begin(), tally.rejectors.end());
    return tally;
}

GradientVec MainNode::local_compute(int sample, int group, int round) {
    for (std::size_t i = 0; i < transcript_.local_comp_indices.size(); ++i)
        if (transcript_.local_comp_indices[i] == sample)
            return transcript_.local_comp_values[i];  // already known, no new computation

    GradientVec g = truth_.vec(sample);
    transcript_.local_comp_indices.push_back(sample);
    transcript_.local_comp_values.push_back(g);

    TranscriptEntry e;
    e.round = round;
    e.group = group;
    e.worker = 0;
    e.kind = MsgKind::LocalComp;
    e.lo = sample;
    e.hi = sample;
    transcript_.entries.push_back(e);
    return g;
}

void MainNode::suspect(Tournament& t, int worker) {
    if (std::find(t.suspects.begin(), t.suspects.end(), worker) == t.suspects.end())
        t.suspects.push_back(worker);
    for (auto& c : t.classes)
        c.members.erase(std::remove(c.members.begin(), c.members.end(), worker),
                        c.members.end());
}

void MainNode::eliminate(Tournament& t, const std::vector<int>& workers, std::size_t c1,
                         std::size_t c2) {
    for (int w : workers) {
        if (std::find(t.suspects.begin(), t.suspects.end(), w) == t.suspects.end())
            t.suspects.push_back(w);
        if (std::find(t.proven.begin(), t.proven.end(), w) == t.proven.end())
            t.proven.push_back(w);
        for (std::size_t ci : {c1, c2}) {
            auto& mem = t.classes[ci].members;
            mem.erase(std::remove(mem.begin(), mem.end(), w), mem.end());
        }
    }
}

void MainNode::drop_thin_classes(Tournament& t) {
    std::vector<AgreementClass> keep;
    for (auto& c : t.classes) {
        if (static_cast<int>(c.members.size()) < t.u_eff) {
            // The honest class never falls below u_eff, so a thin class holds
            // a wrong initial sum: its members are proven malicious.
            t.suspects.insert(t.suspects.end(), c.members.begin(), c.members.end());
            t.proven.insert(t.proven.end(), c.members.begin(), c.members.end());
        } else {
            keep.push_back(std::move(c));
        }
    }
    t.classes = std::move(keep);
    canonicalize(t);
}

void MainNode::canonicalize(Tournament& t) {
    std::sort(t.classes.begin(), t.classes.end(),
              [](const AgreementClass& a, const AgreementClass& b) {
                  return a.min_member() < b.min_member();
              });
}

void MainNode::resolve_match(const MatchOutcome& m, const VoteTally& v, Tournament& t,
                             std::size_t c1, std::size_t c2) {
    if (static_cast<int>(v.committers.size()) < t.u_eff) {
        eliminate(t, v.committers, c1, c2);
    } else if (static_cast<int>(v.rejectors.size()) < t.u_eff) {
        eliminate(t, v.rejectors, c1, c2);
    } else {
        // Both quorums reached: adjudicate by computing the disputed gradient.
        const std::size_t known = transcript_.local_comp_indices.size();
        const GradientVec g = local_compute(m.i_check, t.group_id, round_);
        if (transcript_.local_comp_indices.size() > known) ++t.local_comps;
        const Symbol truth_at = g[static_cast<std::size_t>(m.coord - 1)];
        if (truth_at != m.claimed_leaf) {
            eliminate(t, v.committers, c1, c2);
            // A voter whose exactly-inferred claim also contradicts the
            // computed value proved itself inconsistent, even though it
            // rejected the (wrong) proposal.
            if (m.voter_bound && *m.voter_bound != truth_at) eliminate(t, {m.voter}, c1, c2);
        } else {
            eliminate(t, v.rejectors, c1, c2);
        }
    }
    drop_thin_classes(t);
}

void MainNode::run_tournament(Tournament& t) {
    if (t.decided()) return;
    Rng rng(derive_seed(cfg_.rng_seed, 0x74726e00ull + static_cast<std::uint64_t>(t.group_id)));

    while (t.classes.size() > 1) {
        // The two canonically-first classes always disagree (distinct classes
        // differ by construction); representatives are seeded uniform draws.
        const std::size_t c1 = 0, c2 = 1;
        const int w1 = t.classes[c1].members[static_cast<std::size_t>(
            rng.below(t.classes[c1].members.size()))];
        const int w2 = t.classes[c2].members[static_cast<std::size_t>(
            rng.below(t.classes[c2].members.size()))];

        ++t.matches;
        MatchOutcome m = run_match(w1, w2, t.classes[c1].value, t.classes[c2].value, t);
        if (m.aborted) {
            // Mid-match silence: treat as a rejection of cooperation and set
            // the silent worker aside; at least u_eff responsive honest
            // workers remain, so this never strands the honest class.
            ++t.matches_aborted;
            suspect(t, m.silent_worker);
            drop_thin_classes(t);
            continue;
        }

        VoteTally tally = final_voting_round(m, t, c1, c2);
        resolve_match(m, tally, t, c1, c2);
    }

    if (t.classes.empty())
        throw ProtocolError("all classes eliminated in group " + std::to_string(t.group_id) +
                            "; more than s malicious workers?");
    std::sort(t.suspects.begin(), t.suspects.end());
    std::sort(t.proven.begin(), t.proven.end());
}

RunResult MainNode::run() {
    RunResult out;
    auto initial = collect_initial();

    std::vector<Tournament> tournaments;
    int rounds_max = 0;
    int proven_so_far = 0;
    for (int g = 1; g <= cfg_.n_groups; ++g) {
        Tournament t = form_groups(g, initial, proven_so_far);
        run_tournament(t);
        proven_so_far += static_cast<int>(t.proven.size());
        rounds_max = std::max(rounds_max, t.rounds);
        tournaments.push_back(std::move(t));
    }

    // Decode: per group, the surviving class's initial response; sum over groups.
    GradientVec decoded(static_cast<std::size_t>(cfg_.dim), 0u);
    for (const auto& t : tournaments) {
        const AgreementClass* s = t.survivor();
        if (!s) throw ProtocolError("tournament left no survivor");
        add_in_place(cfg_.alphabet, decoded, std::span<const Symbol>{s->value});
        out.suspects.insert(out.suspects.end(), t.suspects.begin(), t.suspects.end());
    }
    std::sort(out.suspects.begin(), out.suspects.end());

    transcript_.rounds_used = round_;
    out.decoded = std::move(decoded);

    RunMetrics& mx = out.metrics;
    mx.rounds = round_;
    mx.rounds_max_group = rounds_max;
    mx.local_comps = static_cast<int>(transcript_.local_comp_indices.size());
    for (const auto& t : tournaments) {
        mx.matches += t.matches;
        mx.matches_aborted += t.matches_aborted;
    }
    mx.replication = replication_factor(build_fractional_repetition(cfg_));
    mx.kappa_bits = transcript_.kappa_bits();
    mx.downlink_bits = transcript_.downlink_bits_total();
    mx.initial_bits = transcript_.initial_uplink_bits();
    mx.total_uplink_bits = mx.initial_bits + mx.kappa_bits;
    mx.correct = (out.decoded == truth_.sum_all(cfg_.alphabet));

    out.transcript = std::move(transcript_);
    return out;
}

RunResult run_scheme(const SystemConfig& cfg, const PreparedAttack& attack,
                     const GradientStore& truth) {
    MainNode node(cfg, attack.behaviors, truth);
    return node.run();
}

RunResult run_scheme(const SystemConfig& cfg, const AttackSpec& attack,
                     const GradientStore& truth) {
    PreparedAttack prepared = prepare_attack(cfg, attack, truth);
    return run_scheme(cfg, prepared, truth);
}

BaselineResult draco_baseline(const SystemConfig& cfg, const AttackSpec& attack,
                              const GradientStore& truth) {
    cfg.validate();
    if (cfg.group_size() != 2 * cfg.n_malicious + 1)
        throw ConfigError("majority baseline needs group size 2s+1 (u = s+1)");

    PreparedAttack prepared = prepare_attack(cfg, attack, truth);
    auto initial = initial_responses(cfg, prepared.behaviors, truth);

    BaselineResult out;
    GradientVec decoded(static_cast<std::size_t>(cfg.dim), 0u);
    for (int g = 1; g <= cfg.n_groups; ++g) {
        std::map<GradientVec, int> votes;
        for (int j : workers_of_group(cfg, g))
            if (initial[static_cast<std::size_t>(j)]) ++votes[*initial[static_cast<std::size_t>(j)]];
        if (votes.empty()) throw ProtocolError("baseline group with no responses");
        auto best = votes.begin();
        for (auto it = votes.begin(); it != votes.end(); ++it)
            if (it->second > best->second) best = it;
        add_in_place(cfg.alphabet, decoded, std::span<const Symbol>{best->first});
    }
    out.decoded = std::move(decoded);
    out.total_bits = static_cast<std::uint64_t>(cfg.n_workers) *
                     static_cast<std::uint64_t>(cfg.dim) *
                     static_cast<std::uint64_t>(cfg.alphabet.bits_per_symbol());
    out.correct = (out.decoded == truth.sum_all(cfg.alphabet));
    return out;
}

}  // namespace bgc
