#include "bgc/workers.hpp"

#include <string>

namespace bgc {

void ClaimTable::override_claim(int sample, GradientVec value) {
    if (!assigned_.contains(sample))
        throw ConfigError("override for sample " + std::to_string(sample) +
                          " outside assigned interval");
    if (static_cast<int>(value.size()) != truth_->dim())
        throw ConfigError("override dimension mismatch");
    overrides_[sample] = std::move(value);
}

std::span<const Symbol> ClaimTable::claim(int sample) const {
    if (!assigned_.contains(sample))
        throw ProtocolError("claim for sample " + std::to_string(sample) +
                            " outside assigned interval");
    auto it = overrides_.find(sample);
    if (it != overrides_.end()) return {it->second.data(), it->second.size()};
    return truth_->row(sample);
}

Symbol ClaimTable::claim_at(int sample, int coord) const {
    auto c = claim(sample);
    if (coord < 1 || coord > static_cast<int>(c.size()))
        throw ProtocolError("coordinate " + std::to_string(coord) + " out of range");
    return c[static_cast<std::size_t>(coord - 1)];
}

GradientVec ClaimTable::initial_sum(const Alphabet& a) const {
    GradientVec acc = truth_->sum_range(a, assigned_.lo, assigned_.hi);
    for (const auto& [sample, value] : overrides_) {
        sub_in_place(a, acc, truth_->row(sample));
        add_in_place(a, acc, value);
    }
    return acc;
}

Symbol ClaimTable::partial_sum(const Alphabet& a, int lo, int hi, int coord) const {
    if (!assigned_.contains(lo, hi))
        throw ProtocolError("partial sum range [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "] outside assigned interval");
    Symbol acc = 0;
    for (int i = lo; i <= hi; ++i) acc = a.add(acc, claim_at(i, coord));
    return acc;
}

std::uint64_t uplink_bits(const WorkerResponse& r, const Alphabet& a) {
    const auto k = static_cast<std::uint64_t>(a.bits_per_symbol());
    if (std::holds_alternative<GradientResponse>(r))
        return std::get<GradientResponse>(r).value.size() * k;
    if (std::holds_alternative<SymbolResponse>(r)) return k;
    if (std::holds_alternative<BitResponse>(r)) return 1;
    return 0;
}

namespace {

WorkerResponse respond_from_table(const ClaimTable& t, const EncodingRequest& req,
                                  const Alphabet& a, bool stall_final) {
    if (std::holds_alternative<InitialSumReq>(req)) return GradientResponse{t.initial_sum(a)};
    if (std::holds_alternative<PartialSumReq>(req)) {
        const auto& r = std::get<PartialSumReq>(req);
        return SymbolResponse{t.partial_sum(a, r.lo, r.hi, r.coord)};
    }
    const auto& v = std::get<VoteReq>(req);
    if (v.final_round && stall_final) return BitResponse{false};
    return BitResponse{t.partial_sum(a, v.lo, v.hi, v.coord) == v.proposed};
}

}  // namespace

WorkerResponse respond(int worker, const WorkerBehavior& b, const EncodingRequest& req,
                       const Alphabet& a, const PublicContext& ctx) {
    switch (b.kind) {
        case WorkerBehavior::Kind::Straggler:
            return SilentResponse{};
        case WorkerBehavior::Kind::Adaptive:
            if (!b.adaptive) throw ProtocolError("adaptive worker without callback");
            return b.adaptive(worker, req, ctx);
        case WorkerBehavior::Kind::TableDriven:
            if (!b.table) throw ProtocolError("table-driven worker without table");
            return respond_from_table(*b.table, req, a, b.stall_final_votes);
    }
    throw ProtocolError("unreachable worker kind");
}

std::vector<std::optional<GradientVec>> initial_responses(
    const SystemConfig& cfg, const std::vector<WorkerBehavior>& behaviors,
    const GradientStore& truth) {
    if (behaviors.size() != static_cast<std::size_t>(cfg.n_workers) + 1)
        throw ConfigError("behaviors must have one entry per worker (1-based)");

    std::vector<std::optional<GradientVec>> out(static_cast<std::size_t>(cfg.n_workers) + 1);
    const PublicContext ctx{};
    for (int g = 1; g <= cfg.n_groups; ++g) {
        const SampleInterval iv = samples_of_group(cfg, g);
        GradientVec group_sum = truth.sum_range(cfg.alphabet, iv.lo, iv.hi);
        for (int j : workers_of_group(cfg, g)) {
            const WorkerBehavior& b = behaviors[static_cast<std::size_t>(j)];
            if (b.kind == WorkerBehavior::Kind::Straggler) continue;
            if (b.kind == WorkerBehavior::Kind::TableDriven && b.table) {
                GradientVec z = group_sum;
                for (const auto& [sample, value] : b.table->overrides()) {
                    sub_in_place(cfg.alphabet, z, truth.row(sample));
                    add_in_place(cfg.alphabet, z, value);
                }
                out[static_cast<std::size_t>(j)] = std::move(z);
            } else {
                WorkerResponse r = respond(j, b, InitialSumReq{}, cfg.alphabet, ctx);
                if (std::holds_alternative<GradientResponse>(r))
                    out[static_cast<std::size_t>(j)] =
                        std::move(std::get<GradientResponse>(r).value);
                else if (!std::holds_alternative<SilentResponse>(r))
                    throw ProtocolError("worker " + std::to_string(j) +
                                        " returned a non-gradient initial response");
            }
        }
    }
    return out;
}

}  // namespace bgc
