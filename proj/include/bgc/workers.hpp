#pragma once

#include <functional>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "bgc/alphabet.hpp"
#include "bgc/assignment.hpp"

namespace bgc {

// The claimed partial gradients a worker answers from: the true gradients of
// its assigned interval plus sparse overrides for corrupted entries. Honest
// workers carry no overrides, so their claims equal the truth.
class ClaimTable {
public:
    ClaimTable(const GradientStore* truth, SampleInterval assigned)
        : truth_(truth), assigned_(assigned) {}

    SampleInterval assigned() const { return assigned_; }

    void override_claim(int sample, GradientVec value);

    std::span<const Symbol> claim(int sample) const;
    Symbol claim_at(int sample, int coord) const;  // coord is 1-based

    // z_0: sum of claims over the whole assigned interval.
    GradientVec initial_sum(const Alphabet& a) const;

    // Coordinate `coord` of the sum of claims over [lo, hi].
    Symbol partial_sum(const Alphabet& a, int lo, int hi, int coord) const;

    const std::map<int, GradientVec>& overrides() const { return overrides_; }
    bool corrupted() const { return !overrides_.empty(); }

private:
    const GradientStore* truth_;
    SampleInterval assigned_;
    std::map<int, GradientVec> overrides_;
};

// The three encoding-function kinds the scheme uses. Ranges are closed sample
// intervals inside the worker's group; coord is a 1-based vector coordinate.
struct InitialSumReq {};
struct PartialSumReq {
    int lo = 0, hi = 0;
    int coord = 0;
};
struct VoteReq {
    Symbol proposed = 0;
    int lo = 0, hi = 0;
    int coord = 0;
    bool final_round = false;  // post-match voting round vs mid-match descent vote
};
using EncodingRequest = std::variant<InitialSumReq, PartialSumReq, VoteReq>;

struct GradientResponse {
    GradientVec value;
};
struct SymbolResponse {
    Symbol value = 0;
};
struct BitResponse {
    bool commit = false;
};
struct SilentResponse {};
using WorkerResponse = std::variant<GradientResponse, SymbolResponse, BitResponse, SilentResponse>;

// d*k bits for a gradient, k for a symbol, 1 for a vote, 0 for silence.
std::uint64_t uplink_bits(const WorkerResponse& r, const Alphabet& a);

struct Transcript;  // bgc/transcript.hpp

// What an adaptive worker sees when queried: the public transcript so far and
// the current round. Everything in it is information the main node has sent or
// received on the wire.
struct PublicContext {
    const Transcript* transcript = nullptr;
    int round = 0;
    int group = 0;
};

using AdaptiveFn =
    std::function<WorkerResponse(int worker, const EncodingRequest&, const PublicContext&)>;

// Per-worker response policy:
//  - table-driven workers answer consistently from `table` (honest workers are
//    the special case of an uncorrupted table);
//  - with stall_final_votes set, a table-driven worker rejects every
//    final-round proposal, its own claimed value included;
//  - stragglers return Silent on every request;
//  - adaptive workers delegate to a callback.
struct WorkerBehavior {
    enum class Kind { TableDriven, Straggler, Adaptive };

    Kind kind = Kind::TableDriven;
    std::optional<ClaimTable> table;
    bool stall_final_votes = false;
    AdaptiveFn adaptive;
    bool malicious = false;  // bookkeeping for tests/metrics; never read by the protocol

    static WorkerBehavior honest(const GradientStore* truth, SampleInterval assigned) {
        WorkerBehavior b;
        b.table.emplace(truth, assigned);
        return b;
    }
    static WorkerBehavior from_table(ClaimTable t, bool stall = false) {
        WorkerBehavior b;
        b.table = std::move(t);
        b.stall_final_votes = stall;
        b.malicious = true;
        return b;
    }
    static WorkerBehavior straggler() {
        WorkerBehavior b;
        b.kind = Kind::Straggler;
        return b;
    }
};

// The worker-side response semantics. Table-driven workers answer from their
// claim table; requests outside the worker's assigned interval are protocol
// errors.
WorkerResponse respond(int worker, const WorkerBehavior& b, const EncodingRequest& req,
                       const Alphabet& a, const PublicContext& ctx);

// All z_0 responses (t = 0). Index j holds worker j's response (slot 0 unused);
// stragglers yield nullopt. Shared group sums are computed once and per-worker
// override deltas applied on top, so large groups stay cheap.
std::vector<std::optional<GradientVec>> initial_responses(
    const SystemConfig& cfg, const std::vector<WorkerBehavior>& behaviors,
    const GradientStore& truth);

}  // namespace bgc
