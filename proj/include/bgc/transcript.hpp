#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bgc/alphabet.hpp"

namespace bgc {

enum class MsgKind { Initial, PartialSum, Vote, LocalComp };

const char* to_string(MsgKind k);

// One logged event: a request/response pair on the wire, or a local
// computation at the main node (worker = 0, no bits).
struct TranscriptEntry {
    int round = 0;
    int group = 0;
    int worker = 0;  // 0 = main node
    MsgKind kind = MsgKind::Initial;
    int lo = 0, hi = 0, coord = 0;
    Symbol proposed = 0;
    Symbol value = 0;
    bool commit = false;
    bool final_round = false;
    bool silent = false;
    std::uint64_t uplink_bits = 0;
    std::uint64_t downlink_bits = 0;
};

// Full round-by-round log of one run, plus the main node's local computations
// I^(r) / G^(r). kappa counts uplink bits of protocol rounds t >= 1 only; the
// initial t = 0 gradient-code responses are reported separately.
struct Transcript {
    std::vector<TranscriptEntry> entries;
    std::vector<int> local_comp_indices;        // I, unique, in computation order
    std::vector<GradientVec> local_comp_values; // G, parallel to I
    int rounds_used = 0;

    std::uint64_t kappa_bits() const;
    std::uint64_t initial_uplink_bits() const;
    std::uint64_t downlink_bits_total() const;

    bool has_local_comp(int sample) const;

    // One JSON object per line:
    //   {"t":..,"group":..,"worker":..,"kind":..,payload...,"uplink_bits":..,"downlink_bits":..}
    // Worker, group, sample and coordinate indices are 0-based in this format;
    // worker null marks main-node records.
    void write_jsonl(std::ostream& os) const;
    std::string to_jsonl() const;
};

}  // namespace bgc
