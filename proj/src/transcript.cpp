#include "bgc/transcript.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace bgc {

const char* to_string(MsgKind k) {
    switch (k) {
        case MsgKind::Initial: return "initial";
        case MsgKind::PartialSum: return "partial_sum";
        case MsgKind::Vote: return "vote";
        case MsgKind::LocalComp: return "local_comp";
    }
    return "?";
}

std::uint64_t Transcript::kappa_bits() const {
    std::uint64_t sum = 0;
    for (const auto& e : entries)
        if (e.round >= 1) sum += e.uplink_bits;
    return sum;
}

std::uint64_t Transcript::initial_uplink_bits() const {
    std::uint64_t sum = 0;
    for (const auto& e : entries)
        if (e.round == 0) sum += e.uplink_bits;
    return sum;
}

std::uint64_t Transcript::downlink_bits_total() const {
    std::uint64_t sum = 0;
    for (const auto& e : entries) sum += e.downlink_bits;
    return sum;
}

bool Transcript::has_local_comp(int sample) const {
    return std::find(local_comp_indices.begin(), local_comp_indices.end(), sample) !=
           local_comp_indices.end();
}

void Transcript::write_jsonl(std::ostream& os) const {
    using nlohmann::json;
    for (const auto& e : entries) {
        json j;
        j["t"] = e.round;
        j["group"] = e.group - 1;
        if (e.worker == 0)
            j["worker"] = nullptr;
        else
            j["worker"] = e.worker - 1;
        j["kind"] = to_string(e.kind);
        switch (e.kind) {
            case MsgKind::Initial:
                j["silent"] = e.silent;
                break;
            case MsgKind::PartialSum:
                j["lo"] = e.lo - 1;
                j["hi"] = e.hi - 1;
                j["coord"] = e.coord - 1;
                j["silent"] = e.silent;
                if (!e.silent) j["value"] = e.value;
                break;
            case MsgKind::Vote:
                j["lo"] = e.lo - 1;
                j["hi"] = e.hi - 1;
                j["coord"] = e.coord - 1;
                j["proposed"] = e.proposed;
                j["final"] = e.final_round;
                j["silent"] = e.silent;
                if (!e.silent) j["commit"] = e.commit;
                break;
            case MsgKind::LocalComp:
                j["sample"] = e.lo - 1;
                break;
        }
        j["uplink_bits"] = e.uplink_bits;
        j["downlink_bits"] = e.downlink_bits;
        os << j.dump() << "\n";
    }
}

std::string Transcript::to_jsonl() const {
    std::ostringstream ss;
    write_jsonl(ss);
    return ss.str();
}

}  // namespace bgc
