#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "macsim/event.hpp"
#include "macsim/payload.hpp"

namespace macsim {

/// One scheduled event, with enough annotation to replay every proof
/// oracle after the fact. `payload` snapshots the message the event is
/// about (Recv/Ack); `bcast_*` snapshot the broadcast the event's handler
/// emitted, when it emitted one.
struct TraceEvent {
    uint64_t seq = 0;
    EventKind kind = EventKind::Init;
    NodeId node = 0;
    bool combined = false;
    std::optional<Payload> payload;
    uint64_t ack_count_after = 0;
    std::optional<uint64_t> broadcast_id;       // Recv/Ack: the message's id
    std::optional<NodeId> from;                 // Recv: sender
    std::optional<uint64_t> bcast_id;           // combined events
    std::optional<Payload> bcast_payload;       // combined events
};

/// Trial-level metadata written as the first line of every trace file.
struct TraceHeader {
    uint32_t n = 0;
    std::string protocol;
    std::vector<Value> inputs;
    uint64_t seed = 0;
    std::string scheduler;

    nlohmann::ordered_json to_json() const;
    static TraceHeader from_json(const nlohmann::json& j);
};

struct Trace {
    TraceHeader header;
    std::vector<TraceEvent> events;
};

nlohmann::ordered_json trace_event_to_json(const TraceEvent& e);
TraceEvent trace_event_from_json(const nlohmann::json& j);

void write_trace(std::ostream& os, const Trace& trace);
void write_trace_file(const std::string& path, const Trace& trace);
Trace read_trace(std::istream& is);
Trace read_trace_file(const std::string& path);

} // namespace macsim
