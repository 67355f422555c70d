#include "macsim/trace.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace macsim {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::Init: return "init";
        case EventKind::Recv: return "recv";
        case EventKind::Ack: return "ack";
        case EventKind::Crash: return "crash";
    }
    return "?";
}

EventKind event_kind_from_string(const std::string& s) {
    if (s == "init") return EventKind::Init;
    if (s == "recv") return EventKind::Recv;
    if (s == "ack") return EventKind::Ack;
    if (s == "crash") return EventKind::Crash;
    throw std::invalid_argument("unknown event kind: " + s);
}

ordered_json TraceHeader::to_json() const {
    ordered_json j;
    j["macsim_trace"] = 1;
    j["n"] = n;
    j["protocol"] = protocol;
    j["inputs"] = inputs;
    j["seed"] = seed;
    j["scheduler"] = scheduler;
    return j;
}

TraceHeader TraceHeader::from_json(const json& j) {
    TraceHeader h;
    h.n = j.at("n").get<uint32_t>();
    h.protocol = j.at("protocol").get<std::string>();
    h.inputs = j.at("inputs").get<std::vector<Value>>();
    h.seed = j.at("seed").get<uint64_t>();
    h.scheduler = j.at("scheduler").get<std::string>();
    return h;
}

ordered_json trace_event_to_json(const TraceEvent& e) {
    ordered_json j;
    j["seq"] = e.seq;
    j["kind"] = to_string(e.kind);
    j["node"] = e.node;
    j["combined"] = e.combined;
    j["payload"] = e.payload ? payload_to_json(*e.payload) : ordered_json(nullptr);
    j["ack_count_after"] = e.ack_count_after;
    if (e.broadcast_id) j["bc"] = *e.broadcast_id;
    if (e.from) j["from"] = *e.from;
    if (e.bcast_id) {
        j["bcast_id"] = *e.bcast_id;
        j["bcast"] = payload_to_json(*e.bcast_payload);
    }
    return j;
}

TraceEvent trace_event_from_json(const json& j) {
    TraceEvent e;
    e.seq = j.at("seq").get<uint64_t>();
    e.kind = event_kind_from_string(j.at("kind").get<std::string>());
    e.node = j.at("node").get<NodeId>();
    e.combined = j.at("combined").get<bool>();
    if (!j.at("payload").is_null()) e.payload = payload_from_json(j.at("payload"));
    e.ack_count_after = j.at("ack_count_after").get<uint64_t>();
    if (j.contains("bc")) e.broadcast_id = j.at("bc").get<uint64_t>();
    if (j.contains("from")) e.from = j.at("from").get<NodeId>();
    if (j.contains("bcast_id")) {
        e.bcast_id = j.at("bcast_id").get<uint64_t>();
        e.bcast_payload = payload_from_json(j.at("bcast"));
    }
    return e;
}

void write_trace(std::ostream& os, const Trace& trace) {
    os << trace.header.to_json().dump() << '\n';
    for (const auto& e : trace.events) os << trace_event_to_json(e).dump() << '\n';
}

void write_trace_file(const std::string& path, const Trace& trace) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_trace(os, trace);
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + path);
}

Trace read_trace(std::istream& is) {
    Trace t;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty trace stream");
    t.header = TraceHeader::from_json(json::parse(line));
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        t.events.push_back(trace_event_from_json(json::parse(line)));
    }
    return t;
}

Trace read_trace_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return read_trace(is);
}

} // namespace macsim
