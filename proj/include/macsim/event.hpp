#pragma once

#include <cstdint>
#include <string>

#include "macsim/token.hpp"

namespace macsim {

enum class EventKind : uint8_t { Init, Recv, Ack, Crash };

std::string to_string(EventKind k);
EventKind event_kind_from_string(const std::string& s);

/// An enabled event, identified by redacted metadata only: kind, the node
/// it occurs at, and (for Recv/Ack) which broadcast it belongs to. This is
/// exactly the handle a scheduling policy is allowed to pick.
struct Event {
    EventKind kind = EventKind::Init;
    NodeId node = 0;
    uint64_t broadcast_id = 0; // Recv/Ack only

    friend auto operator<=>(const Event&, const Event&) = default;
};

} // namespace macsim
