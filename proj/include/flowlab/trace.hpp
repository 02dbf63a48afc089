#pragma once

#include "flowlab/instance.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace flowlab {

enum class EventKind : std::uint8_t {
    release,
    start,
    preempt,
    complete,
    mark_partial,
    morph,
    sigma_update,
    snapshot,
};

std::string_view event_kind_name(EventKind k);
EventKind event_kind_from(std::string_view name);

// How a pending job was promoted to partial. Policies that never alternate
// use plain; the alternating policy uses zig/zag and may later morph a zag
// into a zigzag. The names double as the tag vocabulary of mark/morph events.
enum class MarkKind : std::uint8_t { plain, zig, zag, zigzag };

std::string_view mark_kind_name(MarkKind k);
MarkKind mark_kind_from(std::string_view name);

struct TraceEvent {
    Rat t;
    EventKind kind = EventKind::release;
    JobId job = kNoJob;  // kNoJob for snapshot events
    std::string tag;     // mark kind, morph target, or new sigma-hat value
};

struct Trace {
    std::string scheduler;
    std::uint64_t seed = 0;
    std::string instance_hash;  // hash of the *input* instance
    Instance realized;          // input with every p_true finalized
    std::vector<TraceEvent> events;
};

// JSON-lines format: one header object, then one object per event. The
// realized instance travels separately (instance_io.hpp); a parsed trace
// carries header and events only.
void write_trace_jsonl(const Trace& tr, std::ostream& out);
Trace read_trace_jsonl(std::istream& in);

}  // namespace flowlab
