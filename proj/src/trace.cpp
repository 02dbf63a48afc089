#include "flowlab/trace.hpp"

#include <json.hpp>

#include <array>
#include <istream>
#include <ostream>

namespace flowlab {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 8> kEventNames = {
    "release", "start", "preempt", "complete", "mark_partial", "morph", "sigma_update",
    "snapshot",
};

constexpr std::array<std::string_view, 4> kMarkNames = {"plain", "zig", "zag", "zigzag"};

}  // namespace

std::string_view event_kind_name(EventKind k) {
    return kEventNames[static_cast<std::size_t>(k)];
}

EventKind event_kind_from(std::string_view name) {
    for (std::size_t i = 0; i < kEventNames.size(); ++i)
        if (kEventNames[i] == name) return static_cast<EventKind>(i);
    throw InvalidInput("unknown event kind: '" + std::string(name) + "'");
}

std::string_view mark_kind_name(MarkKind k) {
    return kMarkNames[static_cast<std::size_t>(k)];
}

MarkKind mark_kind_from(std::string_view name) {
    for (std::size_t i = 0; i < kMarkNames.size(); ++i)
        if (kMarkNames[i] == name) return static_cast<MarkKind>(i);
    throw InvalidInput("unknown mark kind: '" + std::string(name) + "'");
}

void write_trace_jsonl(const Trace& tr, std::ostream& out) {
    ordered_json header;
    header["scheduler"] = tr.scheduler;
    header["seed"] = tr.seed;
    header["instance"] = tr.instance_hash;
    out << header.dump() << "\n";
    for (const TraceEvent& e : tr.events) {
        ordered_json o;
        o["t"] = rat_str(e.t);
        o["kind"] = std::string(event_kind_name(e.kind));
        if (e.job != kNoJob) o["job"] = e.job;
        if (!e.tag.empty()) o["tag"] = e.tag;
        out << o.dump() << "\n";
    }
}

Trace read_trace_jsonl(std::istream& in) {
    Trace tr;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ordered_json o;
        try {
            o = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw InvalidInput(std::string("trace line is not valid JSON: ") + e.what());
        }
        if (!have_header) {
            if (!o.contains("scheduler") || !o.contains("seed") || !o.contains("instance"))
                throw InvalidInput("trace header needs scheduler, seed, instance");
            tr.scheduler = o["scheduler"].get<std::string>();
            tr.seed = o["seed"].get<std::uint64_t>();
            tr.instance_hash = o["instance"].get<std::string>();
            have_header = true;
            continue;
        }
        TraceEvent e;
        if (!o.contains("t") || !o.contains("kind"))
            throw InvalidInput("trace event needs t and kind");
        e.t = rat_parse(o["t"].get<std::string>());
        e.kind = event_kind_from(o["kind"].get<std::string>());
        if (o.contains("job")) e.job = o["job"].get<JobId>();
        if (o.contains("tag")) e.tag = o["tag"].get<std::string>();
        tr.events.push_back(std::move(e));
    }
    if (!have_header) throw InvalidInput("empty trace");
    return tr;
}

}  // namespace flowlab
