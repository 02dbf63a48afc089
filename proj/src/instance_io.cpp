#include "flowlab/instance_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

namespace flowlab {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kAdaptiveMu = "adaptive_mu";
constexpr const char* kAdaptiveSnapshot = "adaptive_snapshot";

}  // namespace

std::string write_instance(const Instance& inst) {
    ordered_json root;
    ordered_json meta = ordered_json::object();
    for (const auto& [k, v] : inst.meta) meta[k] = v;
    if (inst.adaptive) {
        // Keep the meta view authoritative so serialization stays one map.
        meta[kAdaptiveMu] = rat_str(inst.adaptive->mu);
        meta[kAdaptiveSnapshot] = rat_str(inst.adaptive->snapshot);
    }
    root["meta"] = std::move(meta);
    ordered_json jobs = ordered_json::array();
    for (const Job& j : inst.jobs) {
        ordered_json o;
        o["id"] = j.id;
        o["release"] = rat_str(j.release);
        o["p_true"] = rat_str(j.p_true);
        o["p_est"] = rat_str(j.p_est);
        jobs.push_back(std::move(o));
    }
    root["jobs"] = std::move(jobs);
    return root.dump(2) + "\n";
}

void write_instance(const Instance& inst, std::ostream& out) {
    out << write_instance(inst);
}

Instance read_instance_str(const std::string& text) {
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("instance is not valid JSON: ") + e.what());
    }
    if (!root.is_object() || !root.contains("meta") || !root.contains("jobs"))
        throw InvalidInput("instance must be an object with 'meta' and 'jobs'");
    Instance inst;
    for (const auto& [k, v] : root["meta"].items()) {
        if (!v.is_string()) throw InvalidInput("meta values must be strings");
        inst.meta[k] = v.get<std::string>();
    }
    if (auto mu = inst.meta.find(kAdaptiveMu); mu != inst.meta.end()) {
        auto snap = inst.meta.find(kAdaptiveSnapshot);
        if (snap == inst.meta.end())
            throw InvalidInput("adaptive_mu without adaptive_snapshot");
        inst.adaptive = AdaptiveOracle{rat_parse(mu->second), rat_parse(snap->second)};
        inst.meta.erase(kAdaptiveMu);
        inst.meta.erase(kAdaptiveSnapshot);
    } else if (inst.meta.count(kAdaptiveSnapshot)) {
        throw InvalidInput("adaptive_snapshot without adaptive_mu");
    }
    if (!root["jobs"].is_array()) throw InvalidInput("'jobs' must be an array");
    for (const auto& o : root["jobs"]) {
        if (!o.is_object()) throw InvalidInput("each job must be an object");
        for (const char* key : {"id", "release", "p_true", "p_est"})
            if (!o.contains(key)) throw InvalidInput(std::string("job missing '") + key + "'");
        if (!o["id"].is_number_unsigned()) throw InvalidInput("job id must be unsigned");
        auto field = [&](const char* key) {
            const auto& v = o[key];
            if (!v.is_string()) throw InvalidInput(std::string(key) + " must be a rational string");
            return rat_parse(v.get<std::string>());
        };
        inst.jobs.push_back(make_job(o["id"].get<JobId>(), field("release"), field("p_true"),
                                     field("p_est")));
    }
    validate_instance(inst);
    return inst;
}

Instance read_instance(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_instance_str(ss.str());
}

std::string instance_hash(const Instance& inst) {
    std::uint64_t h = fnv1a64(write_instance(inst));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf, 16);
}

}  // namespace flowlab
