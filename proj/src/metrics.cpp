#include "flowlab/metrics.hpp"

#include "flowlab/instance_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <ostream>

namespace flowlab {

TraceCursor::TraceCursor(const Trace& tr) : tr_(tr), jobs_(tr.realized.jobs) {
    remaining_.reserve(jobs_.size());
    for (const Job& j : jobs_) remaining_.push_back(j.p_true);
    marked_.assign(jobs_.size(), 0);
}

void TraceCursor::advance_to(const Rat& t) {
    while (ei_ < tr_.events.size() && tr_.events[ei_].t <= t) {
        const TraceEvent& e = tr_.events[ei_];
        drain(e.t);
        apply(e);
        ++ei_;
    }
    drain(t);
}

void TraceCursor::drain(const Rat& to) {
    if (to <= clock_) return;
    if (running_ != kNoJob) {
        Rat d = to - clock_;
        remaining_[running_] -= d;
        vol_sub(jobs_[running_].cls, d);
    }
    clock_ = to;
}

void TraceCursor::apply(const TraceEvent& e) {
    switch (e.kind) {
        case EventKind::release:
            ++pending_;
            vol_add(jobs_[e.job].cls, remaining_[e.job]);
            break;
        case EventKind::start:
            running_ = e.job;
            break;
        case EventKind::preempt:
            running_ = kNoJob;
            break;
        case EventKind::complete:
            --pending_;
            if (marked_[e.job]) --partials_;
            if (running_ == e.job) running_ = kNoJob;
            // Exact traces reach zero here; tolerate residue so corrupted
            // traces still sweep (the checker reports them separately).
            if (remaining_[e.job] != 0) {
                vol_sub(jobs_[e.job].cls, remaining_[e.job]);
                remaining_[e.job] = 0;
            }
            break;
        case EventKind::mark_partial:
            if (!marked_[e.job]) {
                marked_[e.job] = 1;
                ++partials_;
            }
            break;
        default:
            break;  // morph, sigma_update, snapshot: no count changes
    }
}

void TraceCursor::vol_add(long cls, const Rat& d) {
    if (d == 0) return;
    vol_[cls] += d;
}

void TraceCursor::vol_sub(long cls, const Rat& d) {
    if (d == 0) return;
    auto it = vol_.find(cls);
    it->second -= d;
    if (it->second == 0) vol_.erase(it);
}

namespace {

void require_same_instance(const Trace& a, const Trace& b) {
    if (write_instance(a.realized) != write_instance(b.realized))
        throw InvalidInput("traces are not over the same realized instance");
}

std::pair<long, long> class_range(const Instance& inst) {
    long lo = 0, hi = 0;
    bool first = true;
    for (const Job& j : inst.jobs) {
        lo = first ? j.cls : std::min(lo, j.cls);
        hi = first ? j.cls : std::max(hi, j.cls);
        first = false;
    }
    return {lo, hi};
}

std::set<long> far_behind_classes(const TraceCursor& alg, const TraceCursor& opt, long cls_lo, long cls_hi,
                                  const Rat& mu2) {
    std::set<long> s;
    Rat prefix_alg = 0, prefix_opt = 0;
    auto ia = alg.volumes().begin();
    auto io = opt.volumes().begin();
    // Volumes below the instance range cannot exist; walk the range once.
    for (long i = cls_lo; i <= cls_hi; ++i) {
        for (; ia != alg.volumes().end() && ia->first <= i; ++ia) prefix_alg += ia->second;
        for (; io != opt.volumes().end() && io->first <= i; ++io) prefix_opt += io->second;
        if (prefix_alg - prefix_opt >= pow2(i) / mu2) s.insert(i);
    }
    return s;
}

}  // namespace

Rat VolumeProfile::at(long i) const {
    auto it = by_class.find(i);
    return it == by_class.end() ? Rat(0) : it->second;
}

Rat VolumeProfile::at_most(long i) const {
    Rat total = 0;
    for (const auto& [cls, v] : by_class) {
        if (cls > i) break;
        total += v;
    }
    return total;
}

Rat VolumeProfile::total() const {
    Rat total = 0;
    for (const auto& [cls, v] : by_class) total += v;
    return total;
}

VolumeProfile volume_profile(const Trace& tr, const Rat& t) {
    TraceCursor c(tr);
    c.advance_to(t);
    return VolumeProfile{c.volumes()};
}

std::set<long> far_behind_set(const Trace& alg, const Trace& opt, const Rat& t, const Rat& mu2) {
    require_same_instance(alg, opt);
    if (mu2 < 1) throw InvalidInput("mu2 is at least 1");
    TraceCursor ca(alg), co(opt);
    ca.advance_to(t);
    co.advance_to(t);
    auto [lo, hi] = class_range(alg.realized);
    if (alg.realized.jobs.empty()) return {};
    return far_behind_classes(ca, co, lo, hi, mu2);
}

std::vector<long> sparsify(const std::set<long>& s, long sigma) {
    if (sigma < 1) throw InvalidInput("sparsify needs sigma >= 1");
    std::vector<long> out;
    for (long cls : s)
        if (out.empty() || cls - out.back() >= 2 * sigma) out.push_back(cls);
    return out;
}

PartialFullCounts partial_full_counts(const Trace& tr, const Rat& t) {
    if (tr.scheduler == "srpt")
        throw UnsupportedTrace("partial/full counts need a marking policy's trace");
    TraceCursor c(tr);
    c.advance_to(t);
    return {c.partials(), c.pending() - c.partials()};
}

bool ratio_less(const Ratio& a, const Ratio& b) {
    if (a.infinite || b.infinite) return !a.infinite && b.infinite;
    return a.value < b.value;
}

std::string ratio_str(const Ratio& r) { return r.infinite ? "inf" : rat_str(r.value); }

Ratio competitive_ratio(const Rat& alg_flow, const Rat& opt_flow) {
    if (opt_flow == 0) {
        if (alg_flow == 0) return {Rat(1), false};
        return {Rat(0), true};
    }
    return {alg_flow / opt_flow, false};
}

LocalRatioReport local_ratio_report(const Trace& alg, const Trace& opt,
                                    std::vector<Rat> sample_times) {
    require_same_instance(alg, opt);
    if (sample_times.empty()) {
        sample_times.reserve(alg.events.size() + opt.events.size());
        for (const TraceEvent& e : alg.events) sample_times.push_back(e.t);
        for (const TraceEvent& e : opt.events) sample_times.push_back(e.t);
    }
    std::sort(sample_times.begin(), sample_times.end());
    sample_times.erase(std::unique(sample_times.begin(), sample_times.end()),
                       sample_times.end());

    DistortionStats dist = distortion_of(alg.realized);
    auto [cls_lo, cls_hi] = class_range(alg.realized);
    bool have_jobs = !alg.realized.jobs.empty();

    LocalRatioReport rep;
    rep.max_ratio = {Rat(0), false};
    rep.witness_t = 0;
    TraceCursor ca(alg), co(opt);
    for (const Rat& t : sample_times) {
        ca.advance_to(t);
        co.advance_to(t);
        LocalRatioRow row;
        row.t = t;
        row.delta_alg = ca.pending();
        row.delta_opt = co.pending();
        if (row.delta_opt == 0) {
            row.flagged = row.delta_alg > 0;
            row.ratio = row.flagged ? Ratio{Rat(0), true} : Ratio{Rat(0), false};
        } else {
            row.ratio = {rat(row.delta_alg, row.delta_opt), false};
        }
        rep.any_flagged = rep.any_flagged || row.flagged;
        if (ratio_less(rep.max_ratio, row.ratio)) {
            rep.max_ratio = row.ratio;
            rep.witness_t = t;
        }
        if (have_jobs) {
            std::set<long> s = far_behind_classes(ca, co, cls_lo, cls_hi, dist.mu2);
            ++rep.far_behind_hist[static_cast<long>(s.size())];
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

void write_local_ratio_csv(const LocalRatioReport& rep, std::ostream& out) {
    out << "t_num,t_den,delta_alg,delta_opt,ratio_num,ratio_den,ratio_approx\n";
    for (const LocalRatioRow& r : rep.rows) {
        out << r.t.get_num().get_str() << ',' << r.t.get_den().get_str() << ',' << r.delta_alg
            << ',' << r.delta_opt << ',';
        if (r.ratio.infinite)
            out << "1,0,inf";
        else
            out << r.ratio.value.get_num().get_str() << ',' << r.ratio.value.get_den().get_str()
                << ',' << rat_decimal(r.ratio.value);
        out << '\n';
    }
}

void write_local_ratio_summary(const LocalRatioReport& rep, std::ostream& out) {
    nlohmann::ordered_json o;
    o["max_ratio"] = ratio_str(rep.max_ratio);
    o["witness_t"] = rat_str(rep.witness_t);
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto& [size, count] : rep.far_behind_hist) hist[std::to_string(size)] = count;
    o["far_behind_hist"] = std::move(hist);
    out << o.dump(2) << "\n";
}

}  // namespace flowlab
