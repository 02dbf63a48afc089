#include "flowlab/checks.hpp"

#include "flowlab/instance_io.hpp"
#include "flowlab/metrics.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>

namespace flowlab {

namespace {

class Checker {
public:
    Checker(const Trace& alg, const Trace* opt, const CheckOptions& opts)
        : tr_(alg), opts_(opts), jobs_(alg.realized.jobs) {
        const std::size_t n = jobs_.size();
        released_.assign(n, 0);
        done_.assign(n, 0);
        kind_.assign(n, -1);
        remaining_.reserve(n);
        for (const Job& j : jobs_) {
            remaining_.push_back(j.p_true);
            if (j.cls < cls_lo_) cls_lo_ = j.cls;
            if (j.cls > cls_hi_) cls_hi_ = j.cls;
        }
        if (jobs_.empty()) cls_lo_ = cls_hi_ = 0;
        DistortionStats d = distortion_of(alg.realized);
        mu2_ = d.mu2;
        sigma_ = separator_sigma(d.mu);
        if (opt && tr_.scheduler == "zigzag") {
            if (write_instance(alg.realized) != write_instance(opt->realized))
                throw InvalidInput("optimum trace is over a different realized instance");
            opt_.emplace(*opt);
        }
    }

    std::vector<CheckViolation> run() {
        std::size_t completions = 0;
        for (const TraceEvent& e : tr_.events)
            if (e.kind == EventKind::complete) ++completions;
        if (completions != jobs_.size())
            report(Rat(0), "complete-trace", "trace completes " + std::to_string(completions) +
                                                 " of " + std::to_string(jobs_.size()) + " jobs");

        std::size_t i = 0;
        while (i < tr_.events.size() && !full()) {
            const Rat t = tr_.events[i].t;
            if (t < clock_) {
                report(t, "event-order", "timestamps decrease");
                break;
            }
            drain(t);
            for (; i < tr_.events.size() && tr_.events[i].t == t; ++i) apply(tr_.events[i]);
            state_checks(t);
        }
        return std::move(violations_);
    }

private:
    bool full() const { return violations_.size() >= opts_.max_violations; }

    void report(const Rat& t, std::string check, std::string detail) {
        if (!full()) violations_.push_back({t, std::move(check), std::move(detail)});
    }

    std::string job_str(JobId j) const {
        return "job " + std::to_string(j) + " (class " + std::to_string(jobs_[j].cls) + ")";
    }

    bool pending(JobId j) const { return j < jobs_.size() && released_[j] && !done_[j]; }

    void drain(const Rat& to) {
        if (to <= clock_) return;
        if (running_ != kNoJob) remaining_[running_] -= to - clock_;
        clock_ = to;
    }

    void apply(const TraceEvent& e) {
        switch (e.kind) {
            case EventKind::release:
                if (e.job >= jobs_.size() || released_[e.job]) {
                    report(e.t, "release-once", "bad or repeated release of job " +
                                                    std::to_string(e.job));
                    break;
                }
                if (jobs_[e.job].release != e.t)
                    report(e.t, "release-time",
                           job_str(e.job) + " released at t != its release time");
                released_[e.job] = 1;
                ++pending_count_;
                ++pend_by_cls_[jobs_[e.job].cls];
                break;
            case EventKind::start:
                if (running_ != kNoJob)
                    report(e.t, "machine-exclusive",
                           "start of " + job_str(e.job) + " while " + job_str(running_) +
                               " still holds the machine");
                if (!pending(e.job))
                    report(e.t, "process-pending", "start of non-pending job " +
                                                       std::to_string(e.job));
                running_ = e.job;
                process_checks(e.t);
                break;
            case EventKind::preempt:
                if (running_ != e.job)
                    report(e.t, "preempt-running", "preempt of a job that is not running");
                running_ = kNoJob;
                break;
            case EventKind::complete: {
                if (!pending(e.job)) {
                    report(e.t, "complete-pending", "completion of non-pending job " +
                                                        std::to_string(e.job));
                    break;
                }
                if (running_ != e.job)
                    report(e.t, "complete-running", job_str(e.job) + " completed while not running");
                if (remaining_[e.job] != 0)
                    report(e.t, "complete-exact",
                           job_str(e.job) + " completed with remaining volume " +
                               rat_str(remaining_[e.job]));
                done_[e.job] = 1;
                --pending_count_;
                --pend_by_cls_[jobs_[e.job].cls];
                if (kind_[e.job] >= 0) {
                    auto it = partials_.find(jobs_[e.job].cls);
                    if (it != partials_.end() && it->second.first == e.job) partials_.erase(it);
                }
                running_ = kNoJob;
                break;
            }
            case EventKind::mark_partial:
                apply_mark(e);
                break;
            case EventKind::morph: {
                if (!pending(e.job) || kind_[e.job] != static_cast<int>(MarkKind::zag)) {
                    report(e.t, "morph-zag-only", "morph of a job that is not a pending zag");
                    break;
                }
                if (e.tag != "zigzag") {
                    report(e.t, "morph-target", "morph into '" + e.tag + "'");
                    break;
                }
                kind_[e.job] = static_cast<int>(MarkKind::zigzag);
                partials_[jobs_[e.job].cls].second = MarkKind::zigzag;
                break;
            }
            case EventKind::sigma_update: {
                long v = 0;
                try {
                    v = std::stol(e.tag);
                } catch (...) {
                    report(e.t, "sigma-tag", "unparseable sigma tag '" + e.tag + "'");
                    break;
                }
                if (v < sigma_hat_)
                    report(e.t, "sigma-monotone", "sigma-hat dropped from " +
                                                      std::to_string(sigma_hat_) + " to " +
                                                      std::to_string(v));
                sigma_hat_ = v;
                if (sigma_hat_ > sigma_)
                    report(e.t, "sigma-bound", "sigma-hat " + std::to_string(sigma_hat_) +
                                                   " exceeds ceil(log2 mu)+1 = " +
                                                   std::to_string(sigma_));
                break;
            }
            case EventKind::snapshot:
                break;
        }
    }

    void apply_mark(const TraceEvent& e) {
        if (!pending(e.job)) {
            report(e.t, "mark-pending", "mark of non-pending job " + std::to_string(e.job));
            return;
        }
        if (kind_[e.job] >= 0) {
            report(e.t, "mark-once", job_str(e.job) + " marked twice");
            return;
        }
        MarkKind k;
        try {
            k = mark_kind_from(e.tag);
        } catch (const InvalidInput&) {
            report(e.t, "mark-tag", "unknown mark tag '" + e.tag + "'");
            return;
        }
        long cls = jobs_[e.job].cls;
        if (!partials_.empty() && cls >= partials_.begin()->first)
            report(e.t, "mark-below-partials",
                   job_str(e.job) + " marked while a partial of class <= " +
                       std::to_string(cls) + " is pending");
        auto [it, fresh] = partials_.emplace(cls, std::make_pair(e.job, k));
        if (!fresh)
            report(e.t, "one-partial-per-class",
                   "second partial in class " + std::to_string(cls) + ": " + job_str(e.job) +
                       " joins " + job_str(it->second.first));
        kind_[e.job] = static_cast<int>(k);
    }

    // Invariants tied to the job being processed, evaluated as it starts.
    void process_checks(const Rat& t) {
        if (tr_.scheduler != "zigzag" || !pending(running_)) return;
        long cr = jobs_[running_].cls;
        if (kind_[running_] < 0) {
            report(t, "process-partial", "zigzag processes full " + job_str(running_));
            return;
        }
        // Only the minimum-class partial (or something below it) may run.
        if (!partials_.empty()) {
            auto& [cmin, pmin] = *partials_.begin();
            if (running_ != pmin.first && cr >= cmin)
                report(t, "process-min-partial",
                       job_str(running_) + " runs above the minimum partial class " +
                           std::to_string(cmin));
        }
        long below = 0;
        for (auto it = pend_by_cls_.begin(); it != pend_by_cls_.end() && it->first < cr; ++it)
            below += it->second;
        if (below > 1)
            report(t, "one-below-processed",
                   std::to_string(below) + " pending jobs below the processed class " +
                       std::to_string(cr));
    }

    // Invariants over the post-fixed-point state at each timestamp.
    void state_checks(const Rat& t) {
        if (pending_count_ > 0 && running_ == kNoJob)
            report(t, "non-idling", std::to_string(pending_count_) + " pending jobs but an idle machine");
        long delta_p = static_cast<long>(partials_.size());
        long delta_f = pending_count_ - delta_p;
        if (delta_f < 0) report(t, "counts", "more partials than pending jobs");

        if (tr_.scheduler == "zigzag") {
            // Alternation: by decreasing class zig, then zag-or-zigzag, ...
            long pos = 0;
            for (auto it = partials_.rbegin(); it != partials_.rend(); ++it) {
                ++pos;
                MarkKind k = it->second.second;
                bool ok = (pos % 2 == 1) ? (k == MarkKind::zig)
                                         : (k == MarkKind::zag || k == MarkKind::zigzag);
                if (!ok) {
                    report(t, "alternation",
                           "position " + std::to_string(pos) + " from the top is " +
                               std::string(mark_kind_name(k)));
                    break;
                }
            }
            for (auto it = partials_.begin(); it != partials_.end(); ++it) {
                if (it->second.second != MarkKind::zag) continue;
                if (std::next(it) == partials_.end())
                    report(t, "zag-has-higher-partial",
                           job_str(it->second.first) + " is a zag with no higher partial");
            }
            if (delta_p > 4 * delta_f + 3)
                report(t, "zigzag-partial-bound",
                       "delta_p=" + std::to_string(delta_p) + " > 4*delta_f+3 with delta_f=" +
                           std::to_string(delta_f));
            if (opt_) far_behind_checks(t);
        }
        if (tr_.scheduler == "dl") {
            long bound = (sigma_ + 2) * delta_f + (opts_.dl_strict_partial_bound ? 0 : 1);
            if (delta_p > bound)
                report(t, "dl-partial-bound",
                       "delta_p=" + std::to_string(delta_p) + " > (sigma+2)*delta_f" +
                           (opts_.dl_strict_partial_bound ? "" : "+1") +
                           " with delta_f=" + std::to_string(delta_f) + ", sigma=" +
                           std::to_string(sigma_));
        }
    }

    void far_behind_checks(const Rat& t) {
        opt_->advance_to(t);
        // Algorithm-side per-class volumes of pending jobs, vs the optimum's.
        std::map<long, Rat> va;
        for (const Job& j : jobs_)
            if (released_[j.id] && !done_[j.id] && remaining_[j.id] != 0)
                va[j.cls] += remaining_[j.id];
        std::set<long> s;
        Rat pa = 0, po = 0;
        auto iv = va.begin();
        auto io = opt_->volumes().begin();
        for (long i = cls_lo_; i <= cls_hi_; ++i) {
            for (; iv != va.end() && iv->first <= i; ++iv) pa += iv->second;
            for (; io != opt_->volumes().end() && io->first <= i; ++io) po += io->second;
            if (pa - po >= pow2(i) / mu2_) s.insert(i);
        }
        std::vector<long> sparse = sparsify(s, sigma_);
        for (std::size_t k = 1; k < sparse.size(); ++k)
            if (sparse[k] - sparse[k - 1] < 2 * sigma_)
                report(t, "sparsify-gap", "kept classes " + std::to_string(sparse[k - 1]) +
                                              " and " + std::to_string(sparse[k]));
        if (static_cast<long>(s.size()) > 2 * sigma_ * static_cast<long>(sparse.size()))
            report(t, "sparsify-size",
                   "|S|=" + std::to_string(s.size()) + " > 2*sigma*|S'| with sigma=" +
                       std::to_string(sigma_) + ", |S'|=" + std::to_string(sparse.size()));
    }

    const Trace& tr_;
    const CheckOptions& opts_;
    const std::vector<Job>& jobs_;
    std::vector<CheckViolation> violations_;

    std::vector<char> released_, done_;
    std::vector<int> kind_;  // -1 = full, else MarkKind
    std::vector<Rat> remaining_;
    std::map<long, std::pair<JobId, MarkKind>> partials_;
    std::map<long, long> pend_by_cls_;
    std::optional<TraceCursor> opt_;
    Rat clock_ = 0;
    JobId running_ = kNoJob;
    long pending_count_ = 0;
    long sigma_hat_ = 2;
    long sigma_ = 2;
    Rat mu2_ = 1;
    long cls_lo_ = std::numeric_limits<long>::max();
    long cls_hi_ = std::numeric_limits<long>::min();
};

}  // namespace

std::vector<CheckViolation> check_trace(const Trace& alg, const Trace* opt,
                                        const CheckOptions& opts) {
    Checker c(alg, opt, opts);
    return c.run();
}

}  // namespace flowlab
