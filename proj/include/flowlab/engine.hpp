#pragma once

#include "flowlab/instance.hpp"
#include "flowlab/trace.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace flowlab {

// A scheduler broke the simulation contract (idled while work was pending,
// chose a job that is not pending, ...). Distinct from InvalidInput: the
// operator's data was fine, the policy misbehaved.
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

// What a policy is allowed to see about a job. true_remaining is filled for
// clairvoyant policies only; non-clairvoyant ones never receive the true
// volume through any callback.
struct JobView {
    JobId id = 0;
    long cls = 0;
    Rat release;
    Rat estimate;
    std::optional<Rat> true_remaining;
};

// Scheduler-visible slice of the trace being recorded. The engine writes the
// machine events (release/start/preempt/complete/snapshot); policies append
// their bookkeeping decisions here so every mark is visible downstream.
class EventLog {
public:
    EventLog(Trace& tr, const Rat& now) : tr_(tr), now_(now) {}

    void mark_partial(JobId job, MarkKind kind) {
        tr_.events.push_back({now_, EventKind::mark_partial, job, std::string(mark_kind_name(kind))});
    }
    void morph(JobId job, MarkKind into) {
        tr_.events.push_back({now_, EventKind::morph, job, std::string(mark_kind_name(into))});
    }
    void sigma_update(long sigma_hat) {
        tr_.events.push_back({now_, EventKind::sigma_update, kNoJob, std::to_string(sigma_hat)});
    }

private:
    friend Trace simulate(const Instance&, class Scheduler&, std::uint64_t);
    void raw(EventKind kind, JobId job, std::string tag = {}) {
        tr_.events.push_back({now_, kind, job, std::move(tag)});
    }
    Trace& tr_;
    const Rat& now_;
};

class Scheduler {
public:
    virtual ~Scheduler() = default;
    virtual std::string_view key() const = 0;
    virtual bool clairvoyant() const { return false; }
    virtual void seed(std::uint64_t) {}

    virtual void on_release(const JobView& job, const Rat& now, EventLog& log) = 0;
    // delta > 0 of machine time just given to `job`, ending at `now`;
    // `completing` is true when the job finishes exactly at `now`.
    virtual void on_processed(JobId job, const Rat& delta, const Rat& now, bool completing,
                              EventLog& log);
    virtual void on_complete(JobId job, const Rat& now, EventLog& log) = 0;
    // Pick the pending job to process next; may emit marks/morphs while
    // converging. Called only when at least one job is pending.
    virtual JobId choose(const Rat& now, EventLog& log) = 0;
    // Absolute time (> now) at which the policy wants a decision point even
    // if nothing else happens, or nullopt. Queried after choose().
    virtual std::optional<Rat> wakeup_after(const Rat& now) const;
};

// Exact preemptive single-machine simulation, driven only by decision events:
// releases, completions, policy wakeups, and the adaptive snapshot. At one
// timestamp the order is: releases (input order), then processing
// bookkeeping and the completion if any, then the snapshot, then exactly one
// scheduling decision. Work-conserving by construction; a policy cannot
// idle the machine while jobs are pending.
//
// With an adaptive oracle attached, every job's completion target is mu until
// the snapshot time; at the snapshot each unfinished job's true volume
// becomes min(processed + 1, mu) (untouched jobs: 1), the realized instance
// replaces the input inside the trace, and the run continues normally.
Trace simulate(const Instance& inst, Scheduler& sched, std::uint64_t seed = 0);

// Trace measurements used everywhere downstream (richer tooling lives in
// metrics.hpp). Times are exact; t may be any rational.
Rat total_flow_time(const Trace& tr);
long pending_at(const Trace& tr, const Rat& t);
long pending_at_least(const Trace& tr, const Rat& t, const Rat& x);

}  // namespace flowlab
