#include "flowlab/engine.hpp"

#include "flowlab/instance_io.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace flowlab {

void Scheduler::on_processed(JobId, const Rat&, const Rat&, bool, EventLog&) {}

std::optional<Rat> Scheduler::wakeup_after(const Rat&) const { return std::nullopt; }

Trace simulate(const Instance& inst, Scheduler& sched, std::uint64_t seed) {
    validate_instance(inst);
    if (inst.adaptive && sched.clairvoyant())
        throw InvalidInput("a clairvoyant policy cannot face an adaptive oracle");

    Trace tr;
    tr.scheduler = std::string(sched.key());
    tr.seed = seed;
    tr.instance_hash = instance_hash(inst);
    tr.realized = inst;
    sched.seed(seed);

    auto& jobs = tr.realized.jobs;
    const std::size_t n = jobs.size();
    Rat now = 0;
    EventLog log(tr, now);
    std::optional<AdaptiveOracle> adaptive = inst.adaptive;
    std::vector<Rat> processed(n);
    std::vector<char> released(n, 0), done(n, 0);
    std::size_t next_rel = 0, n_pending = 0, n_done = 0;
    JobId running = kNoJob;

    auto target_of = [&](JobId j) -> const Rat& {
        return adaptive ? adaptive->mu : jobs[j].p_true;
    };

    struct Advance {
        JobId job;
        Rat delta;
        bool completes;
    };
    std::optional<Advance> adv;

    while (n_done < n) {
        if (!adv && n_pending == 0) {
            // Idle: jump to the next release, but never past a live snapshot.
            Rat next = jobs[next_rel].release;
            if (adaptive && adaptive->snapshot < next) next = adaptive->snapshot;
            now = next;
        }
        // Same-timestamp order: releases, then the ending interval's
        // bookkeeping and completion, then the snapshot, then one decision.
        while (next_rel < n && jobs[next_rel].release == now) {
            const Job& j = jobs[next_rel];
            released[j.id] = 1;
            ++n_pending;
            log.raw(EventKind::release, j.id);
            JobView view{j.id, j.cls, j.release, j.p_est, std::nullopt};
            if (sched.clairvoyant()) view.true_remaining = j.p_true;
            sched.on_release(view, now, log);
            ++next_rel;
        }
        if (adv) {
            processed[adv->job] += adv->delta;
            sched.on_processed(adv->job, adv->delta, now, adv->completes, log);
            if (adv->completes) {
                done[adv->job] = 1;
                --n_pending;
                ++n_done;
                log.raw(EventKind::complete, adv->job);
                sched.on_complete(adv->job, now, log);
                running = kNoJob;
            }
            adv.reset();
        }
        if (adaptive && now == adaptive->snapshot) {
            for (Job& j : jobs) {
                if (done[j.id]) {
                    j.p_true = adaptive->mu;  // a finished job really took mu
                    continue;
                }
                Rat realization = processed[j.id] + 1;
                j.p_true = realization < adaptive->mu ? realization : adaptive->mu;
            }
            adaptive.reset();
            // The realized instance is an ordinary one from here on.
            tr.realized.adaptive.reset();
            tr.realized.meta["adaptive_realized"] = "1";
            log.raw(EventKind::snapshot, kNoJob);
        }
        if (n_done == n) break;
        if (n_pending == 0) continue;

        JobId chosen = sched.choose(now, log);
        if (chosen == kNoJob)
            throw ContractViolation("policy idled with jobs pending at t=" + rat_str(now));
        if (chosen >= n || !released[chosen] || done[chosen])
            throw ContractViolation("policy chose a job that is not pending at t=" + rat_str(now));
        if (chosen != running) {
            if (running != kNoJob) log.raw(EventKind::preempt, running);
            log.raw(EventKind::start, chosen);
            running = chosen;
        }

        Rat t_next = now + (target_of(chosen) - processed[chosen]);
        bool completes = true;
        auto cap = [&](const Rat& t) {
            if (t < t_next) {
                t_next = t;
                completes = false;
            }
        };
        if (next_rel < n) cap(jobs[next_rel].release);
        if (adaptive) cap(adaptive->snapshot);
        if (auto w = sched.wakeup_after(now)) {
            if (*w <= now)
                throw ContractViolation("wakeup must be in the future (t=" + rat_str(now) + ")");
            cap(*w);
        }
        adv = Advance{chosen, t_next - now, completes};
        now = t_next;
    }
    return tr;
}

namespace {

// Completion time per job id; demands a trace that finishes everything.
std::vector<Rat> completion_times(const Trace& tr) {
    const std::size_t n = tr.realized.jobs.size();
    std::vector<Rat> comp(n, Rat(-1));
    std::size_t seen = 0;
    for (const TraceEvent& e : tr.events) {
        if (e.kind != EventKind::complete) continue;
        if (e.job >= n || comp[e.job] >= 0) throw InvalidInput("malformed completion events");
        comp[e.job] = e.t;
        ++seen;
    }
    if (seen != n) throw InvalidInput("trace does not complete every job");
    return comp;
}

// Machine time given to each job over (-inf, t].
std::vector<Rat> processed_by(const Trace& tr, const Rat& t) {
    std::vector<Rat> acc(tr.realized.jobs.size());
    JobId running = kNoJob;
    Rat from;
    for (const TraceEvent& e : tr.events) {
        if (e.kind == EventKind::start) {
            running = e.job;
            from = e.t;
            if (from >= t) break;  // later intervals cannot overlap (-inf, t]
        } else if (e.kind == EventKind::preempt || e.kind == EventKind::complete) {
            if (running != kNoJob) {
                const Rat& to = e.t < t ? e.t : t;
                if (to > from) acc[running] += to - from;
                running = kNoJob;
            }
        }
    }
    if (running != kNoJob && t > from) acc[running] += t - from;
    return acc;
}

}  // namespace

Rat total_flow_time(const Trace& tr) {
    std::vector<Rat> comp = completion_times(tr);
    Rat total = 0;
    for (const Job& j : tr.realized.jobs) total += comp[j.id] - j.release;
    return total;
}

long pending_at(const Trace& tr, const Rat& t) {
    std::vector<Rat> comp = completion_times(tr);
    long count = 0;
    for (const Job& j : tr.realized.jobs)
        if (j.release <= t && comp[j.id] > t) ++count;
    return count;
}

long pending_at_least(const Trace& tr, const Rat& t, const Rat& x) {
    std::vector<Rat> comp = completion_times(tr);
    std::vector<Rat> acc = processed_by(tr, t);
    long count = 0;
    for (const Job& j : tr.realized.jobs)
        if (j.release <= t && comp[j.id] > t && j.p_true - acc[j.id] >= x) ++count;
    return count;
}

}  // namespace flowlab
