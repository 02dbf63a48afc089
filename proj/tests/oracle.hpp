#pragma once

// Brute-force minimum total flow time for small integral instances,
// independent of any scheduling policy in the library. Optimal preemptive
// schedules for integral releases and volumes can be assumed to switch jobs
// only at integer times (a standard exchange argument), so a unit-slot
// dynamic program over (time, remaining volumes) is exact.

#include "flowlab/instance.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace flowlab::oracle {

struct SlotJob {
    long release = 0;
    long volume = 0;
};

class MinFlowDp {
public:
    explicit MinFlowDp(std::vector<SlotJob> jobs) : jobs_(std::move(jobs)) {}

    long best() {
        std::vector<long> rem(jobs_.size());
        for (std::size_t j = 0; j < jobs_.size(); ++j) rem[j] = jobs_[j].volume;
        return solve(0, rem);
    }

private:
    long solve(long t, std::vector<long>& rem) {
        long next_release = -1;
        bool any_pending = false, any_left = false;
        for (std::size_t j = 0; j < jobs_.size(); ++j) {
            if (rem[j] == 0) continue;
            any_left = true;
            if (jobs_[j].release <= t)
                any_pending = true;
            else if (next_release < 0 || jobs_[j].release < next_release)
                next_release = jobs_[j].release;
        }
        if (!any_left) return 0;
        if (!any_pending) return solve(next_release, rem);

        auto key = std::make_pair(t, rem);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        long pending = 0;
        for (std::size_t j = 0; j < jobs_.size(); ++j)
            if (rem[j] > 0 && jobs_[j].release <= t) ++pending;

        long best = -1;
        for (std::size_t j = 0; j < jobs_.size(); ++j) {
            if (rem[j] == 0 || jobs_[j].release > t) continue;
            --rem[j];
            long v = pending + solve(t + 1, rem);
            ++rem[j];
            if (best < 0 || v < best) best = v;
        }
        memo_.emplace(key, best);
        return best;
    }

    std::vector<SlotJob> jobs_;
    std::map<std::pair<long, std::vector<long>>, long> memo_;
};

inline long min_total_flow(const std::vector<SlotJob>& jobs) {
    return MinFlowDp(jobs).best();
}

// The matching exact-volume instance (estimates equal true volumes).
inline Instance to_instance(const std::vector<SlotJob>& jobs) {
    Instance inst;
    std::vector<SlotJob> sorted = jobs;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const SlotJob& a, const SlotJob& b) { return a.release < b.release; });
    for (std::size_t j = 0; j < sorted.size(); ++j)
        inst.jobs.push_back(make_job(static_cast<JobId>(j), rat(sorted[j].release),
                                     rat(sorted[j].volume), rat(sorted[j].volume)));
    return inst;
}

}  // namespace flowlab::oracle
