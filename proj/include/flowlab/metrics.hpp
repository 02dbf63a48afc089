#pragma once

#include "flowlab/trace.hpp"

#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace flowlab {

// The trace cannot support the requested measurement (e.g. partial/full
// counts of a policy that never marks).
struct UnsupportedTrace : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Replays a trace in time order, maintaining the pending set, per-class
// remaining volumes, and promotion marks. Volumes are measured against the
// realized instance throughout; for adaptive traces the pre-snapshot prefix
// is treated as if volumes had been realized from the start.
class TraceCursor {
public:
    explicit TraceCursor(const Trace& tr);

    // Apply all events with time <= t and drain processing up to t.
    // Times must be presented in nondecreasing order across calls.
    void advance_to(const Rat& t);

    long pending() const { return pending_; }
    long partials() const { return partials_; }
    const std::map<long, Rat>& volumes() const { return vol_; }  // V_{=i}

private:
    void drain(const Rat& to);
    void apply(const TraceEvent& e);
    void vol_add(long cls, const Rat& d);
    void vol_sub(long cls, const Rat& d);

    const Trace& tr_;
    const std::vector<Job>& jobs_;
    std::vector<Rat> remaining_;
    std::vector<char> marked_;
    std::map<long, Rat> vol_;
    std::size_t ei_ = 0;
    Rat clock_ = 0;
    JobId running_ = kNoJob;
    long pending_ = 0;
    long partials_ = 0;
};

// Remaining volume of pending jobs at some time, split by class.
struct VolumeProfile {
    std::map<long, Rat> by_class;  // V_{=i}; classes with zero volume absent

    Rat at(long i) const;       // V_{=i}
    Rat at_most(long i) const;  // V_{<=i}
    Rat total() const;
};

VolumeProfile volume_profile(const Trace& tr, const Rat& t);

// Classes where alg's prefix volume lags opt's by at least 2^i / mu2,
// scanned over the realized instance's class range. Both traces must be over
// the same realized instance.
std::set<long> far_behind_set(const Trace& alg, const Trace& opt, const Rat& t, const Rat& mu2);

// Greedy thinning: keep min(S), then repeatedly the smallest class at least
// 2*sigma above the last kept one. |S| <= 2*sigma*|result| by construction.
std::vector<long> sparsify(const std::set<long>& s, long sigma);

struct PartialFullCounts {
    long delta_p = 0;  // pending jobs promoted at or before t
    long delta_f = 0;  // pending jobs never promoted
};

PartialFullCounts partial_full_counts(const Trace& tr, const Rat& t);

// Exact ratio with an explicit infinity (positive numerator over zero).
struct Ratio {
    Rat value;
    bool infinite = false;
};

bool ratio_less(const Ratio& a, const Ratio& b);
std::string ratio_str(const Ratio& r);

// alg_flow / opt_flow; 0/0 is 1 (equal flows), x/0 with x > 0 is infinite.
Ratio competitive_ratio(const Rat& alg_flow, const Rat& opt_flow);

struct LocalRatioRow {
    Rat t;
    long delta_alg = 0;
    long delta_opt = 0;
    Ratio ratio;         // 0 when both counts are 0
    bool flagged = false;  // delta_opt == 0 < delta_alg (precluded by non-idling)
};

struct LocalRatioReport {
    std::vector<LocalRatioRow> rows;
    Ratio max_ratio;
    Rat witness_t;                        // earliest time attaining max_ratio
    std::map<long, long> far_behind_hist;  // |far-behind set| -> sample count
    bool any_flagged = false;
};

// Pending-count competitiveness sampled at sample_times (default: the union
// of both traces' event times, which is exact since counts are piecewise
// constant between events).
LocalRatioReport local_ratio_report(const Trace& alg, const Trace& opt,
                                    std::vector<Rat> sample_times = {});

// CSV columns: t_num, t_den, delta_alg, delta_opt, ratio_num, ratio_den,
// ratio_approx. The approx column is decimal and approximate; the rest are
// exact. An infinite ratio is written as 1/0 (approx "inf").
void write_local_ratio_csv(const LocalRatioReport& rep, std::ostream& out);

// JSON object {max_ratio, witness_t, far_behind_hist}.
void write_local_ratio_summary(const LocalRatioReport& rep, std::ostream& out);

}  // namespace flowlab
