#include "flowlab/schedulers.hpp"

#include <limits>
#include <map>
#include <set>
#include <utility>

namespace flowlab {

namespace {

constexpr long kNoClass = std::numeric_limits<long>::max();

struct RelId {
    Rat release;
    JobId id;
    bool operator<(const RelId& o) const {
        int c = cmp(release, o.release);
        if (c != 0) return c < 0;
        return id < o.id;
    }
};

// Pending jobs that were never promoted to partial, grouped by class and
// ordered by (release, id) within a class.
class FullSet {
public:
    void insert(long cls, RelId key) { by_cls_[cls].insert(key); }
    void erase(long cls, RelId key) {
        auto it = by_cls_.find(cls);
        it->second.erase(key);
        if (it->second.empty()) by_cls_.erase(it);
    }
    bool empty() const { return by_cls_.empty(); }
    long min_class() const { return empty() ? kNoClass : by_cls_.begin()->first; }
    std::pair<long, RelId> min_job() const {
        const auto& [cls, set] = *by_cls_.begin();
        return {cls, *set.begin()};
    }
    std::size_t count_below(long cls) const {
        std::size_t count = 0;
        for (auto it = by_cls_.begin(); it != by_cls_.end() && it->first < cls; ++it)
            count += it->second.size();
        return count;
    }
    std::size_t count_at(long cls) const {
        auto it = by_cls_.find(cls);
        return it == by_cls_.end() ? 0 : it->second.size();
    }
    bool any_in(long lo, long hi) const {  // closed class interval
        auto it = by_cls_.lower_bound(lo);
        return it != by_cls_.end() && it->first <= hi;
    }

private:
    std::map<long, std::set<RelId>> by_cls_;
};

// Shared bookkeeping for the class-based policies: a full set plus at most
// one partial job per class.
class ClassPolicy : public Scheduler {
public:
    void on_release(const JobView& v, const Rat&, EventLog&) override {
        if (info_.size() <= v.id) info_.resize(v.id + 1);
        info_[v.id] = Info{v.cls, v.release, v.estimate, false, MarkKind::plain};
        fulls_.insert(v.cls, {v.release, v.id});
    }

    void on_complete(JobId j, const Rat&, EventLog&) override {
        const Info& in = info_[j];
        if (in.partial)
            partials_.erase(in.cls);
        else
            fulls_.erase(in.cls, {in.release, j});
    }

protected:
    struct Info {
        long cls = 0;
        Rat release;
        Rat estimate;
        bool partial = false;
        MarkKind kind = MarkKind::plain;
    };

    struct Partial {
        JobId id;
        MarkKind kind;
    };

    // Promote the minimum-class full job (ties by release, then id).
    JobId promote(MarkKind kind, EventLog& log) {
        auto [cls, key] = fulls_.min_job();
        fulls_.erase(cls, key);
        auto [it, fresh] = partials_.emplace(cls, Partial{key.id, kind});
        if (!fresh) throw ContractViolation("second partial job in one class");
        info_[key.id].partial = true;
        info_[key.id].kind = kind;
        log.mark_partial(key.id, kind);
        return key.id;
    }

    std::vector<Info> info_;
    FullSet fulls_;
    std::map<long, Partial> partials_;
};

// Shortest estimated processing time, at class granularity: process the
// minimum-class job, preferring a partial over a full of the same class, and
// promote (ties: release, then id) when a full class leads.
class Sept final : public ClassPolicy {
public:
    std::string_view key() const override { return "sept"; }

    JobId choose(const Rat&, EventLog& log) override {
        if (!partials_.empty() && partials_.begin()->first <= fulls_.min_class())
            return partials_.begin()->second.id;
        return promote(MarkKind::plain, log);
    }
};

// Smart-restarts discipline: stay on the minimum-class partial q unless two
// distinct full witnesses argue for a restart, one of class < c(q) and
// another of class <= c(q); then promote the minimum full and re-evaluate.
class Sr final : public ClassPolicy {
public:
    std::string_view key() const override { return "sr"; }

    JobId choose(const Rat&, EventLog& log) override {
        for (;;) {
            if (partials_.empty()) {
                promote(MarkKind::plain, log);
                continue;
            }
            const auto& [cq, q] = *partials_.begin();
            std::size_t below = fulls_.count_below(cq);
            if (below >= 1 && below + fulls_.count_at(cq) >= 2) {
                promote(MarkKind::plain, log);
                continue;
            }
            return q.id;
        }
    }
};

// Estimate-oblivious alternation. The minimum-class partial q decides:
//   zig/zigzag: a strictly lower full exists -> promote it (zag after a zig,
//     zig after a zigzag);
//   zag: a full inside [c(q), next-higher partial's class] morphs q into a
//     zigzag; otherwise two fulls strictly below c(q) promote a fresh zig.
// Repeats until no rule fires, then processes q.
class ZigZag final : public ClassPolicy {
public:
    std::string_view key() const override { return "zigzag"; }

    JobId choose(const Rat&, EventLog& log) override {
        for (;;) {
            if (partials_.empty()) {
                promote(MarkKind::zig, log);
                continue;
            }
            auto it = partials_.begin();
            const long cq = it->first;
            Partial& q = it->second;
            if (q.kind == MarkKind::zig || q.kind == MarkKind::zigzag) {
                if (fulls_.min_class() < cq) {
                    promote(q.kind == MarkKind::zig ? MarkKind::zag : MarkKind::zig, log);
                    continue;
                }
                return q.id;
            }
            // q is a zag; the alternation structure guarantees a higher partial.
            auto up = std::next(it);
            if (up == partials_.end())
                throw ContractViolation("zag partial without a higher partial");
            if (fulls_.any_in(cq, up->first)) {
                q.kind = MarkKind::zigzag;
                info_[q.id].kind = MarkKind::zigzag;
                log.morph(q.id, MarkKind::zigzag);
                continue;
            }
            if (fulls_.count_below(cq) >= 2) {
                promote(MarkKind::zig, log);
                continue;
            }
            return q.id;
        }
    }
};

// Distortion learner: like Sr, but the second witness may sit anywhere below
// c(q) + sigma_hat, where sigma_hat starts at 2 and grows as running jobs
// overshoot powers of two times their estimate.
class Dl final : public ClassPolicy {
public:
    std::string_view key() const override { return "dl"; }

    void on_release(const JobView& v, const Rat& now, EventLog& log) override {
        ClassPolicy::on_release(v, now, log);
        if (processed_.size() <= v.id) processed_.resize(v.id + 1, Rat(0));
    }

    void on_processed(JobId j, const Rat& delta, const Rat&, bool completing,
                      EventLog& log) override {
        Rat& x = processed_[j];
        x += delta;
        const Rat& e = info_[j].estimate;
        if (x < e) return;
        Rat r = x / e;
        long i = floor_log2(r);
        // A job finishing exactly on a threshold has only proven
        // p == 2^i * estimate, which the previous threshold already covers.
        if (completing && pow2(i) == r) --i;
        if (i < 0) return;
        if (i + 2 > sigma_hat_) {
            sigma_hat_ = i + 2;
            log.sigma_update(sigma_hat_);
        }
    }

    std::optional<Rat> wakeup_after(const Rat& now) const override {
        // Next volume threshold 2^i * estimate of the job we just chose whose
        // update i + 2 would actually raise sigma_hat.
        const Rat& x = processed_[last_];
        const Rat& e = info_[last_].estimate;
        long i = x < e ? 0 : floor_log2(x / e) + 1;
        if (i + 2 <= sigma_hat_) i = sigma_hat_ - 1;
        return now + (pow2(i) * e - x);
    }

    JobId choose(const Rat&, EventLog& log) override {
        for (;;) {
            if (partials_.empty()) {
                promote(MarkKind::plain, log);
                continue;
            }
            const auto& [cq, q] = *partials_.begin();
            if (fulls_.count_below(cq) >= 1 && fulls_.count_below(cq + sigma_hat_) >= 2) {
                promote(MarkKind::plain, log);
                continue;
            }
            last_ = q.id;
            return q.id;
        }
    }

private:
    long sigma_hat_ = 2;
    JobId last_ = kNoJob;
    std::vector<Rat> processed_;
};

// Clairvoyant shortest-remaining-processing-time. Ties keep the running job,
// then earliest release, then smallest id.
class Srpt final : public Scheduler {
public:
    std::string_view key() const override { return "srpt"; }
    bool clairvoyant() const override { return true; }

    void on_release(const JobView& v, const Rat&, EventLog&) override {
        if (!v.true_remaining) throw ContractViolation("srpt needs true volumes");
        if (remaining_.size() <= v.id) remaining_.resize(v.id + 1, Rat(0));
        if (release_.size() <= v.id) release_.resize(v.id + 1, Rat(0));
        remaining_[v.id] = *v.true_remaining;
        release_[v.id] = v.release;
        queue_.insert(entry(v.id));
    }

    void on_processed(JobId j, const Rat& delta, const Rat&, bool completing,
                      EventLog&) override {
        queue_.erase(entry(j));
        remaining_[j] -= delta;
        if (!completing) queue_.insert(entry(j));
    }

    void on_complete(JobId j, const Rat&, EventLog&) override {
        if (running_ == j) running_ = kNoJob;
    }

    JobId choose(const Rat&, EventLog&) override {
        const Key& best = *queue_.begin();
        if (running_ != kNoJob && remaining_[running_] == std::get<0>(best))
            return running_;
        running_ = std::get<2>(best);
        return running_;
    }

private:
    using Key = std::tuple<Rat, Rat, JobId>;  // (remaining, release, id)
    struct KeyLess {
        bool operator()(const Key& a, const Key& b) const {
            if (int c = cmp(std::get<0>(a), std::get<0>(b)); c != 0) return c < 0;
            if (int c = cmp(std::get<1>(a), std::get<1>(b)); c != 0) return c < 0;
            return std::get<2>(a) < std::get<2>(b);
        }
    };

    Key entry(JobId j) const { return {remaining_[j], release_[j], j}; }

    std::vector<Rat> remaining_, release_;
    std::set<Key, KeyLess> queue_;
    JobId running_ = kNoJob;
};

}  // namespace

std::unique_ptr<Scheduler> make_scheduler(std::string_view key) {
    if (key == "srpt") return std::make_unique<Srpt>();
    if (key == "sept") return std::make_unique<Sept>();
    if (key == "sr") return std::make_unique<Sr>();
    if (key == "zigzag") return std::make_unique<ZigZag>();
    if (key == "dl") return std::make_unique<Dl>();
    throw InvalidInput("unknown scheduler: '" + std::string(key) + "'");
}

const std::vector<std::string_view>& scheduler_keys() {
    static const std::vector<std::string_view> keys{"srpt", "sept", "sr", "zigzag", "dl"};
    return keys;
}

}  // namespace flowlab
