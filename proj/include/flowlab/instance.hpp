#pragma once

#include "flowlab/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace flowlab {

using JobId = std::uint32_t;
constexpr JobId kNoJob = 0xffffffffu;

// A job's class is the unique i with 2^i <= estimate < 2^(i+1). Intervals are
// closed below and open above, so an estimate of exactly 2^i lands in class i.
long job_class(const Rat& estimate);

struct Job {
    JobId id = 0;
    Rat release;
    Rat p_true;   // true processing volume
    Rat p_est;    // the estimate shown to non-clairvoyant policies
    long cls = 0; // cached job_class(p_est)
};

Job make_job(JobId id, Rat release, Rat p_true, Rat p_est);

// Deferred-completion adversary state: until the snapshot time every job's
// completion is pushed out to volume mu, and at the snapshot each job's true
// volume is fixed from the work it has received (see engine.hpp).
struct AdaptiveOracle {
    Rat mu;
    Rat snapshot;
};

struct Instance {
    std::vector<Job> jobs;  // sorted by (release, id); ids are 0..n-1
    std::map<std::string, std::string> meta;
    std::optional<AdaptiveOracle> adaptive;
};

// Throws InvalidInput unless: ids are exactly 0..n-1, jobs are sorted by
// (release, id), releases are >= 0, and all volumes/estimates are > 0.
void validate_instance(const Instance& inst);

struct DistortionStats {
    Rat mu1;  // max(1, max p_true / p_est): underestimation factor
    Rat mu2;  // max(1, max p_est / p_true): overestimation factor
    Rat mu;   // mu1 * mu2
};

// Requires a fully realized instance (no pending adaptive oracle); the empty
// instance has distortion (1, 1, 1).
DistortionStats distortion_of(const Instance& inst);

// Class separation horizon: sigma = ceil(log2 mu) + 1, defined for mu >= 1.
// Any job of class i + sigma has true volume at least 2^(i+sigma)/mu2, which
// is >= mu1 * 2^(i+1) and therefore exceeds the true volume of every class-i
// job; the middle inequality is tight exactly when mu is a power of two.
long separator_sigma(const Rat& mu);

}  // namespace flowlab
