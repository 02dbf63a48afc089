#pragma once

#include "flowlab/instance.hpp"

#include <cstdint>
#include <optional>

namespace flowlab {

// Instance families used by the experiments. Every generator records its
// name and parameters in meta (so runs are reproducible from the file alone)
// and, where a natural measurement horizon exists, meta["t"].

// Exponentially shrinking chain that starves class-granular SEPT: one job of
// estimate 2^j + 1 at each hop j = i, i-1, ..., i/2, spaced so each job
// arrives when the previous one has exactly one unit left. Estimates are
// exact (p_true == p_est). Requires even i >= 2; horizon t = sum of gaps.
Instance gen_sept_bad_case(long i);

// Underestimation chain (every job hides a factor-4 overshoot, mu = 4) that
// forces restart-happy policies to strand one long job per scale. Requires
// i >= 1; horizon t = 8 * (2^i - 1).
Instance gen_sr_bad_case(long i);

// base plus m unit jobs (p_true == p_est == 1) released one per time step at
// t, t+1, ..., t+m-1. Job ids continue after base's; base must have no
// release later than t. Keeps base's distortion.
Instance gen_bombard(const Instance& base, const Rat& t, long m);

// k jobs at time 0, estimate 1, true volume geometric(1/2). Horizon
// t = 2 * (k - floor(k^(3/4))). Requires k >= 2.
Instance gen_lb_prime(long k, std::uint64_t seed);

// Same shape with volumes capped at mu: instances are redrawn wholesale until
// every volume is <= mu, keeping the conditional distribution exact. Default
// k = floor(2^(mu/2)); pass k_override to scale separately. Requires mu >= 2
// and integral.
Instance gen_lb_capped(const Rat& mu, std::uint64_t seed, std::optional<long> k_override = {});

// n jobs at time 0 with estimate 1 under an adaptive oracle: completions are
// deferred to volume mu until the snapshot at t = n * mu / 2, when each
// unfinished job's volume becomes min(processed + 1, mu). Requires n >= 1 and
// mu >= 16. p_true is the pre-snapshot target mu (jobs finished before the
// snapshot really took mu).
Instance gen_adaptive_det_lb(long n, const Rat& mu);

// n jobs with small random release gaps and estimates spread over
// [class_lo, class_hi]; distortion factors are drawn per job and pinned so
// the realized instance hits mu1 and mu2 exactly (job 0 underestimates by
// exactly mu1, job 1 overestimates by exactly mu2). Requires n >= 2 unless
// mu1 == mu2 == 1, in which case n == 1 is allowed.
Instance gen_random_distorted(long n, const Rat& mu1, const Rat& mu2, long class_lo,
                              long class_hi, std::uint64_t seed);

}  // namespace flowlab
