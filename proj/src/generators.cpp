#include "flowlab/generators.hpp"

#include "flowlab/rng.hpp"

#include <string>
#include <utility>

namespace flowlab {

namespace {

void push_job(Instance& inst, Rat release, Rat p_true, Rat p_est) {
    JobId id = static_cast<JobId>(inst.jobs.size());
    inst.jobs.push_back(make_job(id, std::move(release), std::move(p_true), std::move(p_est)));
}

// floor of the b-th root of 2^a, exactly.
long floor_root_pow2(unsigned long a, unsigned long b) {
    if (a > 4096) throw InvalidInput("exponent too large for a desk-scale instance");
    mpz_class big;
    mpz_ui_pow_ui(big.get_mpz_t(), 2, a);
    mpz_class root;
    mpz_root(root.get_mpz_t(), big.get_mpz_t(), b);
    if (!root.fits_slong_p()) throw InvalidInput("root too large for a desk-scale instance");
    return root.get_si();
}

// floor(k^(3/4)) = floor((k^3)^(1/4)), exactly.
long floor_k34(long k) {
    mpz_class cube = mpz_class(k) * k * k;
    mpz_class root;
    mpz_root(root.get_mpz_t(), cube.get_mpz_t(), 4);
    return root.get_si();
}

Rat geometric_volume(Prng& rng) { return Rat(static_cast<long>(rng.geometric_half())); }

}  // namespace

Instance gen_sept_bad_case(long i) {
    if (i < 2 || i % 2 != 0) throw InvalidInput("sept bad case needs even i >= 2");
    Instance inst;
    Rat clock = 0;
    for (long j = i; j >= i / 2; --j) {
        Rat p = pow2(j) + 1;
        push_job(inst, clock, p, p);
        clock += pow2(j);
    }
    inst.meta["generator"] = "badcase-sept";
    inst.meta["i"] = std::to_string(i);
    inst.meta["t"] = rat_str(clock);
    return inst;
}

Instance gen_sr_bad_case(long i) {
    if (i < 1) throw InvalidInput("sr bad case needs i >= 1");
    Instance inst;
    // Each pair lands a hair after the previous distractor completes, so the
    // witness-counting policy re-marks before it can see the new arrivals.
    // The offsets accumulate (pair j is (i-j) steps in) and are sized so all
    // of them together stay well under one volume unit for any i.
    Rat delta = pow2(-(ceil_log2(Rat(i) + 1) + 4));
    Rat clock = 0;
    push_job(inst, clock, pow2(i + 2), pow2(i));
    for (long j = i - 1; j >= 0; --j) {
        Rat at = clock + Rat(i - j) * delta;
        push_job(inst, at, pow2(j + 2), pow2(j));
        push_job(inst, at, pow2(j + 2), pow2(j + 2));
        clock += pow2(j + 3);
    }
    inst.meta["generator"] = "badcase-sr";
    inst.meta["i"] = std::to_string(i);
    inst.meta["t"] = rat_str(clock + Rat(i) * delta);
    return inst;
}

Instance gen_bombard(const Instance& base, const Rat& t, long m) {
    if (m < 1) throw InvalidInput("bombardment needs m >= 1 jobs");
    if (!base.jobs.empty() && base.jobs.back().release > t)
        throw InvalidInput("bombardment must start no earlier than the last release");
    Instance inst;
    inst.jobs = base.jobs;
    inst.adaptive = base.adaptive;
    for (const auto& [k, v] : base.meta) inst.meta["base_" + k] = v;
    for (long s = 0; s < m; ++s) push_job(inst, t + s, Rat(1), Rat(1));
    inst.meta["generator"] = "bombard";
    inst.meta["m"] = std::to_string(m);
    inst.meta["bombard_t"] = rat_str(t);
    return inst;
}

Instance gen_lb_prime(long k, std::uint64_t seed) {
    if (k < 2) throw InvalidInput("lb-prime needs k >= 2");
    Prng rng(seed);
    Instance inst;
    for (long q = 0; q < k; ++q) push_job(inst, Rat(0), geometric_volume(rng), Rat(1));
    inst.meta["generator"] = "lb-prime";
    inst.meta["k"] = std::to_string(k);
    inst.meta["seed"] = std::to_string(seed);
    inst.meta["t"] = rat_str(Rat(2 * (k - floor_k34(k))));
    return inst;
}

Instance gen_lb_capped(const Rat& mu, std::uint64_t seed, std::optional<long> k_override) {
    if (mu < 2) throw InvalidInput("lb-capped needs mu >= 2");
    long k;
    if (k_override) {
        k = *k_override;
        if (k < 2) throw InvalidInput("lb-capped needs k >= 2");
    } else {
        // floor(2^(mu/2)) for rational mu = a/b: the (2b)-th root of 2^a.
        if (!mu.get_num().fits_ulong_p() || !mu.get_den().fits_ulong_p())
            throw InvalidInput("mu too large for a desk-scale instance");
        k = floor_root_pow2(mu.get_num().get_ui(), 2 * mu.get_den().get_ui());
    }
    // Whole-instance rejection conditions the joint draw on every volume
    // being <= mu; one stream across attempts keeps the result a pure
    // function of (mu, k, seed).
    Prng rng(seed);
    Instance inst;
    for (;;) {
        inst.jobs.clear();
        bool ok = true;
        for (long q = 0; q < k; ++q) {
            Rat p = geometric_volume(rng);
            ok = ok && p <= mu;
            push_job(inst, Rat(0), std::move(p), Rat(1));
        }
        if (ok) break;
    }
    inst.meta["generator"] = "lb-capped";
    inst.meta["mu"] = rat_str(mu);
    inst.meta["k"] = std::to_string(k);
    inst.meta["seed"] = std::to_string(seed);
    inst.meta["t"] = rat_str(Rat(2 * (k - floor_k34(k))));
    return inst;
}

Instance gen_adaptive_det_lb(long n, const Rat& mu) {
    if (n < 1) throw InvalidInput("adaptive lower bound needs n >= 1");
    if (mu < 16) throw InvalidInput("adaptive lower bound needs mu >= 16");
    Instance inst;
    // Pre-snapshot the oracle holds every job to volume mu, so mu is the
    // honest placeholder; the snapshot rewrites unfinished jobs.
    for (long q = 0; q < n; ++q) push_job(inst, Rat(0), mu, Rat(1));
    Rat t = Rat(n) * mu / 2;
    inst.adaptive = AdaptiveOracle{mu, t};
    inst.meta["generator"] = "det-lb";
    inst.meta["n"] = std::to_string(n);
    inst.meta["mu"] = rat_str(mu);
    inst.meta["t"] = rat_str(t);
    return inst;
}

Instance gen_random_distorted(long n, const Rat& mu1, const Rat& mu2, long class_lo,
                              long class_hi, std::uint64_t seed) {
    if (n < 1) throw InvalidInput("random instance needs n >= 1");
    if (mu1 < 1 || mu2 < 1) throw InvalidInput("distortion factors are at least 1");
    if (class_lo > class_hi) throw InvalidInput("empty class range");
    // Extremes that must actually be attained (a max(1, .) clamp makes a
    // factor of exactly 1 free).
    std::vector<Rat> pins;
    if (mu1 > 1) pins.push_back(mu1);
    if (mu2 > 1) pins.push_back(1 / mu2);
    if (static_cast<long>(pins.size()) > n)
        throw InvalidInput("n too small to attain both distortion extremes");

    Prng rng(seed);
    Instance inst;
    Rat lo = 1 / mu2;
    Rat span = mu1 - lo;
    Rat clock = 0;
    long range = class_hi - class_lo + 1;
    for (long q = 0; q < n; ++q) {
        // Draw order per job: release gap (after the first), class, estimate
        // mantissa, distortion factor. Pinned jobs draw and discard the
        // factor so the stream stays aligned.
        if (q > 0) clock += Rat(static_cast<long>(rng.below(4)));
        long cls = class_lo + static_cast<long>(rng.below(static_cast<std::uint64_t>(range)));
        Rat est = pow2(cls) * rat(16 + static_cast<long>(rng.below(16)), 16);
        Rat f = lo + span * rat(static_cast<long>(rng.below(1001)), 1000);
        if (q < static_cast<long>(pins.size())) f = pins[q];
        push_job(inst, clock, est * f, est);
    }
    inst.meta["generator"] = "random";
    inst.meta["n"] = std::to_string(n);
    inst.meta["mu1"] = rat_str(mu1);
    inst.meta["mu2"] = rat_str(mu2);
    inst.meta["class_lo"] = std::to_string(class_lo);
    inst.meta["class_hi"] = std::to_string(class_hi);
    inst.meta["seed"] = std::to_string(seed);
    return inst;
}

}  // namespace flowlab
