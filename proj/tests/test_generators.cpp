#include "flowlab/engine.hpp"
#include "flowlab/generators.hpp"
#include "flowlab/instance_io.hpp"
#include "flowlab/schedulers.hpp"

#include <doctest.h>

using namespace flowlab;

namespace {

Trace run(const Instance& inst, const std::string& key) {
    auto sched = make_scheduler(key);
    return simulate(inst, *sched);
}

void check_roundtrip(const Instance& inst) {
    std::string text = write_instance(inst);
    Instance back = read_instance_str(text);
    CHECK(write_instance(back) == text);
}

}  // namespace

TEST_CASE("estimate-order bad case unrolls to the documented chain") {
    Instance inst = gen_sept_bad_case(4);
    REQUIRE(inst.jobs.size() == 3);
    CHECK(inst.jobs[0].release == rat(0));
    CHECK(inst.jobs[0].p_true == rat(17));
    CHECK(inst.jobs[1].release == rat(16));
    CHECK(inst.jobs[1].p_true == rat(9));
    CHECK(inst.jobs[2].release == rat(24));
    CHECK(inst.jobs[2].p_true == rat(5));
    CHECK(inst.meta.at("t") == "28");
    DistortionStats d = distortion_of(inst);
    CHECK(d.mu == rat(1));

    Instance small = gen_sept_bad_case(2);
    REQUIRE(small.jobs.size() == 2);
    CHECK(small.jobs[1].release == rat(4));
    CHECK(small.jobs[1].p_true == rat(3));
    CHECK(small.meta.at("t") == "6");

    CHECK_THROWS_AS(gen_sept_bad_case(3), InvalidInput);
    CHECK_THROWS_AS(gen_sept_bad_case(0), InvalidInput);
    check_roundtrip(inst);
}

TEST_CASE("estimate-order bad case strands i/2 + 1 jobs while opt keeps one") {
    for (long i : {2L, 4L, 6L, 10L}) {
        Instance inst = gen_sept_bad_case(i);
        Rat t = rat_parse(inst.meta.at("t"));
        Trace alg = run(inst, "sept");
        Trace opt = run(inst, "srpt");
        CHECK(pending_at_least(alg, t, rat(1)) == i / 2 + 1);
        CHECK(pending_at(opt, t) == 1);
    }
}

TEST_CASE("witness-counting bad case releases pairs just after each handover") {
    Instance inst = gen_sr_bad_case(1);
    REQUIRE(inst.jobs.size() == 3);
    CHECK(inst.jobs[0].release == rat(0));
    CHECK(inst.jobs[0].p_est == rat(2));
    CHECK(inst.jobs[0].p_true == rat(8));
    // The decoy pair lands strictly after the anchor but inside its run.
    CHECK(inst.jobs[1].release == inst.jobs[2].release);
    CHECK(inst.jobs[1].release > rat(0));
    CHECK(inst.jobs[1].release < rat(1));
    CHECK(inst.jobs[1].p_est == rat(1));
    CHECK(inst.jobs[1].p_true == rat(4));
    CHECK(inst.jobs[2].p_est == rat(4));
    CHECK(inst.jobs[2].p_true == rat(4));
    CHECK(rat_parse(inst.meta.at("t")) == rat(257, 32));

    DistortionStats d = distortion_of(inst);
    CHECK(d.mu1 == rat(4));
    CHECK(d.mu2 == rat(1));

    for (long i : {1L, 2L, 5L}) CHECK(gen_sr_bad_case(i).jobs.size() == std::size_t(2 * i + 1));
    CHECK_THROWS_AS(gen_sr_bad_case(0), InvalidInput);
    check_roundtrip(gen_sr_bad_case(4));
}

TEST_CASE("witness-counting bad case strands one distractor per round") {
    for (long i : {1L, 3L, 6L, 10L}) {
        Instance inst = gen_sr_bad_case(i);
        Rat t = rat_parse(inst.meta.at("t"));
        Trace alg = run(inst, "sr");
        Trace opt = run(inst, "srpt");
        CHECK(pending_at_least(alg, t, rat(1)) >= i);
        CHECK(pending_at(opt, t) == 1);
    }
}

TEST_CASE("bombardment appends unit jobs on the time grid") {
    Instance none;
    Instance burst = gen_bombard(none, rat(0), 3);
    REQUIRE(burst.jobs.size() == 3);
    for (long s = 0; s < 3; ++s) {
        CHECK(burst.jobs[s].release == rat(s));
        CHECK(burst.jobs[s].p_true == rat(1));
        CHECK(burst.jobs[s].p_est == rat(1));
    }

    Instance base = gen_sr_bad_case(3);
    Rat t = rat_parse(base.meta.at("t"));
    Instance big = gen_bombard(base, t, 10);
    CHECK(big.jobs.size() == base.jobs.size() + 10);
    DistortionStats d = distortion_of(big);
    CHECK(d.mu1 == rat(4));
    CHECK(d.mu2 == rat(1));
    CHECK(big.meta.at("base_generator") == "badcase-sr");
    CHECK(big.meta.at("m") == "10");

    CHECK_THROWS_AS(gen_bombard(base, rat(1), 5), InvalidInput);  // inside the releases
    CHECK_THROWS_AS(gen_bombard(base, t, 0), InvalidInput);
    check_roundtrip(big);
}

TEST_CASE("geometric burst instances use the documented snapshot times") {
    CHECK(rat_parse(gen_lb_prime(16, 0).meta.at("t")) == rat(16));
    CHECK(rat_parse(gen_lb_prime(256, 0).meta.at("t")) == rat(384));
    CHECK(rat_parse(gen_lb_prime(1024, 0).meta.at("t")) == rat(1686));

    Instance inst = gen_lb_prime(64, 7);
    REQUIRE(inst.jobs.size() == 64);
    for (const Job& j : inst.jobs) {
        CHECK(j.release == rat(0));
        CHECK(j.p_est == rat(1));
        CHECK(j.cls == 0);
        CHECK(j.p_true >= rat(1));
        CHECK(j.p_true.get_den() == 1);
    }
    CHECK(write_instance(gen_lb_prime(64, 7)) == write_instance(inst));
    CHECK(write_instance(gen_lb_prime(64, 8)) != write_instance(inst));
    CHECK_THROWS_AS(gen_lb_prime(1, 0), InvalidInput);
    check_roundtrip(inst);
}

TEST_CASE("geometric volumes have mean two and halving tails") {
    const long k = 4096;
    long long sum = 0, over1 = 0, over2 = 0, over3 = 0;
    long trials = 8, total = 0;
    for (long s = 0; s < trials; ++s) {
        Instance inst = gen_lb_prime(k, 1000 + s);
        for (const Job& j : inst.jobs) {
            long v = static_cast<long>(j.p_true.get_num().get_si());
            sum += v;
            over1 += v > 1;
            over2 += v > 2;
            over3 += v > 3;  // 3 = ceil(log2(4096)) / 4
            ++total;
        }
    }
    double n = static_cast<double>(total);
    CHECK(sum / n > 1.95);
    CHECK(sum / n < 2.05);
    CHECK(over1 / n > 0.45);
    CHECK(over1 / n < 0.55);
    CHECK(over2 / n > 0.22);
    CHECK(over2 / n < 0.28);
    CHECK(over3 / n > 0.11);
    CHECK(over3 / n < 0.14);
}

TEST_CASE("capped burst conditions every volume below the bound") {
    Instance inst = gen_lb_capped(rat(8), 3);
    CHECK(inst.meta.at("k") == "16");
    REQUIRE(inst.jobs.size() == 16);
    for (const Job& j : inst.jobs) {
        CHECK(j.p_true >= rat(1));
        CHECK(j.p_true <= rat(8));
    }
    DistortionStats d = distortion_of(inst);
    CHECK(d.mu1 <= rat(8));
    CHECK(d.mu2 == rat(1));

    // Fractional bound: k = floor(2^(9/4)) = 4.
    CHECK(gen_lb_capped(rat(9, 2), 0).meta.at("k") == "4");
    CHECK(gen_lb_capped(rat(8), 0, 32).jobs.size() == 32);
    CHECK(write_instance(gen_lb_capped(rat(8), 3)) == write_instance(inst));
    CHECK_THROWS_AS(gen_lb_capped(rat(3, 2), 0), InvalidInput);
    check_roundtrip(inst);
}

TEST_CASE("adaptive adversary fixes the snapshot at half the total target") {
    Instance inst = gen_adaptive_det_lb(16, rat(16));
    REQUIRE(inst.adaptive.has_value());
    CHECK(inst.adaptive->mu == rat(16));
    CHECK(inst.adaptive->snapshot == rat(128));
    CHECK(inst.meta.at("t") == "128");
    CHECK(inst.jobs.size() == 16);
    for (const Job& j : inst.jobs) {
        CHECK(j.release == rat(0));
        CHECK(j.p_est == rat(1));
    }
    CHECK_THROWS_AS(gen_adaptive_det_lb(16, rat(15)), InvalidInput);
    CHECK_THROWS_AS(gen_adaptive_det_lb(0, rat(16)), InvalidInput);
    check_roundtrip(inst);
}

TEST_CASE("random workloads attain their distortion extremes exactly") {
    Instance inst = gen_random_distorted(30, rat(3), rat(2), -2, 4, 17);
    CHECK(inst.jobs.size() == 30);
    DistortionStats d = distortion_of(inst);
    CHECK(d.mu1 == rat(3));
    CHECK(d.mu2 == rat(2));
    CHECK(d.mu == rat(6));
    for (const Job& j : inst.jobs) {
        CHECK(j.cls >= -2);
        CHECK(j.cls <= 4);
    }
    CHECK(write_instance(gen_random_distorted(30, rat(3), rat(2), -2, 4, 17)) ==
          write_instance(inst));
    CHECK(write_instance(gen_random_distorted(30, rat(3), rat(2), -2, 4, 18)) !=
          write_instance(inst));

    Instance exact = gen_random_distorted(5, rat(1), rat(1), 0, 3, 2);
    for (const Job& j : exact.jobs) CHECK(j.p_true == j.p_est);

    Instance lone = gen_random_distorted(1, rat(2), rat(1), 0, 0, 5);
    CHECK(distortion_of(lone).mu1 == rat(2));
    CHECK_THROWS_AS(gen_random_distorted(1, rat(2), rat(2), 0, 0, 5), InvalidInput);
    CHECK_THROWS_AS(gen_random_distorted(3, rat(1, 2), rat(1), 0, 0, 5), InvalidInput);
    check_roundtrip(inst);
}
