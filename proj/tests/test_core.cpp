#include "flowlab/instance.hpp"
#include "flowlab/instance_io.hpp"
#include "flowlab/rational.hpp"
#include "flowlab/rng.hpp"

#include <doctest.h>

#include <set>

using namespace flowlab;

TEST_CASE("rational parsing accepts the canonical grammar") {
    CHECK(rat_parse("7") == rat(7));
    CHECK(rat_parse("-7") == rat(-7));
    CHECK(rat_parse("3/2") == rat(3, 2));
    CHECK(rat_parse("-3/2") == rat(-3, 2));
    CHECK(rat_parse("007") == rat(7));
    CHECK(rat_parse("6/4") == rat(3, 2));  // canonicalized on entry
    CHECK(rat_parse("0") == rat(0));
    CHECK_THROWS_AS(rat_parse(""), InvalidInput);
    CHECK_THROWS_AS(rat_parse("1/0"), InvalidInput);
    CHECK_THROWS_AS(rat_parse("1.5"), InvalidInput);
    CHECK_THROWS_AS(rat_parse("1/-2"), InvalidInput);
    CHECK_THROWS_AS(rat_parse("+1"), InvalidInput);
    CHECK_THROWS_AS(rat_parse("1 /2"), InvalidInput);
    CHECK_THROWS_AS(rat_parse("a"), InvalidInput);
}

TEST_CASE("rational formatting is canonical and round-trips") {
    CHECK(rat_str(rat(7)) == "7");
    CHECK(rat_str(rat(-7)) == "-7");
    CHECK(rat_str(rat(3, 2)) == "3/2");
    CHECK(rat_str(rat(6, 4)) == "3/2");
    CHECK(rat_str(rat(-6, 4)) == "-3/2");
    CHECK(rat_str(rat(0)) == "0");
    for (long num = -12; num <= 12; ++num)
        for (long den = 1; den <= 9; ++den) {
            Rat q = rat(num, den);
            CHECK(rat_parse(rat_str(q)) == q);
        }
}

TEST_CASE("decimal rendering is deterministic scientific notation") {
    CHECK(rat_decimal(rat(0)) == "0");
    CHECK(rat_decimal(rat(1)) == "1");
    CHECK(rat_decimal(rat(1, 2)) == "5e-1");
    CHECK(rat_decimal(rat(3, 2)) == "1.5");
    CHECK(rat_decimal(rat(1, 3)) == "3.33333333333e-1");
    CHECK(rat_decimal(rat(-1, 3)) == "-3.33333333333e-1");
    CHECK(rat_decimal(rat(1000)) == "1e3");
    CHECK(rat_decimal(rat(1, 3), 4) == "3.333e-1");
    // Re-rendering the same value must give identical bytes.
    CHECK(rat_decimal(rat(22, 7)) == rat_decimal(rat(22, 7)));
}

TEST_CASE("pow2 covers negative exponents exactly") {
    CHECK(pow2(0) == rat(1));
    CHECK(pow2(5) == rat(32));
    CHECK(pow2(-3) == rat(1, 8));
    CHECK(pow2(3) * pow2(-3) == rat(1));
}

TEST_CASE("floor_log2 and ceil_log2 agree with the binary expansion") {
    CHECK(floor_log2(rat(1)) == 0);
    CHECK(floor_log2(rat(2)) == 1);
    CHECK(floor_log2(rat(3)) == 1);
    CHECK(floor_log2(rat(4)) == 2);
    CHECK(floor_log2(rat(1, 2)) == -1);
    CHECK(floor_log2(rat(3, 4)) == -1);
    CHECK(floor_log2(rat(1, 3)) == -2);
    CHECK(ceil_log2(rat(1)) == 0);
    CHECK(ceil_log2(rat(3)) == 2);
    CHECK(ceil_log2(rat(4)) == 2);
    CHECK(ceil_log2(rat(5)) == 3);
    CHECK(ceil_log2(rat(1, 3)) == -1);
    CHECK_THROWS_AS(floor_log2(rat(0)), InvalidInput);
    CHECK_THROWS_AS(floor_log2(rat(-2)), InvalidInput);
    for (long i = -16; i <= 64; ++i) {
        Rat x = pow2(i);
        CHECK(floor_log2(x) == i);
        CHECK(ceil_log2(x) == i);
        CHECK(is_pow2(x));
        // Just below a power of two the floor drops by one.
        Rat eps = x / 1000;
        CHECK(floor_log2(x - eps) == i - 1);
        CHECK(floor_log2(x + eps) == i);
        CHECK_FALSE(is_pow2(x - eps));
    }
}

TEST_CASE("job classes partition estimates into dyadic bands") {
    CHECK(job_class(rat(1)) == 0);
    CHECK(job_class(rat(32)) == 5);
    CHECK(job_class(rat(5)) == 2);
    CHECK(job_class(rat(1, 2)) == -1);
    CHECK_THROWS_AS(job_class(rat(0)), InvalidInput);
    for (long i = -16; i <= 64; ++i) {
        CHECK(job_class(pow2(i)) == i);
        CHECK(job_class(pow2(i + 1) - pow2(i) / 7) == i);  // just under the next band
    }
}

TEST_CASE("distortion stats match hand-computed examples") {
    Instance one;
    one.jobs.push_back(make_job(0, rat(0), rat(4), rat(1)));
    DistortionStats d = distortion_of(one);
    CHECK(d.mu1 == rat(4));
    CHECK(d.mu2 == rat(1));
    CHECK(d.mu == rat(4));

    Instance two;
    two.jobs.push_back(make_job(0, rat(0), rat(3), rat(1)));
    two.jobs.push_back(make_job(1, rat(0), rat(1), rat(2)));
    d = distortion_of(two);
    CHECK(d.mu1 == rat(3));
    CHECK(d.mu2 == rat(2));
    CHECK(d.mu == rat(6));

    Instance none;
    d = distortion_of(none);
    CHECK(d.mu1 == rat(1));
    CHECK(d.mu2 == rat(1));
    CHECK(d.mu == rat(1));
}

TEST_CASE("distortion factors bound every volume-estimate pair") {
    Prng rng(41);
    Instance inst;
    for (JobId id = 0; id < 40; ++id) {
        Rat est = rat(1 + static_cast<long>(rng.below(64)), 1 + static_cast<long>(rng.below(8)));
        Rat vol = rat(1 + static_cast<long>(rng.below(64)), 1 + static_cast<long>(rng.below(8)));
        inst.jobs.push_back(make_job(id, rat(0), vol, est));
    }
    DistortionStats d = distortion_of(inst);
    CHECK(d.mu1 >= 1);
    CHECK(d.mu2 >= 1);
    CHECK(d.mu == d.mu1 * d.mu2);
    for (const Job& j : inst.jobs) {
        CHECK(j.p_true <= d.mu1 * j.p_est);
        CHECK(j.p_est <= d.mu2 * j.p_true);
    }
}

TEST_CASE("class separator sigma leaves a visible gap") {
    CHECK(separator_sigma(rat(4)) == 3);
    CHECK(separator_sigma(rat(2)) == 2);
    CHECK(separator_sigma(rat(5)) == 4);
    CHECK(separator_sigma(rat(1)) == 1);
    CHECK_THROWS_AS(separator_sigma(rat(1, 2)), InvalidInput);
    // A class i + sigma estimate is too big to hide below class i + 1 work:
    // 2^(i+sigma)/mu2 >= mu1 * 2^(i+1), strictly unless mu is a power of two.
    for (long m1 = 1; m1 <= 9; ++m1)
        for (long m2 = 1; m2 <= 9; ++m2) {
            Rat mu1 = rat(m1), mu2 = rat(m2), mu = mu1 * mu2;
            long sigma = separator_sigma(mu);
            for (long i : {-3L, 0L, 7L}) {
                Rat lhs = pow2(i + sigma) / mu2;
                Rat rhs = mu1 * pow2(i + 1);
                CHECK(lhs >= rhs);
                if (!is_pow2(mu)) CHECK(lhs > rhs);
            }
        }
}

TEST_CASE("instance validation rejects malformed inputs") {
    Instance good;
    good.jobs.push_back(make_job(0, rat(0), rat(2), rat(1)));
    good.jobs.push_back(make_job(1, rat(1), rat(1), rat(1)));
    CHECK_NOTHROW(validate_instance(good));

    Instance bad = good;
    bad.jobs[1].id = 2;  // ids must be 0..n-1 in order
    CHECK_THROWS_AS(validate_instance(bad), InvalidInput);

    bad = good;
    bad.jobs[0].release = rat(5);  // releases must be nondecreasing
    CHECK_THROWS_AS(validate_instance(bad), InvalidInput);

    bad = good;
    bad.jobs[0].p_true = rat(0);
    CHECK_THROWS_AS(validate_instance(bad), InvalidInput);

    bad = good;
    bad.jobs[0].release = rat(-1);
    CHECK_THROWS_AS(validate_instance(bad), InvalidInput);

    bad = good;
    bad.jobs[0].cls = 9;  // cached class must match the estimate
    CHECK_THROWS_AS(validate_instance(bad), InvalidInput);

    bad = good;
    bad.adaptive = AdaptiveOracle{rat(1, 2), rat(1)};  // oracle target below 1
    CHECK_THROWS_AS(validate_instance(bad), InvalidInput);
}

TEST_CASE("instance JSON round-trips byte for byte") {
    Instance inst;
    inst.meta["generator"] = "example";
    inst.meta["t"] = "28";
    inst.jobs.push_back(make_job(0, rat(0), rat(17), rat(16)));
    inst.jobs.push_back(make_job(1, rat(3, 2), rat(1, 3), rat(1, 2)));
    std::string text = write_instance(inst);
    Instance back = read_instance_str(text);
    CHECK(back.jobs.size() == 2);
    CHECK(back.jobs[1].p_true == rat(1, 3));
    CHECK(back.jobs[1].cls == -1);
    CHECK(back.meta.at("t") == "28");
    CHECK(write_instance(back) == text);
    CHECK(instance_hash(back) == instance_hash(inst));

    inst.adaptive = AdaptiveOracle{rat(16), rat(64)};
    text = write_instance(inst);
    back = read_instance_str(text);
    REQUIRE(back.adaptive.has_value());
    CHECK(back.adaptive->mu == rat(16));
    CHECK(back.adaptive->snapshot == rat(64));
    CHECK(write_instance(back) == text);
}

TEST_CASE("instance reader rejects structural damage") {
    CHECK_THROWS_AS(read_instance_str("not json"), InvalidInput);
    CHECK_THROWS_AS(read_instance_str("{}"), InvalidInput);
    CHECK_THROWS_AS(read_instance_str(R"({"meta":{},"jobs":[{"id":0}]})"), InvalidInput);
    CHECK_THROWS_AS(read_instance_str(
                        R"({"meta":{},"jobs":[{"id":0,"release":"0","p_true":"1.5","p_est":"1"}]})"),
                    InvalidInput);
    CHECK_THROWS_AS(
        read_instance_str(R"({"meta":{"adaptive_mu":"4"},"jobs":[]})"),  // missing snapshot
        InvalidInput);
}

TEST_CASE("content hash is stable across runs and sensitive to content") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    Instance inst;
    inst.jobs.push_back(make_job(0, rat(0), rat(1), rat(1)));
    std::string h = instance_hash(inst);
    CHECK(h.size() == 16);
    CHECK(h == instance_hash(inst));
    Instance other = inst;
    other.jobs[0].p_true = rat(2);
    CHECK(instance_hash(other) != h);
}

TEST_CASE("prng streams are deterministic and trial-separated") {
    Prng a(123), b(123), c(124), d(123, 1);
    for (int i = 0; i < 100; ++i) CHECK(a.word() == b.word());
    bool differs = false;
    Prng a2(123);
    for (int i = 0; i < 100; ++i) differs |= a2.word() != c.word();
    CHECK(differs);
    differs = false;
    Prng a3(123);
    for (int i = 0; i < 100; ++i) differs |= a3.word() != d.word();
    CHECK(differs);
}

TEST_CASE("bounded sampler hits every residue without bias artifacts") {
    Prng rng(9);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t v = rng.below(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
    CHECK(rng.below(1) == 0);
}

TEST_CASE("geometric sampler matches the halving law") {
    Prng rng(2026);
    const int n = 200000;
    long long sum = 0;
    std::array<long, 8> counts{};
    for (int i = 0; i < n; ++i) {
        std::uint64_t g = rng.geometric_half();
        CHECK(g >= 1);
        sum += static_cast<long long>(g);
        if (g <= 8) ++counts[g - 1];
    }
    double mean = static_cast<double>(sum) / n;
    CHECK(mean > 1.98);
    CHECK(mean < 2.02);
    // P(G = b) = 2^-b: check the first bands within loose sampling slack.
    for (int b = 1; b <= 4; ++b) {
        double freq = static_cast<double>(counts[b - 1]) / n;
        double want = std::pow(0.5, b);
        CHECK(freq > want * 0.9);
        CHECK(freq < want * 1.1);
    }
}
