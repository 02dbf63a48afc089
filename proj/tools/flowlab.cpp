#include "flowlab/checks.hpp"
#include "flowlab/engine.hpp"
#include "flowlab/generators.hpp"
#include "flowlab/instance_io.hpp"
#include "flowlab/metrics.hpp"
#include "flowlab/rng.hpp"
#include "flowlab/schedulers.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using namespace flowlab;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << bytes;
}

// Reproducibility sidecar written next to every file output.
void write_manifest(const std::string& out_path, const std::string& command,
                    const std::map<std::string, std::string>& flags,
                    const std::string& instance_hash) {
    ordered_json m;
    m["command"] = command;
    ordered_json f = ordered_json::object();
    for (const auto& [k, v] : flags) f[k] = v;
    m["flags"] = std::move(f);
    m["instance_hash"] = instance_hash;
    m["versions"] =
        ordered_json{{"artifact", kVersion}, {"instance_format", 1}, {"trace_format", 1}};
    spill(out_path + ".manifest.json", m.dump(2) + "\n");
}

Instance load_instance(const std::string& path) {
    try {
        return read_instance_str(slurp(path));
    } catch (const InvalidInput& e) {
        throw UsageError(std::string(e.what()) + " (" + path + ")");
    }
}

Rat parse_rat_flag(const std::string& text, const char* flag) {
    try {
        return rat_parse(text);
    } catch (const InvalidInput&) {
        throw UsageError(std::string("flag ") + flag + " wants a rational like 7 or 3/2, got '" +
                         text + "'");
    }
}

std::string describe(const Instance& inst) {
    std::ostringstream os;
    os << inst.jobs.size() << " jobs";
    if (!inst.jobs.empty()) {
        long lo = inst.jobs.front().cls, hi = lo;
        for (const Job& j : inst.jobs) {
            lo = std::min(lo, j.cls);
            hi = std::max(hi, j.cls);
        }
        os << ", classes [" << lo << ", " << hi << "]";
    }
    if (inst.adaptive) {
        os << ", adaptive oracle mu=" << rat_str(inst.adaptive->mu)
           << " snapshot=" << rat_str(inst.adaptive->snapshot);
    } else {
        DistortionStats d = distortion_of(inst);
        os << ", distortion (" << rat_str(d.mu1) << ", " << rat_str(d.mu2) << ", "
           << rat_str(d.mu) << ")";
    }
    if (auto it = inst.meta.find("t"); it != inst.meta.end()) os << ", t=" << it->second;
    return os.str();
}

Trace run(const Instance& inst, const std::string& key, std::uint64_t seed) {
    auto sched = make_scheduler(key);
    return simulate(inst, *sched, seed);
}

// ---- generate ----------------------------------------------------------

struct GenFlags {
    std::string kind, out, base;
    long i = 0, k = 0, n = 0, m = 0, class_lo = 0, class_hi = 4;
    std::string mu = "16", mu1 = "1", mu2 = "1", t;
    std::uint64_t seed = 0;
    bool has_k = false;
};

int cmd_generate(const GenFlags& g) {
    Instance inst;
    std::map<std::string, std::string> flags{{"kind", g.kind}};
    if (g.kind == "badcase-sept") {
        inst = gen_sept_bad_case(g.i);
        flags["i"] = std::to_string(g.i);
    } else if (g.kind == "badcase-sr") {
        inst = gen_sr_bad_case(g.i);
        flags["i"] = std::to_string(g.i);
    } else if (g.kind == "bombard") {
        if (g.base.empty()) throw UsageError("bombard needs --base INSTANCE");
        Instance base = load_instance(g.base);
        Rat t;
        if (!g.t.empty())
            t = parse_rat_flag(g.t, "--t");
        else if (auto it = base.meta.find("t"); it != base.meta.end())
            t = rat_parse(it->second);
        else
            throw UsageError("bombard needs --t (base records no horizon)");
        inst = gen_bombard(base, t, g.m);
        flags["base"] = g.base;
        flags["t"] = rat_str(t);
        flags["m"] = std::to_string(g.m);
    } else if (g.kind == "lb-prime") {
        inst = gen_lb_prime(g.k, g.seed);
        flags["k"] = std::to_string(g.k);
        flags["seed"] = std::to_string(g.seed);
    } else if (g.kind == "lb-capped") {
        Rat mu = parse_rat_flag(g.mu, "--mu");
        std::optional<long> k;
        if (g.has_k) k = g.k;
        inst = gen_lb_capped(mu, g.seed, k);
        flags["mu"] = rat_str(mu);
        flags["seed"] = std::to_string(g.seed);
        if (k) flags["k"] = std::to_string(*k);
    } else if (g.kind == "det-lb") {
        inst = gen_adaptive_det_lb(g.n, parse_rat_flag(g.mu, "--mu"));
        flags["n"] = std::to_string(g.n);
        flags["mu"] = g.mu;
    } else if (g.kind == "random") {
        inst = gen_random_distorted(g.n, parse_rat_flag(g.mu1, "--mu1"),
                                    parse_rat_flag(g.mu2, "--mu2"), g.class_lo, g.class_hi,
                                    g.seed);
        flags["n"] = std::to_string(g.n);
        flags["mu1"] = g.mu1;
        flags["mu2"] = g.mu2;
        flags["class_lo"] = std::to_string(g.class_lo);
        flags["class_hi"] = std::to_string(g.class_hi);
        flags["seed"] = std::to_string(g.seed);
    } else {
        throw UsageError("unknown generator '" + g.kind +
                         "' (badcase-sept, badcase-sr, bombard, lb-prime, lb-capped, det-lb, "
                         "random)");
    }
    std::cout << g.kind << ": " << describe(inst) << "\n";
    if (!g.out.empty()) {
        spill(g.out, write_instance(inst));
        write_manifest(g.out, "generate", flags, instance_hash(inst));
        std::cout << "wrote " << g.out << "\n";
    }
    return kExitOk;
}

// ---- simulate ----------------------------------------------------------

int cmd_simulate(const std::string& instance_path, const std::string& scheduler,
                 std::uint64_t seed, const std::string& out) {
    Instance inst = load_instance(instance_path);
    Trace tr = run(inst, scheduler, seed);
    std::cout << scheduler << " on " << instance_path << ": total flow "
              << rat_str(total_flow_time(tr)) << " (" << rat_decimal(total_flow_time(tr))
              << "), " << tr.events.size() << " events\n";
    if (inst.adaptive) {
        DistortionStats d = distortion_of(tr.realized);
        std::cout << "realized distortion (" << rat_str(d.mu1) << ", " << rat_str(d.mu2) << ", "
                  << rat_str(d.mu) << ")\n";
    }
    if (!out.empty()) {
        std::ostringstream os;
        write_trace_jsonl(tr, os);
        spill(out, os.str());
        std::map<std::string, std::string> flags{{"instance", instance_path},
                                                 {"scheduler", scheduler},
                                                 {"seed", std::to_string(seed)}};
        if (inst.adaptive) {
            spill(out + ".realized.json", write_instance(tr.realized));
            flags["realized"] = out + ".realized.json";
        }
        write_manifest(out, "simulate", flags, tr.instance_hash);
        std::cout << "wrote " << out << "\n";
    }
    return kExitOk;
}

// ---- compare -----------------------------------------------------------

int cmd_compare(const std::string& instance_path, std::vector<std::string> schedulers,
                std::uint64_t seed, const std::string& out) {
    Instance inst = load_instance(instance_path);
    if (inst.adaptive)
        throw UsageError(
            "compare needs fixed volumes; simulate the adaptive instance and compare on the "
            "realized one");
    if (schedulers.empty()) schedulers = {"srpt", "sept", "sr", "zigzag", "dl"};
    Trace opt = run(inst, "srpt", seed);
    Rat opt_flow = total_flow_time(opt);

    std::ostringstream csv;
    csv << "scheduler,total_flow,total_flow_approx,vs_srpt,vs_srpt_approx,max_local_ratio,"
           "max_local_ratio_approx,max_delta1\n";
    for (const std::string& key : schedulers) {
        Trace tr = key == "srpt" ? opt : run(inst, key, seed);
        Rat flow = total_flow_time(tr);
        Ratio vs = competitive_ratio(flow, opt_flow);
        LocalRatioReport rep = local_ratio_report(tr, opt);
        long max_d1 = 0;
        for (const LocalRatioRow& row : rep.rows)
            max_d1 = std::max(max_d1, pending_at_least(tr, row.t, Rat(1)));
        csv << key << ',' << rat_str(flow) << ',' << rat_decimal(flow) << ',' << ratio_str(vs)
            << ',' << (vs.infinite ? "inf" : rat_decimal(vs.value)) << ','
            << ratio_str(rep.max_ratio) << ','
            << (rep.max_ratio.infinite ? "inf" : rat_decimal(rep.max_ratio.value)) << ','
            << max_d1 << '\n';
    }
    std::cout << csv.str();
    if (!out.empty()) {
        spill(out, csv.str());
        std::string keys;
        for (const std::string& k : schedulers) keys += (keys.empty() ? "" : ",") + k;
        write_manifest(out, "compare",
                       {{"instance", instance_path},
                        {"schedulers", keys},
                        {"seed", std::to_string(seed)}},
                       instance_hash(inst));
        std::cout << "wrote " << out << "\n";
    }
    return kExitOk;
}

// ---- lowerbound --------------------------------------------------------

struct LbFlags {
    std::string generator = "lb-prime", scheduler = "sept", out;
    long k = 16;
    std::string mu = "8";
    bool has_k = false;
    long trials = 100;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

int cmd_lowerbound(const LbFlags& f) {
    {
        auto sched = make_scheduler(f.scheduler);
        if (sched->clairvoyant())
            throw UsageError("the lower bound applies to non-clairvoyant policies; '" +
                             f.scheduler + "' sees true volumes");
    }
    if (f.trials < 1) throw UsageError("--trials must be >= 1");
    if (f.generator != "lb-prime" && f.generator != "lb-capped")
        throw UsageError("--generator must be lb-prime or lb-capped");

    auto trial_instance = [&](long trial) {
        // Per-trial derived seed: an independent stream indexed by (seed, trial).
        std::uint64_t derived = Prng(f.seed, static_cast<std::uint64_t>(trial)).word();
        if (f.generator == "lb-prime") return gen_lb_prime(f.k, derived);
        std::optional<long> k;
        if (f.has_k) k = f.k;
        return gen_lb_capped(rat_parse(f.mu), derived, k);
    };

    struct Sums {
        long long delta = 0, delta_sq = 0, opt = 0, opt_sq = 0;
    };
    unsigned workers = std::max(1u, f.threads);
    std::vector<Sums> partial(workers);
    auto work = [&](unsigned w) {
        for (long trial = static_cast<long>(w); trial < f.trials;
             trial += static_cast<long>(workers)) {
            Instance inst = trial_instance(trial);
            Rat t = rat_parse(inst.meta.at("t"));
            Trace alg = run(inst, f.scheduler, f.seed);
            Trace opt = run(inst, "srpt", f.seed);
            long d = pending_at_least(alg, t, Rat(1));
            long o = pending_at(opt, t);
            partial[w].delta += d;
            partial[w].delta_sq += static_cast<long long>(d) * d;
            partial[w].opt += o;
            partial[w].opt_sq += static_cast<long long>(o) * o;
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (std::thread& th : pool) th.join();
    }
    Sums total;
    for (const Sums& s : partial) {
        total.delta += s.delta;
        total.delta_sq += s.delta_sq;
        total.opt += s.opt;
        total.opt_sq += s.opt_sq;
    }

    Rat n(static_cast<long>(f.trials));
    Rat mean_delta = Rat(static_cast<long>(total.delta)) / n;
    Rat mean_opt = Rat(static_cast<long>(total.opt)) / n;
    Ratio ratio = competitive_ratio(mean_delta, mean_opt);
    // Sample standard error sqrt(var / trials); undefined for one trial.
    auto stderr_of = [&](long long sum, long long sum_sq) {
        Rat s(static_cast<long>(sum));
        Rat var = (Rat(static_cast<long>(sum_sq)) - s * s / n) / (n - 1);
        if (var < 0) var = 0;
        mpf_class v(var / n, 128), r(0, 128);
        mpf_sqrt(r.get_mpf_t(), v.get_mpf_t());
        Rat approx(r);
        return rat_decimal(approx, 6);
    };

    ordered_json o;
    o["generator"] = f.generator;
    if (f.generator == "lb-prime" || f.has_k) o["k"] = f.k;
    if (f.generator == "lb-capped") o["mu"] = f.mu;
    o["scheduler"] = f.scheduler;
    o["trials"] = f.trials;
    o["seed"] = f.seed;
    o["mean_delta"] = rat_str(mean_delta);
    o["mean_delta_approx"] = rat_decimal(mean_delta);
    o["mean_opt"] = rat_str(mean_opt);
    o["mean_opt_approx"] = rat_decimal(mean_opt);
    o["ratio"] = ratio_str(ratio);
    o["ratio_approx"] = ratio.infinite ? "inf" : rat_decimal(ratio.value);
    o["stderr_defined"] = f.trials > 1;
    if (f.trials > 1) {
        o["stderr_delta"] = stderr_of(total.delta, total.delta_sq);
        o["stderr_opt"] = stderr_of(total.opt, total.opt_sq);
    }
    std::string text = o.dump(2) + "\n";
    std::cout << text;
    if (!f.out.empty()) {
        spill(f.out, text);
        write_manifest(f.out, "lowerbound",
                       {{"generator", f.generator},
                        {"scheduler", f.scheduler},
                        {"k", std::to_string(f.k)},
                        {"mu", f.mu},
                        {"trials", std::to_string(f.trials)},
                        {"seed", std::to_string(f.seed)}},
                       "");
        std::cout << "wrote " << f.out << "\n";
    }
    return kExitOk;
}

// ---- check -------------------------------------------------------------

int cmd_check(const std::string& instance_path, const std::string& scheduler,
              std::uint64_t seed) {
    Instance inst = load_instance(instance_path);
    Trace alg = run(inst, scheduler, seed);
    std::optional<Trace> opt;
    if (scheduler != "srpt") opt = run(alg.realized, "srpt", seed);
    std::vector<CheckViolation> vs = check_trace(alg, opt ? &*opt : nullptr);
    if (vs.empty()) {
        std::cout << "check passed: " << scheduler << " on " << instance_path << ", "
                  << alg.events.size() << " events, all invariants hold\n";
        return kExitOk;
    }
    std::cout << vs.size() << (vs.size() == 16 ? "+" : "") << " violation(s):\n";
    for (const CheckViolation& v : vs)
        std::cout << "  t=" << rat_str(v.t) << " [" << v.check << "] " << v.detail << "\n";
    return kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact single-machine preemptive scheduling laboratory"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    GenFlags g;
    CLI::App* gen = app.add_subcommand("generate", "construct an instance family member");
    gen->add_option("kind", g.kind,
                    "badcase-sept | badcase-sr | bombard | lb-prime | lb-capped | det-lb | random")
        ->required();
    gen->add_option("--i", g.i, "chain depth for the bad cases");
    auto* kopt = gen->add_option("--k", g.k, "job count for the lower-bound families");
    gen->add_option("--n", g.n, "job count (det-lb, random)");
    gen->add_option("--mu", g.mu, "distortion bound (lb-capped, det-lb)");
    gen->add_option("--mu1", g.mu1, "underestimation factor (random)");
    gen->add_option("--mu2", g.mu2, "overestimation factor (random)");
    gen->add_option("--class-lo", g.class_lo, "lowest estimate class (random)");
    gen->add_option("--class-hi", g.class_hi, "highest estimate class (random)");
    gen->add_option("--seed", g.seed, "random seed");
    gen->add_option("--m", g.m, "bombardment length");
    gen->add_option("--t", g.t, "bombardment start (default: base meta t)");
    gen->add_option("--base", g.base, "base instance file (bombard)");
    gen->add_option("--out", g.out, "output instance path");

    std::string sim_instance, sim_sched, sim_out;
    std::uint64_t sim_seed = 0;
    CLI::App* sim = app.add_subcommand("simulate", "run one policy over an instance file");
    sim->add_option("--instance", sim_instance)->required();
    sim->add_option("--scheduler", sim_sched, "srpt | sept | sr | zigzag | dl")->required();
    sim->add_option("--seed", sim_seed);
    sim->add_option("--out", sim_out, "trace output path (JSON lines)");

    std::string cmp_instance, cmp_out;
    std::vector<std::string> cmp_scheds;
    std::uint64_t cmp_seed = 0;
    CLI::App* cmp = app.add_subcommand("compare", "flow and pending-count ratios vs srpt");
    cmp->add_option("--instance", cmp_instance)->required();
    cmp->add_option("--schedulers", cmp_scheds, "comma-separated keys")->delimiter(',');
    cmp->add_option("--seed", cmp_seed);
    cmp->add_option("--out", cmp_out, "CSV output path");

    LbFlags lb;
    CLI::App* low = app.add_subcommand("lowerbound", "many-trial pending-count experiment");
    low->add_option("--generator", lb.generator, "lb-prime | lb-capped");
    auto* lbk = low->add_option("--k", lb.k, "job count");
    low->add_option("--mu", lb.mu, "volume cap (lb-capped)");
    low->add_option("--scheduler", lb.scheduler, "non-clairvoyant policy key");
    low->add_option("--trials", lb.trials);
    low->add_option("--seed", lb.seed);
    low->add_option("--threads", lb.threads, "worker threads (default 1)");
    low->add_option("--out", lb.out, "JSON summary path");

    std::string chk_instance, chk_sched;
    std::uint64_t chk_seed = 0;
    CLI::App* chk = app.add_subcommand("check", "simulate and verify every invariant");
    chk->add_option("--instance", chk_instance)->required();
    chk->add_option("--scheduler", chk_sched)->required();
    chk->add_option("--seed", chk_seed);

    try {
        app.parse(argc, argv);
        g.has_k = kopt->count() > 0;
        lb.has_k = lbk->count() > 0;
        if (gen->parsed()) return cmd_generate(g);
        if (sim->parsed()) return cmd_simulate(sim_instance, sim_sched, sim_seed, sim_out);
        if (cmp->parsed()) return cmd_compare(cmp_instance, cmp_scheds, cmp_seed, cmp_out);
        if (low->parsed()) return cmd_lowerbound(lb);
        if (chk->parsed()) return cmd_check(chk_instance, chk_sched, chk_seed);
        throw UsageError("no subcommand");
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return kExitViolation;
    }
}
