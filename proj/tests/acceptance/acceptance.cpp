// Acceptance suite: one PASS/FAIL line per criterion on stdout, details of
// failed sub-checks on stderr. Exit status is zero iff every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aoi/analysis.hpp"
#include "aoi/harq.hpp"
#include "aoi/simulator.hpp"
#include "cli/cli.hpp"
#include "oracles.hpp"

using namespace aoi;

namespace {

struct Outcome {
    bool pass = true;
    std::string summary;
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            failures.push_back(what);
        }
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Both paths agree when they give the same number or both refuse with overflow.
struct Paired {
    bool both_overflow = false;
    double err = 0.0;
};

Paired compare_paths(const std::function<double()>& special, const std::function<double()>& generic) {
    double a = 0.0;
    double b = 0.0;
    bool oa = false;
    bool ob = false;
    try {
        a = special();
    } catch (const std::overflow_error&) {
        oa = true;
    }
    try {
        b = generic();
    } catch (const std::overflow_error&) {
        ob = true;
    }
    if (oa && ob) return {true, 0.0};
    if (oa != ob) return {false, INFINITY};
    return {false, rel(a, b)};
}

Outcome criterion_dual_path() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::int64_t> ks = {1, 10, 20, 100};
    const std::vector<double> deltas = {0.0, 0.1, 0.2, 0.3, 0.5};
    const std::vector<double> lams = {0.001, 0.005, 0.02, 0.1, 1.0};
    int cells = 0;
    int overflowed = 0;
    double worst = 0.0;
    auto record = [&](const Paired& p, const std::string& what) {
        if (p.both_overflow) ++overflowed;
        worst = std::max(worst, p.err);
        o.require(p.err <= 1e-10, what + fmt(" rel err %.3g", p.err));
    };
    for (std::int64_t k : ks) {
        for (double d : deltas) {
            const ErasureChannel ch(d);
            const auto nb = service_distribution(HarqScheme::iir(k), ch);
            for (double lam : lams) {
                ++cells;
                const auto where = fmt("IIR k=%lld delta=%g lambda=%g", static_cast<long long>(k), d, lam);
                record(compare_paths([&] { return age_blocking_iir(k, d, lam).avg_age; },
                                     [&] { return age_blocking(nb, lam).avg_age; }),
                       where + " blocking");
                record(compare_paths([&] { return age_preemptive_iir(k, d, lam).avg_age; },
                                     [&] { return age_preemptive(nb, lam).avg_age; }),
                       where + " preemptive");
            }
        }
    }
    int cycle = 0;
    for (std::int64_t k : ks) {
        const std::int64_t kp = 100 / k;
        for (double d : deltas) {
            const ErasureChannel ch(d);
            for (double lam : lams) {
                const std::int64_t choices[] = {k, (5 * k + 3) / 4, 2 * k};
                const std::int64_t n = choices[cycle++ % 3];
                const auto snb = service_distribution(HarqScheme::fr(k, n, kp), ch);
                ++cells;
                const auto where = fmt("FR k=%lld n=%lld kp=%lld delta=%g lambda=%g", static_cast<long long>(k),
                                       static_cast<long long>(n), static_cast<long long>(kp), d, lam);
                record(compare_paths([&] { return age_blocking_fr(k, n, kp, d, lam).avg_age; },
                                     [&] { return age_blocking(snb, lam).avg_age; }),
                       where + " blocking");
                record(compare_paths([&] { return age_preemptive_fr(k, n, kp, d, lam).avg_age; },
                                     [&] { return age_preemptive(snb, lam).avg_age; }),
                       where + " preemptive");
            }
        }
    }
    const double secs = seconds_since(t0);
    o.require(cells == 200, fmt("expected 200 cells, got %d", cells));
    o.require(secs < 1.0, fmt("runtime %.3f s exceeds 1 s", secs));
    o.summary = fmt("dual-path identity: %d cells x 2 disciplines, max rel err %.2e, %d pairs overflow on both paths, %.3f s",
                    cells, worst, overflowed, secs);
    return o;
}

struct SimCell {
    std::string label;
    Discipline discipline;
    double lam;
    ServiceModel service;
    ServiceDistribution law;
};

SimCell dist_cell(std::string label, Discipline d, double lam, ServiceDistribution law) {
    return {std::move(label), d, lam, law, law};
}

SimCell harq_cell(std::string label, Discipline d, double lam, HarqScheme scheme, double delta, bool symbol_level) {
    const ErasureChannel ch(delta);
    const auto law = service_distribution(scheme, ch);
    return {std::move(label), d, lam, symbol_level ? ServiceModel(SymbolLevelService{scheme, ch}) : ServiceModel(law), law};
}

Outcome criterion_simulation() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto B = Discipline::Blocking;
    const auto P = Discipline::Preemptive;
    const ServiceDistribution hyper = HyperExponential({0.5, 0.5}, {1.0, 10.0});
    const std::vector<SimCell> cells = {
        dist_cell("blocking exp(1) lambda=1", B, 1.0, Exponential(1.0)),
        dist_cell("blocking det(1) lambda=0.5", B, 0.5, Deterministic(1.0)),
        dist_cell("blocking gamma(2,0.5) lambda=2", B, 2.0, Gamma(2.0, 0.5)),
        dist_cell("blocking hyperexp lambda=0.7", B, 0.7, hyper),
        dist_cell("blocking gamma(0.5,2) lambda=0.3", B, 0.3, Gamma(0.5, 2.0)),
        harq_cell("blocking IIR k=100 delta=0.2 lambda=0.01", B, 0.01, HarqScheme::iir(100), 0.2, false),
        harq_cell("blocking IIR k=10 delta=0.3 lambda=0.1 symbol-level", B, 0.1, HarqScheme::iir(10), 0.3, true),
        harq_cell("blocking FR(20,25,5) delta=0.2 lambda=1", B, 1.0, HarqScheme::fr(20, 25, 5), 0.2, false),
        dist_cell("preemptive exp(1) lambda=1", P, 1.0, Exponential(1.0)),
        dist_cell("preemptive det(1) lambda=1", P, 1.0, Deterministic(1.0)),
        dist_cell("preemptive gamma(2,0.5) lambda=1.2", P, 1.2, Gamma(2.0, 0.5)),
        dist_cell("preemptive hyperexp lambda=0.5", P, 0.5, hyper),
        dist_cell("preemptive gamma(0.5,2) lambda=0.3", P, 0.3, Gamma(0.5, 2.0)),
        harq_cell("preemptive IIR k=100 delta=0.2 lambda=0.005 symbol-level", P, 0.005, HarqScheme::iir(100), 0.2, true),
        harq_cell("preemptive IIR k=10 delta=0.1 lambda=0.05", P, 0.05, HarqScheme::iir(10), 0.1, false),
        harq_cell("preemptive FR(20,29,5) delta=0.2 lambda=0.0066", P, 0.0066, HarqScheme::fr(20, 29, 5), 0.2, false),
    };
    std::vector<SimConfig> configs;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        SimConfig c;
        c.discipline = cells[i].discipline;
        c.lam = cells[i].lam;
        c.service = cells[i].service;
        c.deliveries = 200000;
        c.warmup = 1000;
        c.seed = 1000 + i;
        configs.push_back(std::move(c));
    }
    const auto outcomes = batch_run(configs);
    int checks = 0;
    double worst_z = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& cell = cells[i];
        if (!outcomes[i].ok()) {
            o.require(false, cell.label + ": " + outcomes[i].error);
            continue;
        }
        const SimResult& r = *outcomes[i].result;
        const ServiceDistribution& s = cell.law;
        double age = 0.0;
        double rate = 0.0;
        double sys = 0.0;
        Moments y;
        if (cell.discipline == Discipline::Blocking) {
            const AgeReport rep = age_blocking(s, cell.lam);
            age = rep.avg_age;
            rate = rep.effective_rate;
            sys = s.mean();
            // Y = idle Exp(lam) wait plus one service.
            y.first = 1.0 / cell.lam + s.mean();
            y.second = 2.0 / (cell.lam * cell.lam) + 2.0 * s.mean() / cell.lam + s.second_moment();
        } else {
            const AgeReport rep = age_preemptive(s, cell.lam);
            age = rep.avg_age;
            rate = rep.effective_rate;
            sys = preemptive_system_time_mean(s, cell.lam);
            y = preemptive_interdeparture_moments(s, cell.lam);
        }
        const struct {
            const char* name;
            double sim;
            double se;
            double exact;
        } stats[] = {
            {"age", r.avg_age, r.stderr_age, age},
            {"effective rate", r.eff_rate, r.stderr_eff_rate, rate},
            {"E(T)", r.mean_system_time, r.stderr_system_time, sys},
            {"E(Y)", r.mean_interdeparture, r.stderr_interdeparture, y.first},
            {"E(Y^2)", r.mean_sq_interdeparture, r.stderr_sq_interdeparture, y.second},
        };
        for (const auto& st : stats) {
            ++checks;
            const double z = (st.sim - st.exact) / st.se;
            worst_z = std::max(worst_z, std::abs(z));
            o.require(std::abs(z) < 3.0, cell.label + ": " + st.name + fmt(" sim %.10g exact %.10g z %.2f", st.sim, st.exact, z));
        }
    }
    const double secs = seconds_since(t0);
    o.require(secs < 120.0, fmt("runtime %.1f s exceeds 2 min", secs));
    o.summary = fmt("simulation vs closed forms: %zu cells, %d checks, max |z| %.2f (bound 3), %.1f s", cells.size(), checks,
                    worst_z, secs);
    return o;
}

Outcome criterion_exact_optima() {
    Outcome o;
    const auto one = optimal_preemptive_iir(1, 0.0);
    o.require(one.optimal_rate && std::abs(*one.optimal_rate - 1.0) <= 1e-10, "k_s=1 delta=0: rate != 1");
    o.require(std::abs(one.optimal_age - std::numbers::e) <= 1e-10, "k_s=1 delta=0: age != e");
    int cases = 1;
    double worst = std::abs(*one.optimal_rate - 1.0);
    for (std::int64_t k : {1, 2, 10, 20, 100, 1000}) {
        const auto r = optimal_preemptive_iir(k, 0.0);
        const double target = 1.0 / static_cast<double>(k);
        const double e = rel(*r.optimal_rate, target);
        worst = std::max(worst, e);
        o.require(e <= 1e-12, fmt("IIR k=%lld delta=0: rate %.17g", static_cast<long long>(k), *r.optimal_rate));
        ++cases;
    }
    struct Fr {
        std::int64_t ks, ns, kp;
    };
    for (const Fr f : {Fr{20, 25, 5}, Fr{10, 10, 10}, Fr{100, 120, 1}, Fr{1, 2, 100}}) {
        const auto r = optimal_preemptive_fr(f.ks, f.ns, f.kp, 0.0);
        const double target = 1.0 / static_cast<double>(f.ns * f.kp);
        const double e = rel(*r.optimal_rate, target);
        worst = std::max(worst, e);
        o.require(e <= 1e-12, fmt("FR (%lld,%lld,%lld) delta=0: rate %.17g", static_cast<long long>(f.ks),
                                  static_cast<long long>(f.ns), static_cast<long long>(f.kp), *r.optimal_rate));
        ++cases;
    }
    o.summary = fmt("exact optima: k_s=1 gives rate %.15g and age %.15g; %d delta=0 cases, max rel err %.1e", *one.optimal_rate,
                    one.optimal_age, cases, worst);
    return o;
}

Outcome criterion_blocking_optimum() {
    Outcome o;
    double worst = 0.0;
    const std::vector<ServiceDistribution> hypers = {
        HyperExponential({0.5, 0.5}, {1.0, 10.0}),
        HyperExponential({0.2, 0.8}, {0.1, 3.0}),
        HyperExponential({0.9, 0.1}, {5.0, 0.2}),
        HyperExponential({0.3, 0.3, 0.4}, {0.5, 2.0, 20.0}),
    };
    for (const auto& h : hypers) {
        o.require(h.scv() > 1.0, h.describe() + " scv <= 1");
        const auto opt = optimal_blocking(h);
        if (!opt.optimal_rate) {
            o.require(false, h.describe() + ": optimum reported unbounded");
            continue;
        }
        const double scale = 1.0 / h.mean();
        const auto grid = oracle::log_grid(1e-2 * scale, 1e2 * scale, 10000);
        const double best = grid[oracle::grid_argmin(grid, [&](double lam) { return age_blocking(h, lam).avg_age; })];
        const double e = rel(*opt.optimal_rate, best);
        worst = std::max(worst, e);
        o.require(e < 1e-3, h.describe() + fmt(": closed form %.10g grid %.10g", *opt.optimal_rate, best));
    }
    const std::vector<ServiceDistribution> light = {Deterministic(1.0),        Deterministic(5.0),   NegBinomial(100, 0.8),
                                                    NegBinomial(5, 0.5),       NegBinomial(1, 0.5),  Exponential(2.0),
                                                    ScaledNegBinomial(25, 5, 0.6)};
    int monotone = 0;
    for (const auto& d : light) {
        o.require(d.scv() <= 1.0, d.describe() + " scv > 1");
        const double scale = 1.0 / d.mean();
        double prev = INFINITY;
        bool ok = true;
        for (double lam : oracle::log_grid(1e-3 * scale, 1e3 * scale, 121)) {
            const double a = age_blocking(d, lam).avg_age;
            if (!(a < prev)) ok = false;
            prev = a;
        }
        o.require(ok, d.describe() + ": blocking age not strictly decreasing");
        monotone += ok ? 1 : 0;
    }
    o.summary = fmt("blocking optimum: %zu hyperexponential laws match a 1e4-point grid (max rel err %.1e, bound 1e-3); "
                    "%d/%zu laws with scv <= 1 strictly decreasing over 6 decades",
                    hypers.size(), worst, monotone, light.size());
    return o;
}

Outcome criterion_bounds() {
    Outcome o;
    int cases = 0;
    double worst_gap = 0.0;
    int gap_over = 0;
    for (std::int64_t k : {1, 5, 10, 20, 50, 100}) {
        for (double d : {0.0, 0.1, 0.2, 0.3, 0.5, 0.7}) {
            const auto r = optimal_preemptive_iir(k, d);
            const double at_opt = preemptive_iir_lower_bound(k, d, *r.optimal_rate);
            const auto where = fmt("IIR k=%lld delta=%g", static_cast<long long>(k), d);
            o.require(*r.bound_lower <= r.optimal_age * (1 + 1e-12), where + ": reported bound above optimum");
            o.require(at_opt <= r.optimal_age * (1 + 1e-12), where + ": bound at optimum above optimum");
            ++cases;
            if (k >= 10 && d <= 0.5) {
                const double gap = (r.optimal_age - *r.bound_lower) / r.optimal_age;
                worst_gap = std::max(worst_gap, gap);
                gap_over += gap > 0.05 ? 1 : 0;
            }
        }
    }
    for (std::int64_t ks : {10, 20, 100}) {
        const std::int64_t kp = 100 / ks;
        for (std::int64_t ns : {ks, (5 * ks + 3) / 4, 2 * ks}) {
            for (double d : {0.0, 0.1, 0.2, 0.3}) {
                const double eps = packet_erasure_prob(ns, ks, d);
                if (eps > 0.999) continue;
                const auto r = optimal_preemptive_fr(ks, ns, kp, d);
                const double at_opt = preemptive_fr_lower_bound(ns, kp, eps, *r.optimal_rate);
                const auto where = fmt("FR (%lld,%lld,%lld) delta=%g", static_cast<long long>(ks), static_cast<long long>(ns),
                                       static_cast<long long>(kp), d);
                o.require(*r.bound_lower <= r.optimal_age * (1 + 1e-12), where + ": reported bound above optimum");
                o.require(at_opt <= r.optimal_age * (1 + 1e-12), where + ": bound at optimum above optimum");
                ++cases;
            }
        }
    }
    o.summary = fmt("lower bounds hold in %d cases; IIR gap for k_s>=10, delta<=0.5: max %.2f%% (%d above 5%%, reported only)",
                    cases, 100.0 * worst_gap, gap_over);
    return o;
}

Outcome criterion_qualitative() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const double delta = 0.2;
    const std::int64_t total = 100;
    const auto grid = oracle::log_grid(1e-3, 10.0, 41);
    auto safe = [](const std::function<double()>& f) {
        try {
            return f();
        } catch (const std::overflow_error&) {
            return static_cast<double>(INFINITY);
        }
    };
    int compared = 0;
    for (double lam : grid) {
        const double ib = age_blocking_iir(total, delta, lam).avg_age;
        const double ip = safe([&] { return age_preemptive_iir(total, delta, lam).avg_age; });
        o.require(ib <= ip, fmt("(a) IIR lambda=%g blocking %.10g > preemptive %.10g", lam, ib, ip));
        for (std::int64_t ks : {10, 20, 100}) {
            const std::int64_t kp = total / ks;
            const auto fb = sweep_codeword_length(ks, kp, delta, lam, Discipline::Blocking, ks, 10 * ks);
            const auto fp = sweep_codeword_length(ks, kp, delta, lam, Discipline::Preemptive, ks, 10 * ks);
            o.require(fb.min_age <= fp.min_age,
                      fmt("(a) FR k_s=%lld lambda=%g blocking %.10g > preemptive %.10g", static_cast<long long>(ks), lam,
                          fb.min_age, fp.min_age));
            o.require(ib <= fb.min_age, fmt("(d) blocking lambda=%g IIR %.10g > FR k_s=%lld %.10g", lam, ib,
                                            static_cast<long long>(ks), fb.min_age));
            o.require(ip <= fp.min_age, fmt("(d) preemptive lambda=%g IIR %.10g > FR k_s=%lld %.10g", lam, ip,
                                            static_cast<long long>(ks), fp.min_age));
            compared += 3;
        }
    }
    std::string argmins;
    for (auto [disc, lam] : {std::pair{Discipline::Preemptive, 0.0066}, std::pair{Discipline::Blocking, 1.0}}) {
        std::int64_t prev = 0;
        argmins += to_string(disc) + " ";
        for (double d : {0.1, 0.2, 0.3}) {
            const auto t = sweep_codeword_length(20, 5, d, lam, disc, 20, 200);
            o.require(t.argmin_n_s > 20 && t.argmin_n_s < 200,
                      fmt("(b) %s delta=%g argmin %lld not interior", to_string(disc).c_str(), d,
                          static_cast<long long>(t.argmin_n_s)));
            o.require(t.argmin_n_s >= prev, fmt("(c) %s argmin decreases at delta=%g", to_string(disc).c_str(), d));
            prev = t.argmin_n_s;
            argmins += std::to_string(t.argmin_n_s) + (d < 0.3 ? "/" : "; ");
        }
    }
    const double secs = seconds_since(t0);
    o.require(secs < 60.0, fmt("runtime %.1f s exceeds 1 min", secs));
    o.summary = fmt("qualitative shape at delta=0.2, K=100: %d paired comparisons over 41 rates; FR k_s=20 argmin n_s "
                    "for delta 0.1/0.2/0.3: %s%.2f s",
                    compared, argmins.c_str(), secs);
    return o;
}

Outcome criterion_harq_oracle() {
    Outcome o;
    struct Triple {
        int n;
        int k;
        double d;
    };
    double worst_z = 0.0;
    std::uint64_t seed = 7000;
    for (const Triple t : {Triple{25, 20, 0.2}, Triple{40, 20, 0.4}, Triple{12, 6, 0.3}}) {
        const auto mc = oracle::erasure_prob_monte_carlo(t.n, t.k, t.d, 1000000, seed++);
        const double z = (mc.value - packet_erasure_prob(t.n, t.k, t.d)) / mc.stderr_;
        worst_z = std::max(worst_z, std::abs(z));
        o.require(std::abs(z) < 3.0, fmt("eps_p(%d,%d,%g): z %.2f", t.n, t.k, t.d, z));
    }
    struct Pair {
        HarqScheme scheme;
        double delta;
    };
    const std::vector<Pair> pairs = {
        {HarqScheme::iir(10), 0.1},
        {HarqScheme::iir(100), 0.2},
        {HarqScheme::fr(20, 25, 5), 0.2},
        {HarqScheme::fr(10, 15, 10), 0.3},
    };
    double worst_ratio = 0.0;
    for (const auto& p : pairs) {
        const ErasureChannel ch(p.delta);
        const auto law = service_distribution(p.scheme, ch);
        Rng a(seed++);
        Rng b(seed++);
        std::vector<double> xs(100000);
        std::vector<double> ys(100000);
        for (auto& x : xs) x = static_cast<double>(sample_service_symbolwise(p.scheme, ch, a));
        for (auto& y : ys) y = law.sample(b);
        const auto ks = oracle::ks_two_sample(xs, ys);
        worst_ratio = std::max(worst_ratio, ks.statistic / ks.critical);
        o.require(!ks.rejects(), p.scheme.describe() + fmt(" delta=%g: KS %.4g > %.4g", p.delta, ks.statistic, ks.critical));
    }
    o.summary = fmt("HARQ oracle: 3 erasure probabilities vs 1e6-trial Monte Carlo (max |z| %.2f); 4 KS tests at alpha 0.01 "
                    "(max D/critical %.2f)",
                    worst_z, worst_ratio);
    return o;
}

Outcome criterion_determinism() {
    Outcome o;
    const std::vector<std::vector<std::string>> invocations = {
        {"simulate", "--discipline", "preemptive", "--scheme", "dist:exponential", "--mu", "1", "--lambda", "1",
         "--deliveries", "100000", "--seed", "42"},
        {"simulate", "--discipline", "blocking", "--scheme", "fr", "--ks", "20", "--ns", "25", "--kp", "5", "--delta", "0.2",
         "--lambda", "0.1,1", "--deliveries", "20000", "--seed", "5", "--symbol-level"},
        {"simulate", "--discipline", "preemptive", "--scheme", "iir", "--ks", "10", "--delta", "0.1", "--lambda", "0.05",
         "--deliveries", "20000", "--format", "json"},
    };
    for (const auto& args : invocations) {
        std::ostringstream a, b, ea, eb;
        const int ca = cli::run(args, a, ea);
        const int cb = cli::run(args, b, eb);
        o.require(ca == 0 && cb == 0, "simulate failed: " + ea.str());
        o.require(!a.str().empty() && a.str() == b.str(), "simulate output differs between identical invocations");
    }
    std::vector<SimConfig> configs;
    for (std::uint64_t i = 0; i < 8; ++i) {
        SimConfig c;
        c.discipline = i % 2 ? Discipline::Preemptive : Discipline::Blocking;
        c.lam = 0.2 + 0.15 * static_cast<double>(i);
        c.service = i % 3 ? ServiceModel(ServiceDistribution(Gamma(1.5, 0.7)))
                          : ServiceModel(SymbolLevelService{HarqScheme::iir(5), ErasureChannel(0.2)});
        c.deliveries = 20000;
        c.seed = 500 + i;
        configs.push_back(std::move(c));
    }
    const auto reference = batch_run(configs, 1);
    for (unsigned workers : {2u, 3u, 8u, 0u}) {
        const auto other = batch_run(configs, workers);
        for (std::size_t i = 0; i < configs.size(); ++i) {
            o.require(reference[i].ok() && other[i].ok() && *reference[i].result == *other[i].result,
                      fmt("batch_run cell %zu differs with %u workers", i, workers));
        }
    }
    for (std::size_t i = 0; i < configs.size(); ++i) {
        o.require(reference[i].ok() && *reference[i].result == run(configs[i]), fmt("batch_run cell %zu differs from run", i));
    }
    o.summary = fmt("determinism: %zu simulate invocations byte-identical on repeat; batch_run of %zu configs identical "
                    "for 1, 2, 3, 8 and default workers",
                    invocations.size(), configs.size());
    return o;
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria = {
        criterion_dual_path,       criterion_simulation, criterion_exact_optima, criterion_blocking_optimum,
        criterion_bounds,          criterion_qualitative, criterion_harq_oracle,  criterion_determinism,
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("threw: ") + e.what();
        }
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.summary << std::endl;
        for (const auto& f : o.failures) std::cerr << "  criterion " << i + 1 << " failed check: " << f << "\n";
        failed += o.pass ? 0 : 1;
    }
    std::cout << (failed ? "acceptance: FAIL (" + std::to_string(failed) + " criteria)" : std::string("acceptance: PASS"))
              << std::endl;
    return failed ? 1 : 0;
}
