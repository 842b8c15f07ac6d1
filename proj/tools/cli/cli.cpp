#include "cli/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "aoi/analysis.hpp"
#include "aoi/harq.hpp"
#include "aoi/simulator.hpp"

namespace aoi::cli {
namespace {

// Bad parameter values. Exit code 2, everything else that throws is exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void bad(const std::string& msg) { throw UsageError(msg); }

struct Params {
    std::string discipline = "blocking";
    std::string scheme = "iir";
    std::int64_t ks = 100;
    std::int64_t ns = 0;  // 0: not given
    std::int64_t kp = 1;
    double delta = 0.2;
    std::vector<double> lambda;
    std::uint64_t deliveries = 100000;
    std::uint64_t warmup = 1000;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";

    // dist:<name> parameters
    double mu = 1.0;
    double duration = 1.0;
    double shape = 1.0;
    double scale = 1.0;
    double q = 0.5;
    std::vector<double> weights;
    std::vector<double> rates;

    bool symbol_level = false;
    std::uint64_t max_events = 1000000000;
    unsigned workers = 0;

    std::int64_t n_min = 0;
    std::int64_t n_max = 0;
    std::string what = "disciplines";

    std::string figure = "all";
    std::string out_dir;
    std::vector<std::int64_t> ks_list = {10, 20, 100};
    std::int64_t total_symbols = 100;
    std::int64_t fr_ks = 20;
    std::vector<double> deltas = {0.1, 0.2, 0.3};
    std::size_t points = 41;
    std::uint64_t sim_deliveries = 0;
};

std::string num(double x) { return format_double(x); }

void check_delta(double d, const std::string& name = "delta") {
    if (!(d >= 0.0 && d < 1.0)) bad(name + " must lie in [0, 1), got " + num(d));
}

void check_lambdas(const std::vector<double>& lams) {
    if (lams.empty()) bad("lambda is required");
    for (double l : lams) {
        if (!(l > 0.0) || !std::isfinite(l)) bad("lambda must be positive and finite, got " + num(l));
    }
}

std::string joined(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ";" : "") + num(xs[i]);
    return s;
}

// The service side of an experiment: a HARQ scheme on an erasure channel or a plain law.
struct Model {
    std::optional<HarqScheme> harq;
    std::optional<ServiceDistribution> dist;
    std::string dist_name;

    bool is_iir() const { return harq && harq->is_iir(); }
    bool is_fr() const { return harq && !harq->is_iir(); }
};

Model build_model(const Params& p, bool need_ns = true) {
    Model m;
    if (p.scheme == "iir" || p.scheme == "fr") {
        check_delta(p.delta);
        if (p.ks < 1) bad("ks must be at least 1, got " + std::to_string(p.ks));
        if (p.scheme == "iir") {
            m.harq = HarqScheme::iir(p.ks);
            return m;
        }
        if (p.kp < 1) bad("kp must be at least 1, got " + std::to_string(p.kp));
        if (need_ns) {
            if (p.ns == 0) bad("ns is required for --scheme fr");
            if (p.ns < p.ks) bad("ns must be at least ks (" + std::to_string(p.ks) + "), got " + std::to_string(p.ns));
            m.harq = HarqScheme::fr(p.ks, p.ns, p.kp);
        } else {
            m.harq = HarqScheme::fr(p.ks, p.ks, p.kp);
        }
        return m;
    }
    if (!p.scheme.starts_with("dist:")) bad("scheme must be iir, fr or dist:<name>, got '" + p.scheme + "'");
    m.dist_name = p.scheme.substr(5);
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) bad(std::string(name) + " must be positive, got " + num(v));
    };
    if (m.dist_name == "exponential") {
        positive(p.mu, "mu");
        m.dist = Exponential(p.mu);
    } else if (m.dist_name == "deterministic") {
        positive(p.duration, "duration");
        m.dist = Deterministic(p.duration);
    } else if (m.dist_name == "gamma") {
        positive(p.shape, "shape");
        positive(p.scale, "scale");
        m.dist = Gamma(p.shape, p.scale);
    } else if (m.dist_name == "hyperexponential") {
        if (p.weights.empty() || p.weights.size() != p.rates.size()) bad("weights and rates must be nonempty and of equal length");
        double total = 0.0;
        for (double w : p.weights) {
            positive(w, "weights");
            total += w;
        }
        for (double r : p.rates) positive(r, "rates");
        if (std::abs(total - 1.0) > 1e-12) bad("weights must sum to 1, got " + num(total));
        m.dist = HyperExponential(p.weights, p.rates);
    } else if (m.dist_name == "negbinomial") {
        if (p.ks < 1) bad("ks must be at least 1, got " + std::to_string(p.ks));
        if (!(p.q > 0.0 && p.q <= 1.0)) bad("q must lie in (0, 1], got " + num(p.q));
        m.dist = NegBinomial(p.ks, p.q);
    } else {
        bad("unknown distribution '" + m.dist_name +
            "' (expected exponential, deterministic, gamma, hyperexponential, negbinomial)");
    }
    return m;
}

ServiceDistribution service_law(const Model& m, double delta) {
    if (m.dist) return *m.dist;
    return service_distribution(*m.harq, ErasureChannel(delta));
}

AgeReport analytic(const Model& m, const Params& p, Discipline d, double lam) {
    const bool blocking = d == Discipline::Blocking;
    if (m.is_iir()) return blocking ? age_blocking_iir(p.ks, p.delta, lam) : age_preemptive_iir(p.ks, p.delta, lam);
    if (m.is_fr()) {
        const auto& fr = std::get<FrScheme>(m.harq->variant());
        return blocking ? age_blocking_fr(fr.symbols, fr.codeword, fr.packets, p.delta, lam)
                        : age_preemptive_fr(fr.symbols, fr.codeword, fr.packets, p.delta, lam);
    }
    return blocking ? age_blocking(*m.dist, lam) : age_preemptive(*m.dist, lam);
}

// Grid cells whose age is not representable are reported as +inf rather than failing the run.
double age_or_inf(const std::function<double()>& f) {
    try {
        return f();
    } catch (const std::overflow_error&) {
        return INFINITY;
    } catch (const std::domain_error&) {
        return INFINITY;
    }
}

Record inputs(const Params& p, const Model& m, const std::string& command) {
    Record r;
    r["tool_version"] = std::string(kToolVersion);
    r["command"] = command;
    r["discipline"] = p.discipline;
    r["scheme"] = p.scheme;
    if (m.harq) {
        r["k_s"] = p.ks;
        r["n_s"] = m.is_fr() ? Record(p.ns) : Record(nullptr);
        r["k_p"] = m.is_fr() ? p.kp : 1;
        r["delta"] = p.delta;
    } else if (m.dist_name == "exponential") {
        r["mu"] = p.mu;
    } else if (m.dist_name == "deterministic") {
        r["duration"] = p.duration;
    } else if (m.dist_name == "gamma") {
        r["shape"] = p.shape;
        r["scale"] = p.scale;
    } else if (m.dist_name == "hyperexponential") {
        r["weights"] = joined(p.weights);
        r["rates"] = joined(p.rates);
    } else if (m.dist_name == "negbinomial") {
        r["k_s"] = p.ks;
        r["q"] = p.q;
    }
    r["seed"] = p.seed;
    r["deliveries"] = p.deliveries;
    r["warmup"] = p.warmup;
    return r;
}

Record opt(const std::optional<double>& v) { return v ? Record(*v) : Record(nullptr); }

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
    }
    xs.back() = hi;
    return xs;
}

std::string render(const std::vector<Record>& rows, const std::string& format) {
    if (format == "json") {
        Record arr = Record::array();
        for (const auto& r : rows) arr.push_back(r);
        return arr.dump(2) + "\n";
    }
    return to_csv(rows);
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
    f << text;
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

// ---- subcommands ----

int cmd_analyze(const Params& p, std::ostream& out) {
    const Model m = build_model(p);
    check_lambdas(p.lambda);
    const Discipline d = parse_discipline(p.discipline);
    std::vector<Record> rows;
    for (double lam : p.lambda) {
        Record r = inputs(p, m, "analyze");
        r["lambda"] = lam;
        const AgeReport rep = analytic(m, p, d, lam);
        r["avg_age"] = rep.avg_age;
        r["effective_rate"] = rep.effective_rate;
        r["utilization_beta"] = opt(rep.utilization_beta);
        r["formula"] = rep.notes;
        rows.push_back(std::move(r));
    }
    write_text(render(rows, p.format), p.out, out);
    return 0;
}

int cmd_simulate(const Params& p, std::ostream& out, std::ostream& err) {
    const Model m = build_model(p);
    check_lambdas(p.lambda);
    if (p.deliveries < p.warmup + 2) bad("deliveries must be at least warmup + 2");
    if (p.max_events == 0) bad("max-events must be positive");
    if (p.symbol_level && !m.harq) bad("symbol-level needs --scheme iir or fr");
    const Discipline d = parse_discipline(p.discipline);

    std::vector<SimConfig> configs;
    for (std::size_t i = 0; i < p.lambda.size(); ++i) {
        SimConfig c;
        c.discipline = d;
        c.lam = p.lambda[i];
        if (p.symbol_level) {
            c.service = SymbolLevelService{*m.harq, ErasureChannel(p.delta)};
        } else {
            c.service = service_law(m, p.delta);
        }
        c.deliveries = p.deliveries;
        c.warmup = p.warmup;
        c.seed = p.seed + i;
        c.max_events_without_delivery = p.max_events;
        configs.push_back(std::move(c));
    }
    const auto outcomes = batch_run(configs, p.workers);

    int status = 0;
    std::vector<Record> rows;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!outcomes[i].ok()) {
            err << "error: simulation at lambda=" << num(configs[i].lam) << " failed: " << outcomes[i].error << "\n";
            status = 1;
            continue;
        }
        const SimResult& s = *outcomes[i].result;
        Record r = inputs(p, m, "simulate");
        r["seed"] = configs[i].seed;
        r["lambda"] = configs[i].lam;
        r["symbol_level"] = p.symbol_level;
        r["max_events"] = p.max_events;
        r["measured_deliveries"] = s.measured_deliveries;
        r["elapsed"] = s.elapsed;
        r["total_area"] = s.total_area;
        r["avg_age"] = s.avg_age;
        r["stderr_age"] = s.stderr_age;
        r["eff_rate"] = s.eff_rate;
        r["stderr_eff_rate"] = s.stderr_eff_rate;
        r["mean_interdeparture"] = s.mean_interdeparture;
        r["stderr_interdeparture"] = s.stderr_interdeparture;
        r["mean_sq_interdeparture"] = s.mean_sq_interdeparture;
        r["stderr_sq_interdeparture"] = s.stderr_sq_interdeparture;
        r["mean_system_time"] = s.mean_system_time;
        r["stderr_system_time"] = s.stderr_system_time;
        r["batches"] = s.batches;
        r["arrivals"] = s.arrivals;
        r["events"] = s.events;
        std::optional<AgeReport> exact;
        try {
            exact = analytic(m, p, d, configs[i].lam);
        } catch (const std::overflow_error&) {
        } catch (const std::domain_error&) {
        }
        r["analytic_age"] = exact ? Record(exact->avg_age) : Record(nullptr);
        r["z_age"] = exact ? Record((s.avg_age - exact->avg_age) / s.stderr_age) : Record(nullptr);
        r["analytic_eff_rate"] = exact ? Record(exact->effective_rate) : Record(nullptr);
        r["z_eff_rate"] = exact ? Record((s.eff_rate - exact->effective_rate) / s.stderr_eff_rate) : Record(nullptr);
        rows.push_back(std::move(r));
    }
    if (!rows.empty()) write_text(render(rows, p.format), p.out, out);
    return status;
}

int cmd_optimize(const Params& p, std::ostream& out) {
    const Model m = build_model(p);
    const Discipline d = parse_discipline(p.discipline);
    OptimumReport rep;
    if (d == Discipline::Blocking) {
        if (m.is_iir()) {
            rep = min_age_blocking_iir(p.ks, p.delta);
        } else if (m.is_fr()) {
            rep = min_age_blocking_fr(p.ks, p.ns, p.kp, p.delta);
        } else {
            rep = optimal_blocking(*m.dist);
        }
    } else {
        if (m.is_iir()) {
            rep = optimal_preemptive_iir(p.ks, p.delta);
        } else if (m.is_fr()) {
            rep = optimal_preemptive_fr(p.ks, p.ns, p.kp, p.delta);
        } else {
            bad("optimize under preemption needs --scheme iir or fr; for other laws scan lambda with analyze");
        }
    }
    Record r = inputs(p, m, "optimize");
    r["optimal_rate"] = opt(rep.optimal_rate);
    r["unbounded"] = rep.unbounded();
    r["optimal_age"] = rep.optimal_age;
    r["optimal_beta"] = opt(rep.optimal_beta);
    r["approx_rate"] = opt(rep.approx_rate);
    r["bound_lower"] = opt(rep.bound_lower);
    r["method"] = to_string(rep.method);
    r["notes"] = rep.notes;
    write_text(render({r}, p.format), p.out, out);
    return 0;
}

std::pair<std::int64_t, std::int64_t> sweep_range(const Params& p) {
    const std::int64_t lo = p.n_min ? p.n_min : p.ks;
    const std::int64_t hi = p.n_max ? p.n_max : 10 * p.ks;
    if (lo < p.ks) bad("n-min must be at least ks (" + std::to_string(p.ks) + "), got " + std::to_string(lo));
    if (hi < lo) bad("n-max must be at least n-min, got " + std::to_string(hi));
    return {lo, hi};
}

int cmd_sweep(const Params& p, std::ostream& out) {
    if (p.scheme != "fr") bad("sweep needs --scheme fr");
    const Model m = build_model(p, false);
    check_lambdas(p.lambda);
    const auto [lo, hi] = sweep_range(p);
    const Discipline d = parse_discipline(p.discipline);
    std::vector<Record> rows;
    for (double lam : p.lambda) {
        const SweepTable t = sweep_codeword_length(p.ks, p.kp, p.delta, lam, d, lo, hi);
        for (const auto& row : t.rows) {
            Record r = inputs(p, m, "sweep");
            r["n_s"] = row.n_s;
            r["n_min"] = lo;
            r["n_max"] = hi;
            r["lambda"] = lam;
            r["eps_p"] = row.eps_p;
            r["avg_age"] = row.avg_age;
            r["is_argmin"] = row.n_s == t.argmin_n_s;
            rows.push_back(std::move(r));
        }
    }
    write_text(render(rows, p.format), p.out, out);
    return 0;
}

int cmd_compare(const Params& p, std::ostream& out) {
    check_lambdas(p.lambda);
    std::vector<Record> rows;
    if (p.what == "disciplines") {
        const Model m = build_model(p);
        for (double lam : p.lambda) {
            Record r = inputs(p, m, "compare");
            r["what"] = p.what;
            r["lambda"] = lam;
            const double b = age_or_inf([&] { return analytic(m, p, Discipline::Blocking, lam).avg_age; });
            const double pr = age_or_inf([&] { return analytic(m, p, Discipline::Preemptive, lam).avg_age; });
            r["blocking_age"] = b;
            r["preemptive_age"] = pr;
            r["gap"] = pr - b;
            rows.push_back(std::move(r));
        }
    } else {
        if (p.scheme != "fr") bad("compare --what schemes needs --scheme fr (ks, kp fix the packetisation)");
        const Model m = build_model(p, p.ns != 0);
        const Discipline d = parse_discipline(p.discipline);
        const std::int64_t total = p.ks * p.kp;
        const auto [lo, hi] = p.ns ? std::pair{p.ns, p.ns} : sweep_range(p);
        for (double lam : p.lambda) {
            Record r = inputs(p, m, "compare");
            r["what"] = p.what;
            r["lambda"] = lam;
            r["total_symbols"] = total;
            const double iir = age_or_inf([&] {
                return d == Discipline::Blocking ? age_blocking_iir(total, p.delta, lam).avg_age
                                                 : age_preemptive_iir(total, p.delta, lam).avg_age;
            });
            const SweepTable t = sweep_codeword_length(p.ks, p.kp, p.delta, lam, d, lo, hi);
            r["iir_age"] = iir;
            r["fr_age"] = t.min_age;
            r["fr_n_s"] = t.argmin_n_s;
            r["gap"] = t.min_age - iir;
            rows.push_back(std::move(r));
        }
    }
    write_text(render(rows, p.format), p.out, out);
    return 0;
}

// ---- figures ----

Record figure_inputs(const Params& p, const std::string& fig) {
    Record r;
    r["tool_version"] = std::string(kToolVersion);
    r["command"] = "figures";
    r["figure"] = fig;
    r["total_symbols"] = p.total_symbols;
    r["seed"] = p.seed;
    return r;
}

// Age against lambda for FR at each k_s, n_s chosen per lambda from [k_s, 10 k_s].
std::vector<Record> figure_rate_curves(const Params& p, const std::string& fig, Discipline d, double lo, double hi) {
    std::vector<Record> rows;
    for (std::int64_t ks : p.ks_list) {
        const std::int64_t kp = p.total_symbols / ks;
        for (double lam : log_grid(lo, hi, p.points)) {
            const SweepTable t = sweep_codeword_length(ks, kp, p.delta, lam, d, ks, 10 * ks);
            Record r = figure_inputs(p, fig);
            r["discipline"] = to_string(d);
            r["delta"] = p.delta;
            r["k_s"] = ks;
            r["k_p"] = kp;
            r["n_min"] = ks;
            r["n_max"] = 10 * ks;
            r["lambda"] = lam;
            r["n_s"] = t.argmin_n_s;
            r["avg_age"] = t.min_age;
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

// Age against codeword length at a fixed lambda, one curve per (k_s, delta).
std::vector<Record> figure_codeword_curves(const Params& p, const std::string& fig, Discipline d, double lam) {
    std::vector<Record> rows;
    for (std::int64_t ks : p.ks_list) {
        const std::int64_t kp = p.total_symbols / ks;
        for (double delta : p.deltas) {
            const SweepTable t = sweep_codeword_length(ks, kp, delta, lam, d, ks, 3 * ks);
            for (const auto& row : t.rows) {
                Record r = figure_inputs(p, fig);
                r["discipline"] = to_string(d);
                r["delta"] = delta;
                r["k_s"] = ks;
                r["k_p"] = kp;
                r["lambda"] = lam;
                r["n_s"] = row.n_s;
                r["eps_p"] = row.eps_p;
                r["avg_age"] = row.avg_age;
                r["is_argmin"] = row.n_s == t.argmin_n_s;
                rows.push_back(std::move(r));
            }
        }
    }
    return rows;
}

// All four scheme x discipline curves against lambda, optionally with simulated points.
std::vector<Record> figure_all_curves(const Params& p, std::ostream& err, int& status) {
    const std::int64_t total = p.total_symbols;
    const std::int64_t ks = p.fr_ks;
    const std::int64_t kp = total / ks;
    const auto grid = log_grid(1e-3, 10.0, p.points);
    const char* curves[] = {"iir_blocking", "iir_preemptive", "fr_blocking", "fr_preemptive"};

    std::vector<Record> rows;
    std::vector<SimConfig> configs;
    std::vector<std::pair<std::size_t, std::string>> cells;
    const ErasureChannel ch(p.delta);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double lam = grid[i];
        Record r = figure_inputs(p, "8");
        r["delta"] = p.delta;
        r["k_s"] = ks;
        r["k_p"] = kp;
        r["n_min"] = ks;
        r["n_max"] = 10 * ks;
        r["lambda"] = lam;
        const SweepTable fb = sweep_codeword_length(ks, kp, p.delta, lam, Discipline::Blocking, ks, 10 * ks);
        const SweepTable fp = sweep_codeword_length(ks, kp, p.delta, lam, Discipline::Preemptive, ks, 10 * ks);
        r["iir_blocking"] = age_blocking_iir(total, p.delta, lam).avg_age;
        r["iir_preemptive"] = age_or_inf([&] { return age_preemptive_iir(total, p.delta, lam).avg_age; });
        r["fr_blocking"] = fb.min_age;
        r["fr_n_s_blocking"] = fb.argmin_n_s;
        r["fr_preemptive"] = fp.min_age;
        r["fr_n_s_preemptive"] = fp.argmin_n_s;
        rows.push_back(std::move(r));

        if (p.sim_deliveries == 0) continue;
        for (const char* curve : curves) {
            const std::string name = curve;
            const bool blocking = name.ends_with("blocking");
            const double age = rows.back()[name].get<double>();
            if (!std::isfinite(age)) continue;
            const ServiceDistribution law =
                name.starts_with("iir")
                    ? service_distribution(HarqScheme::iir(total), ch)
                    : service_distribution(
                          HarqScheme::fr(ks, blocking ? fb.argmin_n_s : fp.argmin_n_s, kp), ch);
            // Skip cells that need more than ~1e7 arrivals; preemptive HARQ starves at large lambda.
            const double rate = blocking ? age_blocking(law, lam).effective_rate : 1.0 / age;
            if (lam / rate * static_cast<double>(p.sim_deliveries) > 1e7) continue;
            SimConfig c;
            c.discipline = blocking ? Discipline::Blocking : Discipline::Preemptive;
            c.lam = lam;
            c.service = law;
            c.deliveries = p.sim_deliveries;
            c.warmup = std::min<std::uint64_t>(1000, p.sim_deliveries / 10);
            c.seed = p.seed + configs.size();
            configs.push_back(std::move(c));
            cells.emplace_back(i, name);
        }
    }
    if (p.sim_deliveries == 0) return rows;

    for (auto& r : rows) {
        for (const char* curve : curves) {
            r[std::string("sim_") + curve] = nullptr;
            r[std::string("sim_") + curve + "_stderr"] = nullptr;
        }
        r["sim_deliveries"] = p.sim_deliveries;
    }
    if (configs.empty()) return rows;
    const auto outcomes = batch_run(configs, p.workers);
    for (std::size_t j = 0; j < outcomes.size(); ++j) {
        const auto& [row, name] = cells[j];
        if (!outcomes[j].ok()) {
            err << "error: figure 8 simulation " << name << " at lambda=" << num(configs[j].lam)
                << " failed: " << outcomes[j].error << "\n";
            status = 1;
            continue;
        }
        rows[row]["sim_" + name] = outcomes[j].result->avg_age;
        rows[row]["sim_" + name + "_stderr"] = outcomes[j].result->stderr_age;
    }
    return rows;
}

int cmd_figures(const Params& p, std::ostream& out, std::ostream& err) {
    if (p.out_dir.empty()) bad("out-dir is required for figures");
    check_delta(p.delta);
    for (double d : p.deltas) check_delta(d, "deltas");
    if (p.total_symbols < 1) bad("total-symbols must be at least 1");
    if (p.points < 2) bad("points must be at least 2");
    if (p.ks_list.empty()) bad("ks-list must not be empty");
    for (std::int64_t ks : p.ks_list) {
        if (ks < 1 || p.total_symbols % ks != 0) {
            bad("ks-list: k_s=" + std::to_string(ks) + " does not divide K=" + std::to_string(p.total_symbols));
        }
    }
    if (p.fr_ks < 1 || p.total_symbols % p.fr_ks != 0) {
        bad("fr-ks: k_s=" + std::to_string(p.fr_ks) + " does not divide K=" + std::to_string(p.total_symbols));
    }

    std::filesystem::create_directories(p.out_dir);
    int status = 0;
    auto wants = [&](const char* f) { return p.figure == "all" || p.figure == f; };
    auto save = [&](const std::string& name, const std::vector<Record>& rows) {
        const auto path = (std::filesystem::path(p.out_dir) / (name + "." + p.format)).string();
        write_text(render(rows, p.format), path, out);
        out << "wrote " << path << " (" << rows.size() << " rows)\n";
    };
    if (wants("4")) save("fig4", figure_rate_curves(p, "4", Discipline::Preemptive, 1e-4, 1e-1));
    if (wants("5")) save("fig5", figure_codeword_curves(p, "5", Discipline::Preemptive, 0.0066));
    if (wants("6")) save("fig6", figure_rate_curves(p, "6", Discipline::Blocking, 1e-3, 10.0));
    if (wants("7")) save("fig7", figure_codeword_curves(p, "7", Discipline::Blocking, 1.0));
    if (wants("8")) save("fig8", figure_all_curves(p, err, status));
    return status;
}

void add_output_options(CLI::App* sub, Params& p) {
    sub->add_option("--format", p.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", p.seed, "Base seed; cell i uses seed + i");
    sub->add_option("--delta", p.delta, "Symbol erasure probability");
}

void add_model_options(CLI::App* sub, Params& p) {
    add_output_options(sub, p);
    sub->add_option("--discipline", p.discipline, "Queue discipline")->check(CLI::IsMember({"blocking", "preemptive"}));
    sub->add_option("--scheme", p.scheme, "iir, fr, or dist:<exponential|deterministic|gamma|hyperexponential|negbinomial>");
    sub->add_option("--ks", p.ks, "Information symbols per packet (successes for dist:negbinomial)");
    sub->add_option("--ns", p.ns, "FR codeword length");
    sub->add_option("--kp", p.kp, "FR packets per update");
    sub->add_option("--lambda", p.lambda, "Arrival rate(s)")->delimiter(',');
    sub->add_option("--deliveries", p.deliveries, "Deliveries per simulation, warmup included");
    sub->add_option("--warmup", p.warmup, "Deliveries discarded before measuring");
    sub->add_option("--out", p.out, "Output file (default stdout)");
    sub->add_option("--mu", p.mu, "Rate of dist:exponential");
    sub->add_option("--duration", p.duration, "Value of dist:deterministic");
    sub->add_option("--shape", p.shape, "Shape of dist:gamma");
    sub->add_option("--scale", p.scale, "Scale of dist:gamma");
    sub->add_option("--weights", p.weights, "Branch weights of dist:hyperexponential")->delimiter(',');
    sub->add_option("--rates", p.rates, "Branch rates of dist:hyperexponential")->delimiter(',');
    sub->add_option("--q", p.q, "Success probability of dist:negbinomial");
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string to_csv(const std::vector<Record>& rows) {
    if (rows.empty()) return "";
    auto cell = [](const Record& v) -> std::string {
        if (v.is_null()) return "";
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number_float()) return format_double(v.get<double>());
        if (v.is_number()) return v.dump();
        std::string s = v.is_string() ? v.get<std::string>() : v.dump();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string quoted = "\"";
        for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        return quoted + "\"";
    };
    std::string text;
    bool first = true;
    for (const auto& item : rows.front().items()) {
        text += (first ? "" : ",") + item.key();
        first = false;
    }
    text += "\n";
    for (const auto& r : rows) {
        first = true;
        for (const auto& item : rows.front().items()) {
            text += (first ? "" : ",") + (r.contains(item.key()) ? cell(r[item.key()]) : std::string());
            first = false;
        }
        text += "\n";
    }
    return text;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Average age of information for M/G/1/1 queues and HARQ erasure links", "aoi"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.set_config("--config", "", "INI file, one [section] per subcommand; flags override it");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);

    // One parameter set per subcommand, so a config section never leaks into another command.
    Params pa, ps, po, pw, pc, pf;
    auto* analyze = app.add_subcommand("analyze", "Closed-form average age at each lambda");
    auto* simulate = app.add_subcommand("simulate", "Event-driven simulation with the matching closed form and z-scores");
    auto* optimize = app.add_subcommand("optimize", "Age-minimising arrival rate");
    auto* sweep = app.add_subcommand("sweep", "FR age over a range of codeword lengths");
    auto* compare = app.add_subcommand("compare", "Disciplines or schemes side by side over lambda");
    auto* figures = app.add_subcommand("figures", "Data behind the age-versus-rate and age-versus-codeword figures");

    for (auto* sub : {analyze, simulate, optimize, sweep, compare, figures}) sub->fallthrough();
    add_model_options(analyze, pa);
    add_model_options(simulate, ps);
    add_model_options(optimize, po);
    add_model_options(sweep, pw);
    add_model_options(compare, pc);
    simulate->add_flag("--symbol-level", ps.symbol_level, "Simulate HARQ service symbol by symbol");
    simulate->add_option("--max-events", ps.max_events, "Abort after this many events without a delivery");
    simulate->add_option("--workers", ps.workers, "Worker threads (0: hardware)");
    for (auto [sub, p] : {std::pair{sweep, &pw}, std::pair{compare, &pc}}) {
        sub->add_option("--n-min", p->n_min, "Smallest codeword length (default ks)");
        sub->add_option("--n-max", p->n_max, "Largest codeword length (default 10 ks)");
    }
    compare->add_option("--what", pc.what, "What to put side by side")->check(CLI::IsMember({"disciplines", "schemes"}));

    add_output_options(figures, pf);
    figures->add_option("--figure", pf.figure, "Which figure")->check(CLI::IsMember({"4", "5", "6", "7", "8", "all"}));
    figures->add_option("--out-dir", pf.out_dir, "Directory for figN.csv / figN.json");
    figures->add_option("--ks-list", pf.ks_list, "Symbols per packet for figures 4-7")->delimiter(',');
    figures->add_option("--total-symbols", pf.total_symbols, "Information symbols per update (K)");
    figures->add_option("--fr-ks", pf.fr_ks, "FR symbols per packet for figure 8");
    figures->add_option("--deltas", pf.deltas, "Erasure rates for figures 5 and 7")->delimiter(',');
    figures->add_option("--points", pf.points, "Lambda grid points");
    figures->add_option("--sim-deliveries", pf.sim_deliveries, "Add simulated points to figure 8 (0: none)");
    figures->add_option("--workers", pf.workers, "Worker threads (0: hardware)");

    std::vector<const char*> argv{"aoi"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*analyze) return cmd_analyze(pa, out);
        if (*simulate) return cmd_simulate(ps, out, err);
        if (*optimize) return cmd_optimize(po, out);
        if (*sweep) return cmd_sweep(pw, out);
        if (*compare) return cmd_compare(pc, out);
        return cmd_figures(pf, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace aoi::cli
