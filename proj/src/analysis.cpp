#include "aoi/analysis.hpp"

#include <cfloat>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aoi/harq.hpp"

namespace aoi {

namespace {

const double kLogMax = std::log(DBL_MAX);

void require_rate(double lam) {
    if (!(std::isfinite(lam) && lam > 0.0)) throw std::invalid_argument("lambda must be a positive finite rate");
}

void require_symbols(std::int64_t k_s) {
    if (k_s < 1) throw std::invalid_argument("k_s must be a positive integer");
}

void require_delta(double delta) { (void)ErasureChannel(delta); }

double checked_exp(double log_value, const char* what) {
    if (log_value > kLogMax) {
        throw std::overflow_error(std::string(what) + ": average age exceeds the representable range");
    }
    return std::exp(log_value);
}

// Packet erasure and success probabilities; both are needed at full relative accuracy.
struct PacketOdds {
    double loss;
    double keep;
};

PacketOdds fr_odds(std::int64_t k_s, std::int64_t n_s, std::int64_t k_p, double delta) {
    (void)HarqScheme::fr(k_s, n_s, k_p);
    require_delta(delta);
    const PacketOdds o{packet_erasure_prob(n_s, k_s, delta), packet_success_prob(n_s, k_s, delta)};
    if (!(o.keep > 0.0)) {
        throw std::domain_error("packet success probability underflows to 0; service time is unbounded");
    }
    return o;
}

// k * log((e^{s} - loss)/keep), the log of 1/P for a (scaled) negative binomial at s = lam*scale.
double log_inverse_negbin_laplace(std::int64_t k, PacketOdds o, double s) {
    return static_cast<double>(k) * (s + std::log1p(-o.loss * std::exp(-s)) - std::log(o.keep));
}

// Positive root of (1 + x)(k x - 1) = -loss, written without cancellation.
double quadratic_root(std::int64_t k, PacketOdds o) {
    const double kk = static_cast<double>(k);
    return 2.0 * o.keep / (std::sqrt((kk - 1.0) * (kk - 1.0) + 4.0 * kk * o.keep) + kk - 1.0);
}

// Root of e^{x}(k x - 1) + 1 = keep on (0, 1/k], with x = lam * scale.
double solve_stationarity(std::int64_t k, double scale, PacketOdds o) {
    const double kk = static_cast<double>(k);
    const double hi_start = 1.0 / (kk * scale);
    if (o.loss == 0.0) return hi_start;
    // expm1 form of the left side keeps precision when keep is tiny and the root sits near zero.
    auto f = [&](double lam) {
        const double x = lam * scale;
        return std::expm1(x) * (kk * x - 1.0) + kk * x - o.keep;
    };
    double lo = 0.0;
    double hi = hi_start;
    for (int it = 0; it < 2000; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo + 0.5 * (hi - lo);
}

double fr_bound(std::int64_t n_s, std::int64_t k_p, double keep, double lam) {
    return std::exp(static_cast<double>(k_p) * std::log1p(lam * static_cast<double>(n_s) / keep) - std::log(lam));
}

}  // namespace

std::string to_string(Discipline d) { return d == Discipline::Blocking ? "blocking" : "preemptive"; }

Discipline parse_discipline(const std::string& text) {
    if (text == "blocking") return Discipline::Blocking;
    if (text == "preemptive") return Discipline::Preemptive;
    throw std::invalid_argument("discipline must be 'blocking' or 'preemptive', got '" + text + "'");
}

std::string to_string(OptimumMethod m) {
    switch (m) {
        case OptimumMethod::ClosedForm: return "closed_form";
        case OptimumMethod::RootSolve: return "root_solve";
        case OptimumMethod::QuadraticApprox: return "quadratic_approx";
        case OptimumMethod::Sweep: return "sweep";
    }
    return "unknown";
}

AgeReport age_blocking(const ServiceDistribution& dist, double lam) {
    require_rate(lam);
    const double mean = dist.mean();
    const double scv = dist.scv();
    const double rho = lam * mean;
    const double beta = rho / (rho + 1.0);
    AgeReport r;
    r.avg_age = mean * (0.5 * beta * (scv + 1.0) + 1.0 / beta);
    r.effective_rate = 1.0 / (1.0 / lam + mean);
    r.utilization_beta = beta;
    r.notes = "blocking M/G/1/1, general service";
    return r;
}

OptimumReport optimal_blocking(const ServiceDistribution& dist) {
    const double mean = dist.mean();
    const double scv = dist.scv();
    OptimumReport r;
    r.method = OptimumMethod::ClosedForm;
    if (scv > 1.0) {
        const double beta = std::sqrt(2.0 / (scv + 1.0));
        r.optimal_beta = beta;
        r.optimal_rate = beta / ((1.0 - beta) * mean);
        r.optimal_age = mean * std::sqrt(2.0 * (scv + 1.0));
        r.notes = "blocking optimum, scv > 1: interior optimal rate";
    } else {
        r.optimal_beta = 1.0;
        r.optimal_age = mean * (0.5 * (scv + 1.0) + 1.0);
        r.notes = "blocking optimum, scv <= 1: age decreases in lambda, limit as lambda grows";
    }
    return r;
}

AgeReport age_preemptive(const ServiceDistribution& dist, double lam) {
    require_rate(lam);
    const double log_p = dist.log_laplace(lam);
    AgeReport r;
    r.avg_age = checked_exp(-std::log(lam) - log_p, "age_preemptive");
    r.effective_rate = lam * std::exp(log_p);
    r.notes = "preemptive M/G/1/1, general service";
    return r;
}

double preemptive_system_time_mean(const ServiceDistribution& dist, double lam) {
    require_rate(lam);
    return -dist.laplace_deriv(lam) / dist.laplace(lam);
}

Moments preemptive_interdeparture_moments(const ServiceDistribution& dist, double lam) {
    require_rate(lam);
    const double p = dist.laplace(lam);
    const double dp = dist.laplace_deriv(lam);
    const double lp = lam * p;
    return {1.0 / lp, 2.0 / (lp * lp) * (1.0 + lam * dp)};
}

AgeReport age_blocking_iir(std::int64_t k_s, double delta, double lam) {
    require_symbols(k_s);
    require_delta(delta);
    require_rate(lam);
    const double k = static_cast<double>(k_s);
    const double keep = 1.0 - delta;
    AgeReport r;
    r.avg_age = 1.0 / lam + k / keep + lam * k * (k + delta) / (2.0 * keep * (lam * k + keep));
    r.effective_rate = 1.0 / (1.0 / lam + k / keep);
    r.utilization_beta = lam * k / (lam * k + keep);
    r.notes = "blocking IIR-HARQ";
    return r;
}

OptimumReport min_age_blocking_iir(std::int64_t k_s, double delta) {
    require_symbols(k_s);
    require_delta(delta);
    OptimumReport r;
    r.optimal_age = (3.0 * static_cast<double>(k_s) + delta) / (2.0 * (1.0 - delta));
    r.optimal_beta = 1.0;
    r.method = OptimumMethod::ClosedForm;
    r.notes = "blocking IIR-HARQ, limit as lambda grows";
    return r;
}

AgeReport age_blocking_fr(std::int64_t k_s, std::int64_t n_s, std::int64_t k_p, double delta, double lam) {
    const auto [eps, keep] = fr_odds(k_s, n_s, k_p, delta);
    require_rate(lam);
    const double n = static_cast<double>(n_s);
    const double kp = static_cast<double>(k_p);
    AgeReport r;
    r.avg_age = 1.0 / lam + n * kp / keep + lam * n * n * kp * (kp + eps) / (2.0 * keep * (lam * n * kp + keep));
    r.effective_rate = 1.0 / (1.0 / lam + n * kp / keep);
    r.utilization_beta = lam * n * kp / (lam * n * kp + keep);
    r.notes = "blocking FR-HARQ";
    return r;
}

OptimumReport min_age_blocking_fr(std::int64_t k_s, std::int64_t n_s, std::int64_t k_p, double delta) {
    const auto [eps, keep] = fr_odds(k_s, n_s, k_p, delta);
    OptimumReport r;
    r.optimal_age = static_cast<double>(n_s) * (3.0 * static_cast<double>(k_p) + eps) / (2.0 * keep);
    r.optimal_beta = 1.0;
    r.method = OptimumMethod::ClosedForm;
    r.notes = "blocking FR-HARQ, limit as lambda grows";
    return r;
}

AgeReport age_preemptive_iir(std::int64_t k_s, double delta, double lam) {
    require_symbols(k_s);
    require_delta(delta);
    require_rate(lam);
    const double log_inv_p = log_inverse_negbin_laplace(k_s, {delta, 1.0 - delta}, lam);
    AgeReport r;
    r.avg_age = checked_exp(log_inv_p - std::log(lam), "age_preemptive_iir");
    r.effective_rate = lam * std::exp(-log_inv_p);
    r.notes = "preemptive IIR-HARQ";
    return r;
}

AgeReport age_preemptive_fr(std::int64_t k_s, std::int64_t n_s, std::int64_t k_p, double delta, double lam) {
    const PacketOdds odds = fr_odds(k_s, n_s, k_p, delta);
    require_rate(lam);
    const double log_inv_p = log_inverse_negbin_laplace(k_p, odds, lam * static_cast<double>(n_s));
    AgeReport r;
    r.avg_age = checked_exp(log_inv_p - std::log(lam), "age_preemptive_fr");
    r.effective_rate = lam * std::exp(-log_inv_p);
    r.notes = "preemptive FR-HARQ";
    return r;
}

double preemptive_iir_lower_bound(std::int64_t k_s, double delta, double lam) {
    return std::exp(static_cast<double>(k_s) * std::log1p(lam / (1.0 - delta)) - std::log(lam));
}

double preemptive_fr_lower_bound(std::int64_t n_s, std::int64_t k_p, double eps_p, double lam) {
    return fr_bound(n_s, k_p, 1.0 - eps_p, lam);
}

double solve_preemptive_stationarity(std::int64_t k, double scale, double loss) {
    if (k < 1 || !(scale > 0.0)) throw std::invalid_argument("stationarity: k and scale must be positive");
    if (!(loss >= 0.0 && loss < 1.0)) throw std::invalid_argument("stationarity: loss must lie in [0, 1)");
    return solve_stationarity(k, scale, {loss, 1.0 - loss});
}

OptimumReport optimal_preemptive_iir(std::int64_t k_s, double delta) {
    require_symbols(k_s);
    require_delta(delta);
    OptimumReport r;
    const PacketOdds odds{delta, 1.0 - delta};
    const double lam = solve_stationarity(k_s, 1.0, odds);
    r.optimal_rate = lam;
    r.optimal_age = age_preemptive_iir(k_s, delta, lam).avg_age;
    r.approx_rate = quadratic_root(k_s, odds);
    r.bound_lower = preemptive_iir_lower_bound(k_s, delta, *r.approx_rate);
    r.method = OptimumMethod::RootSolve;
    r.notes = "preemptive IIR-HARQ, bisection on the stationarity condition";
    return r;
}

OptimumReport optimal_preemptive_fr(std::int64_t k_s, std::int64_t n_s, std::int64_t k_p, double delta) {
    const PacketOdds odds = fr_odds(k_s, n_s, k_p, delta);
    const double n = static_cast<double>(n_s);
    OptimumReport r;
    const double lam = solve_stationarity(k_p, n, odds);
    r.optimal_rate = lam;
    r.optimal_age = age_preemptive_fr(k_s, n_s, k_p, delta, lam).avg_age;
    r.approx_rate = quadratic_root(k_p, odds) / n;
    r.bound_lower = fr_bound(n_s, k_p, odds.keep, *r.approx_rate);
    r.method = OptimumMethod::RootSolve;
    r.notes = "preemptive FR-HARQ, bisection on the stationarity condition";
    return r;
}

SweepTable sweep_codeword_length(std::int64_t k_s, std::int64_t k_p, double delta, double lam,
                                 Discipline discipline, std::int64_t n_min, std::int64_t n_max) {
    require_symbols(k_s);
    require_delta(delta);
    require_rate(lam);
    if (k_p < 1) throw std::invalid_argument("k_p must be a positive integer");
    if (n_min > n_max) throw std::invalid_argument("sweep: empty codeword-length range");
    if (n_min < k_s) throw std::invalid_argument("sweep: codeword length must be at least k_s");

    SweepTable table;
    table.rows.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    table.min_age = std::numeric_limits<double>::infinity();
    table.argmin_n_s = n_min;
    for (std::int64_t n = n_min; n <= n_max; ++n) {
        SweepRow row;
        row.n_s = n;
        row.eps_p = packet_erasure_prob(n, k_s, delta);
        try {
            row.avg_age = discipline == Discipline::Blocking ? age_blocking_fr(k_s, n, k_p, delta, lam).avg_age
                                                             : age_preemptive_fr(k_s, n, k_p, delta, lam).avg_age;
        } catch (const std::domain_error&) {
            row.avg_age = std::numeric_limits<double>::infinity();
        } catch (const std::overflow_error&) {
            row.avg_age = std::numeric_limits<double>::infinity();
        }
        if (row.avg_age < table.min_age) {
            table.min_age = row.avg_age;
            table.argmin_n_s = n;
        }
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace aoi
