#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aoi/distributions.hpp"

namespace aoi {

enum class Discipline { Blocking, Preemptive };

std::string to_string(Discipline d);
Discipline parse_discipline(const std::string& text);

/// Closed-form average age at one arrival rate.
struct AgeReport {
    double avg_age = 0.0;
    /// Long-run rate of delivered updates.
    double effective_rate = 0.0;
    /// rho/(rho+1) for the blocking system; absent under preemption.
    std::optional<double> utilization_beta;
    /// Which closed form produced the numbers.
    std::string notes;
};

enum class OptimumMethod { ClosedForm, RootSolve, QuadraticApprox, Sweep };

std::string to_string(OptimumMethod m);

struct OptimumReport {
    /// Minimising arrival rate; empty when the optimum is approached as the rate grows without bound.
    std::optional<double> optimal_rate;
    double optimal_age = 0.0;
    std::optional<double> optimal_beta;
    /// Small-rate quadratic approximation of the optimal rate (preemptive HARQ only).
    std::optional<double> approx_rate;
    std::optional<double> bound_lower;
    OptimumMethod method = OptimumMethod::ClosedForm;
    std::string notes;

    bool unbounded() const { return !optimal_rate.has_value(); }
};

// Generic service laws.

/// Average age of the blocking M/G/1/1 system.
AgeReport age_blocking(const ServiceDistribution& dist, double lam);
/// Arrival rate minimising blocking age.
OptimumReport optimal_blocking(const ServiceDistribution& dist);
/// Average age of the preemptive M/G/1/1 system, 1/(lam P_lam).
AgeReport age_preemptive(const ServiceDistribution& dist, double lam);
/// Mean system time of a delivered update under preemption.
double preemptive_system_time_mean(const ServiceDistribution& dist, double lam);

struct Moments {
    double first = 0.0;
    double second = 0.0;
};

/// First two moments of the interdeparture time under preemption.
Moments preemptive_interdeparture_moments(const ServiceDistribution& dist, double lam);

// HARQ specialisations; delta is the symbol erasure probability.

AgeReport age_blocking_iir(std::int64_t k_s, double delta, double lam);
OptimumReport min_age_blocking_iir(std::int64_t k_s, double delta);
AgeReport age_blocking_fr(std::int64_t k_s, std::int64_t n_s, std::int64_t k_p, double delta, double lam);
OptimumReport min_age_blocking_fr(std::int64_t k_s, std::int64_t n_s, std::int64_t k_p, double delta);

AgeReport age_preemptive_iir(std::int64_t k_s, double delta, double lam);
OptimumReport optimal_preemptive_iir(std::int64_t k_s, double delta);
AgeReport age_preemptive_fr(std::int64_t k_s, std::int64_t n_s, std::int64_t k_p, double delta, double lam);
OptimumReport optimal_preemptive_fr(std::int64_t k_s, std::int64_t n_s, std::int64_t k_p, double delta);

/// (1/lam) (1 + lam/(1-delta))^k_s, which lies below the preemptive IIR age at every lam.
double preemptive_iir_lower_bound(std::int64_t k_s, double delta, double lam);
/// (1/lam) (1 + lam n_s/(1-eps_p))^k_p, which lies below the preemptive FR age at every lam.
double preemptive_fr_lower_bound(std::int64_t n_s, std::int64_t k_p, double eps_p, double lam);

/// Bisection root of exp(lam * scale) (k * scale * lam - 1) = -loss on (0, 1/(k*scale)].
double solve_preemptive_stationarity(std::int64_t k, double scale, double loss);

struct SweepRow {
    std::int64_t n_s = 0;
    double eps_p = 0.0;
    /// +inf when the age is not representable (eps_p rounds to one or overflow).
    double avg_age = 0.0;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    std::int64_t argmin_n_s = 0;
    double min_age = 0.0;
};

/// Evaluates the FR age for every codeword length in [n_min, n_max].
/// Ties go to the smaller codeword.
SweepTable sweep_codeword_length(std::int64_t k_s, std::int64_t k_p, double delta, double lam,
                                 Discipline discipline, std::int64_t n_min, std::int64_t n_max);

}  // namespace aoi
