#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace aoi {

/// Random engine used throughout the toolkit. Callers own and seed it.
using Rng = std::mt19937_64;

/// Point mass at `value` time units.
class Deterministic {
public:
    explicit Deterministic(double value);
    double value() const { return value_; }

private:
    double value_;
};

/// Exponential law with rate `rate` (mean 1/rate).
class Exponential {
public:
    explicit Exponential(double rate);
    double rate() const { return rate_; }

private:
    double rate_;
};

/// Gamma law parameterised by shape and scale (mean shape*scale).
class Gamma {
public:
    Gamma(double shape, double scale);
    double shape() const { return shape_; }
    double scale() const { return scale_; }

private:
    double shape_;
    double scale_;
};

/// Finite mixture of exponentials. Weights must sum to one.
class HyperExponential {
public:
    HyperExponential(std::vector<double> weights, std::vector<double> rates);
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& rates() const { return rates_; }

private:
    std::vector<double> weights_;
    std::vector<double> rates_;
};

/// Number of Bernoulli(q) trials needed for `successes` successes.
/// Support {k, k+1, ...}; one trial is one channel use.
class NegBinomial {
public:
    NegBinomial(std::int64_t successes, double q);
    std::int64_t successes() const { return successes_; }
    double q() const { return q_; }

private:
    std::int64_t successes_;
    double q_;
};

/// `scale` times a NegBinomial(successes, q) draw. Support {n*k, n*(k+1), ...}.
class ScaledNegBinomial {
public:
    ScaledNegBinomial(std::int64_t scale, std::int64_t successes, double q);
    std::int64_t scale() const { return scale_; }
    std::int64_t successes() const { return successes_; }
    double q() const { return q_; }

private:
    std::int64_t scale_;
    std::int64_t successes_;
    double q_;
};

/// Strategy for drawing negative-binomial variates.
enum class NegBinSampler {
    Automatic,          ///< Bernoulli counting for q >= 0.5, geometric sum otherwise.
    BernoulliCounting,  ///< Count trials one at a time until k successes.
    GeometricSum,       ///< k + sum of k geometric failure counts.
};

/// Draws the number of trials until `successes` successes with probability q.
std::int64_t sample_negbin_trials(std::int64_t successes, double q, Rng& rng,
                                  NegBinSampler strategy = NegBinSampler::Automatic);

/// Service-time law with exact moments and Laplace transform.
///
/// All quantities are in time units; discrete laws live on the same axis with
/// one channel use equal to one time unit. Objects are immutable once built.
class ServiceDistribution {
public:
    using Law = std::variant<Deterministic, Exponential, Gamma, HyperExponential,
                             NegBinomial, ScaledNegBinomial>;

    template <class T>
        requires std::is_constructible_v<Law, T>
    ServiceDistribution(T law) : law_(std::move(law)) {}  // NOLINT(google-explicit-constructor)

    const Law& law() const { return law_; }
    std::string name() const;
    std::string describe() const;

    double mean() const;
    double variance() const;
    /// Squared coefficient of variation Var(S)/E(S)^2.
    double scv() const;
    /// E(S^2).
    double second_moment() const { return variance() + mean() * mean(); }

    /// P_lam = E(exp(-lam S)) for lam >= 0.
    double laplace(double lam) const;
    /// log P_lam, finite even when P_lam underflows.
    double log_laplace(double lam) const;
    /// d P_lam / d lam for lam > 0 (analytic).
    double laplace_deriv(double lam) const;

    double sample(Rng& rng) const;

    /// True when the law is a point mass.
    bool is_degenerate() const;

private:
    Law law_;
};

}  // namespace aoi
