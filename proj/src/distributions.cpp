#include "aoi/distributions.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace aoi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void require_probability(double q, const char* who) {
    require(std::isfinite(q) && q > 0.0 && q <= 1.0,
            std::string(who) + ": success probability q must lie in (0, 1]");
}

// log of the negative-binomial transform (q e^{-s} / (1 - (1-q) e^{-s}))^k at s >= 0.
double log_negbin_laplace(std::int64_t k, double q, double s) {
    if (s == 0.0) return 0.0;
    const double fail = 1.0 - q;
    return static_cast<double>(k) * (std::log(q) - s - std::log1p(-fail * std::exp(-s)));
}

// d/ds log of the negative-binomial transform: -k / (1 - (1-q) e^{-s}).
double dlog_negbin_laplace(std::int64_t k, double q, double s) {
    const double fail = 1.0 - q;
    return -static_cast<double>(k) / (1.0 - fail * std::exp(-s));
}

}  // namespace

Deterministic::Deterministic(double value) : value_(value) {
    require(positive_finite(value), "Deterministic: value must be positive");
}

Exponential::Exponential(double rate) : rate_(rate) {
    require(positive_finite(rate), "Exponential: rate must be positive");
}

Gamma::Gamma(double shape, double scale) : shape_(shape), scale_(scale) {
    require(positive_finite(shape), "Gamma: shape must be positive");
    require(positive_finite(scale), "Gamma: scale must be positive");
}

HyperExponential::HyperExponential(std::vector<double> weights, std::vector<double> rates)
    : weights_(std::move(weights)), rates_(std::move(rates)) {
    require(!weights_.empty(), "HyperExponential: at least one branch required");
    require(weights_.size() == rates_.size(),
            "HyperExponential: weights and rates must have equal length");
    for (double w : weights_) require(std::isfinite(w) && w >= 0.0, "HyperExponential: weights must be nonnegative");
    for (double r : rates_) require(positive_finite(r), "HyperExponential: rates must be positive");
    const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    require(std::abs(total - 1.0) <= 1e-12, "HyperExponential: weights must sum to 1");
}

NegBinomial::NegBinomial(std::int64_t successes, double q) : successes_(successes), q_(q) {
    require(successes >= 1, "NegBinomial: successes must be a positive integer");
    require_probability(q, "NegBinomial");
}

ScaledNegBinomial::ScaledNegBinomial(std::int64_t scale, std::int64_t successes, double q)
    : scale_(scale), successes_(successes), q_(q) {
    require(scale >= 1, "ScaledNegBinomial: scale must be a positive integer");
    require(successes >= 1, "ScaledNegBinomial: successes must be a positive integer");
    require_probability(q, "ScaledNegBinomial");
}

std::int64_t sample_negbin_trials(std::int64_t successes, double q, Rng& rng, NegBinSampler strategy) {
    if (q >= 1.0) return successes;
    if (strategy == NegBinSampler::Automatic) {
        strategy = q >= 0.5 ? NegBinSampler::BernoulliCounting : NegBinSampler::GeometricSum;
    }
    std::int64_t trials = 0;
    if (strategy == NegBinSampler::BernoulliCounting) {
        std::bernoulli_distribution trial(q);
        for (std::int64_t got = 0; got < successes; ++trials) {
            if (trial(rng)) ++got;
        }
        return trials;
    }
    std::geometric_distribution<std::int64_t> failures(q);
    trials = successes;
    for (std::int64_t i = 0; i < successes; ++i) trials += failures(rng);
    return trials;
}

std::string ServiceDistribution::name() const {
    return std::visit(overloaded{
                          [](const Deterministic&) { return std::string("deterministic"); },
                          [](const Exponential&) { return std::string("exponential"); },
                          [](const Gamma&) { return std::string("gamma"); },
                          [](const HyperExponential&) { return std::string("hyperexponential"); },
                          [](const NegBinomial&) { return std::string("negbinomial"); },
                          [](const ScaledNegBinomial&) { return std::string("scaled_negbinomial"); },
                      },
                      law_);
}

std::string ServiceDistribution::describe() const {
    std::ostringstream out;
    out.precision(17);
    std::visit(overloaded{
                   [&](const Deterministic& d) { out << "deterministic(value=" << d.value() << ")"; },
                   [&](const Exponential& d) { out << "exponential(rate=" << d.rate() << ")"; },
                   [&](const Gamma& d) { out << "gamma(shape=" << d.shape() << ",scale=" << d.scale() << ")"; },
                   [&](const HyperExponential& d) {
                       out << "hyperexponential(weights=";
                       for (std::size_t i = 0; i < d.weights().size(); ++i) out << (i ? ";" : "") << d.weights()[i];
                       out << ",rates=";
                       for (std::size_t i = 0; i < d.rates().size(); ++i) out << (i ? ";" : "") << d.rates()[i];
                       out << ")";
                   },
                   [&](const NegBinomial& d) { out << "negbinomial(k=" << d.successes() << ",q=" << d.q() << ")"; },
                   [&](const ScaledNegBinomial& d) {
                       out << "scaled_negbinomial(n=" << d.scale() << ",k=" << d.successes() << ",q=" << d.q()
                           << ")";
                   },
               },
               law_);
    return out.str();
}

double ServiceDistribution::mean() const {
    return std::visit(overloaded{
                          [](const Deterministic& d) { return d.value(); },
                          [](const Exponential& d) { return 1.0 / d.rate(); },
                          [](const Gamma& d) { return d.shape() * d.scale(); },
                          [](const HyperExponential& d) {
                              double m = 0.0;
                              for (std::size_t i = 0; i < d.rates().size(); ++i) m += d.weights()[i] / d.rates()[i];
                              return m;
                          },
                          [](const NegBinomial& d) { return static_cast<double>(d.successes()) / d.q(); },
                          [](const ScaledNegBinomial& d) {
                              return static_cast<double>(d.scale()) * static_cast<double>(d.successes()) / d.q();
                          },
                      },
                      law_);
}

double ServiceDistribution::variance() const {
    return std::visit(overloaded{
                          [](const Deterministic&) { return 0.0; },
                          [](const Exponential& d) { return 1.0 / (d.rate() * d.rate()); },
                          [](const Gamma& d) { return d.shape() * d.scale() * d.scale(); },
                          [](const HyperExponential& d) {
                              double m1 = 0.0;
                              double m2 = 0.0;
                              for (std::size_t i = 0; i < d.rates().size(); ++i) {
                                  m1 += d.weights()[i] / d.rates()[i];
                                  m2 += 2.0 * d.weights()[i] / (d.rates()[i] * d.rates()[i]);
                              }
                              return m2 - m1 * m1;
                          },
                          [](const NegBinomial& d) {
                              return static_cast<double>(d.successes()) * (1.0 - d.q()) / (d.q() * d.q());
                          },
                          [](const ScaledNegBinomial& d) {
                              const double n = static_cast<double>(d.scale());
                              return n * n * static_cast<double>(d.successes()) * (1.0 - d.q()) / (d.q() * d.q());
                          },
                      },
                      law_);
}

double ServiceDistribution::scv() const {
    // Closed forms avoid the cancellation in variance()/mean()^2 for the discrete laws.
    if (const auto* nb = std::get_if<NegBinomial>(&law_)) {
        return (1.0 - nb->q()) / static_cast<double>(nb->successes());
    }
    if (const auto* snb = std::get_if<ScaledNegBinomial>(&law_)) {
        return (1.0 - snb->q()) / static_cast<double>(snb->successes());
    }
    const double m = mean();
    return variance() / (m * m);
}

double ServiceDistribution::log_laplace(double lam) const {
    if (!(lam >= 0.0)) throw std::invalid_argument("laplace: lam must be nonnegative");
    if (lam == 0.0) return 0.0;
    return std::visit(overloaded{
                          [&](const Deterministic& d) { return -lam * d.value(); },
                          [&](const Exponential& d) { return std::log(d.rate()) - std::log(d.rate() + lam); },
                          [&](const Gamma& d) { return -d.shape() * std::log1p(lam * d.scale()); },
                          [&](const HyperExponential& d) {
                              double p = 0.0;
                              for (std::size_t i = 0; i < d.rates().size(); ++i) {
                                  p += d.weights()[i] * d.rates()[i] / (d.rates()[i] + lam);
                              }
                              return std::log(p);
                          },
                          [&](const NegBinomial& d) { return log_negbin_laplace(d.successes(), d.q(), lam); },
                          [&](const ScaledNegBinomial& d) {
                              return log_negbin_laplace(d.successes(), d.q(), lam * static_cast<double>(d.scale()));
                          },
                      },
                      law_);
}

double ServiceDistribution::laplace(double lam) const {
    if (!(lam >= 0.0)) throw std::invalid_argument("laplace: lam must be nonnegative");
    if (lam == 0.0) return 1.0;
    if (const auto* d = std::get_if<Exponential>(&law_)) return d->rate() / (d->rate() + lam);
    return std::exp(log_laplace(lam));
}

double ServiceDistribution::laplace_deriv(double lam) const {
    if (!(lam > 0.0)) throw std::invalid_argument("laplace_deriv: lam must be positive");
    return std::visit(overloaded{
                          [&](const Deterministic& d) { return -d.value() * std::exp(-lam * d.value()); },
                          [&](const Exponential& d) {
                              const double s = d.rate() + lam;
                              return -d.rate() / (s * s);
                          },
                          [&](const Gamma& d) {
                              return -d.shape() * d.scale() * std::pow(1.0 + lam * d.scale(), -d.shape() - 1.0);
                          },
                          [&](const HyperExponential& d) {
                              double g = 0.0;
                              for (std::size_t i = 0; i < d.rates().size(); ++i) {
                                  const double s = d.rates()[i] + lam;
                                  g -= d.weights()[i] * d.rates()[i] / (s * s);
                              }
                              return g;
                          },
                          [&](const NegBinomial& d) {
                              return laplace(lam) * dlog_negbin_laplace(d.successes(), d.q(), lam);
                          },
                          [&](const ScaledNegBinomial& d) {
                              const double n = static_cast<double>(d.scale());
                              return laplace(lam) * n * dlog_negbin_laplace(d.successes(), d.q(), lam * n);
                          },
                      },
                      law_);
}

double ServiceDistribution::sample(Rng& rng) const {
    return std::visit(overloaded{
                          [&](const Deterministic& d) { return d.value(); },
                          [&](const Exponential& d) { return std::exponential_distribution<double>(d.rate())(rng); },
                          [&](const Gamma& d) { return std::gamma_distribution<double>(d.shape(), d.scale())(rng); },
                          [&](const HyperExponential& d) {
                              std::discrete_distribution<std::size_t> branch(d.weights().begin(), d.weights().end());
                              const double rate = d.rates()[branch(rng)];
                              return std::exponential_distribution<double>(rate)(rng);
                          },
                          [&](const NegBinomial& d) {
                              return static_cast<double>(sample_negbin_trials(d.successes(), d.q(), rng));
                          },
                          [&](const ScaledNegBinomial& d) {
                              return static_cast<double>(d.scale()) *
                                     static_cast<double>(sample_negbin_trials(d.successes(), d.q(), rng));
                          },
                      },
                      law_);
}

bool ServiceDistribution::is_degenerate() const {
    return std::visit(overloaded{
                          [](const Deterministic&) { return true; },
                          [](const NegBinomial& d) { return d.q() >= 1.0; },
                          [](const ScaledNegBinomial& d) { return d.q() >= 1.0; },
                          [](const auto&) { return false; },
                      },
                      law_);
}

}  // namespace aoi
