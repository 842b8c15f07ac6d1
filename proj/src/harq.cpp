#include "aoi/harq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace aoi {

HarqScheme HarqScheme::iir(std::int64_t k_s) {
    if (k_s < 1) throw std::invalid_argument("iir: k_s must be a positive integer");
    return HarqScheme(IirScheme{k_s});
}

HarqScheme HarqScheme::fr(std::int64_t k_s, std::int64_t n_s, std::int64_t k_p) {
    if (k_s < 1) throw std::invalid_argument("fr: k_s must be a positive integer");
    if (n_s < k_s) throw std::invalid_argument("fr: n_s must be at least k_s");
    if (k_p < 1) throw std::invalid_argument("fr: k_p must be a positive integer");
    return HarqScheme(FrScheme{k_s, n_s, k_p});
}

std::int64_t HarqScheme::symbols_per_packet() const {
    return std::visit([](const auto& s) { return s.symbols; }, scheme_);
}

std::int64_t HarqScheme::total_symbols() const {
    if (const auto* fr = std::get_if<FrScheme>(&scheme_)) return fr->packets * fr->symbols;
    return std::get<IirScheme>(scheme_).symbols;
}

std::string HarqScheme::describe() const {
    std::ostringstream out;
    if (const auto* fr = std::get_if<FrScheme>(&scheme_)) {
        out << "fr(k_s=" << fr->symbols << ",n_s=" << fr->codeword << ",k_p=" << fr->packets << ")";
    } else {
        out << "iir(k_s=" << std::get<IirScheme>(scheme_).symbols << ")";
    }
    return out.str();
}

ErasureChannel::ErasureChannel(double delta) : delta_(delta) {
    if (!(std::isfinite(delta) && delta >= 0.0 && delta < 1.0)) {
        throw std::invalid_argument("erasure channel: delta must lie in [0, 1)");
    }
}

namespace {

void require_code(std::int64_t n_s, std::int64_t k_s, double delta, const char* who) {
    if (k_s < 1) throw std::invalid_argument(std::string(who) + ": k_s must be positive");
    if (n_s < k_s) throw std::invalid_argument(std::string(who) + ": n_s must be at least k_s");
    if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument(std::string(who) + ": delta must lie in [0, 1)");
}

// sum_{lo <= i < hi} C(n, i) delta^(n-i) (1-delta)^i as log-sum-exp; i counts surviving symbols.
double binomial_range(std::int64_t n_s, std::int64_t lo, std::int64_t hi, double delta) {
    const double n = static_cast<double>(n_s);
    const double log_erase = std::log(delta);
    const double log_keep = std::log1p(-delta);
    const double log_n_fact = std::lgamma(n + 1.0);
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(hi - lo));
    double peak = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = lo; i < hi; ++i) {
        const double x = static_cast<double>(i);
        const double t = log_n_fact - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0) + (n - x) * log_erase +
                         x * log_keep;
        terms.push_back(t);
        if (t > peak) peak = t;
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - peak);
    return std::min(1.0, std::exp(peak + std::log(acc)));
}

}  // namespace

double packet_erasure_prob(std::int64_t n_s, std::int64_t k_s, double delta) {
    require_code(n_s, k_s, delta, "packet_erasure_prob");
    if (delta == 0.0) return 0.0;
    return binomial_range(n_s, 0, k_s, delta);
}

double packet_success_prob(std::int64_t n_s, std::int64_t k_s, double delta) {
    require_code(n_s, k_s, delta, "packet_success_prob");
    if (delta == 0.0) return 1.0;
    return binomial_range(n_s, k_s, n_s + 1, delta);
}

ServiceDistribution service_distribution(const HarqScheme& scheme, const ErasureChannel& channel) {
    if (const auto* fr = std::get_if<FrScheme>(&scheme.variant())) {
        const double keep = packet_success_prob(fr->codeword, fr->symbols, channel.delta());
        if (!(keep > 0.0)) throw std::domain_error("service_distribution: packet success probability underflows to zero");
        return ScaledNegBinomial(fr->codeword, fr->packets, keep);
    }
    return NegBinomial(std::get<IirScheme>(scheme.variant()).symbols, 1.0 - channel.delta());
}

std::int64_t sample_service_symbolwise(const HarqScheme& scheme, const ErasureChannel& channel, Rng& rng) {
    std::bernoulli_distribution survives(1.0 - channel.delta());
    if (const auto* fr = std::get_if<FrScheme>(&scheme.variant())) {
        std::int64_t uses = 0;
        for (std::int64_t decoded = 0; decoded < fr->packets;) {
            // The receiver waits for the whole codeword before deciding.
            std::int64_t received = 0;
            for (std::int64_t s = 0; s < fr->codeword; ++s) {
                if (survives(rng)) ++received;
            }
            uses += fr->codeword;
            if (received >= fr->symbols) ++decoded;
        }
        return uses;
    }
    const std::int64_t k_s = std::get<IirScheme>(scheme.variant()).symbols;
    std::int64_t uses = 0;
    for (std::int64_t received = 0; received < k_s; ++uses) {
        if (survives(rng)) ++received;
    }
    return uses;
}

}  // namespace aoi
