#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "aoi/distributions.hpp"

namespace aoi {

/// Infinite incremental redundancy: rateless code over `symbols` information symbols.
struct IirScheme {
    std::int64_t symbols;
};

/// Fixed redundancy: `packets` packets of `symbols` information symbols, each
/// protected by an (codeword, symbols) MDS code.
struct FrScheme {
    std::int64_t symbols;
    std::int64_t codeword;
    std::int64_t packets;
};

class HarqScheme {
public:
    static HarqScheme iir(std::int64_t k_s);
    static HarqScheme fr(std::int64_t k_s, std::int64_t n_s, std::int64_t k_p);

    bool is_iir() const { return std::holds_alternative<IirScheme>(scheme_); }
    const std::variant<IirScheme, FrScheme>& variant() const { return scheme_; }

    /// Information symbols per packet (k_s).
    std::int64_t symbols_per_packet() const;
    /// Total information symbols per update, K = k_p * k_s (K = k_s for IIR).
    std::int64_t total_symbols() const;
    std::string describe() const;

private:
    explicit HarqScheme(std::variant<IirScheme, FrScheme> s) : scheme_(s) {}
    std::variant<IirScheme, FrScheme> scheme_;
};

/// Memoryless symbol erasure channel.
class ErasureChannel {
public:
    explicit ErasureChannel(double delta);
    double delta() const { return delta_; }

private:
    double delta_;
};

/// Probability that fewer than k_s of n_s symbols survive the channel.
double packet_erasure_prob(std::int64_t n_s, std::int64_t k_s, double delta);
/// Probability that at least k_s of n_s symbols survive. Summed directly rather than
/// taken as 1 - packet_erasure_prob, so it keeps full relative accuracy when tiny.
double packet_success_prob(std::int64_t n_s, std::int64_t k_s, double delta);

/// Service-time law induced by a scheme on a channel.
ServiceDistribution service_distribution(const HarqScheme& scheme, const ErasureChannel& channel);

/// Channel uses consumed by one update, simulated symbol by symbol.
std::int64_t sample_service_symbolwise(const HarqScheme& scheme, const ErasureChannel& channel, Rng& rng);

}  // namespace aoi
