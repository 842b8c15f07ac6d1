#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "aoi/analysis.hpp"
#include "aoi/distributions.hpp"
#include "aoi/harq.hpp"

namespace aoi {

/// Service drawn symbol by symbol from a HARQ scheme on an erasure channel.
struct SymbolLevelService {
    HarqScheme scheme;
    ErasureChannel channel;
};

using ServiceModel = std::variant<ServiceDistribution, SymbolLevelService>;

struct SimConfig {
    Discipline discipline = Discipline::Blocking;
    double lam = 1.0;
    ServiceModel service = ServiceDistribution(Exponential(1.0));
    /// Total successful deliveries to simulate, warmup included.
    std::uint64_t deliveries = 100000;
    std::uint64_t seed = 1;
    /// Deliveries discarded before the measurement window opens.
    std::uint64_t warmup = 1000;
    /// Abort when this many events pass without a delivery.
    std::uint64_t max_events_without_delivery = 1000000000;
    /// Keep per-delivery (generation, delivery) instants for offline checks.
    bool record_trace = false;

    void validate() const;
};

struct DeliveryRecord {
    double generated = 0.0;
    double delivered = 0.0;

    bool operator==(const DeliveryRecord&) const = default;
};

struct SimResult {
    std::uint64_t measured_deliveries = 0;
    /// Length of the measurement window.
    double elapsed = 0.0;
    /// Integral of the instantaneous age over the window.
    double total_area = 0.0;
    double avg_age = 0.0;
    double eff_rate = 0.0;
    double mean_interdeparture = 0.0;
    double mean_sq_interdeparture = 0.0;
    double mean_system_time = 0.0;

    // Batch-means standard errors.
    std::size_t batches = 0;
    double stderr_age = 0.0;
    double stderr_eff_rate = 0.0;
    double stderr_interdeparture = 0.0;
    double stderr_sq_interdeparture = 0.0;
    double stderr_system_time = 0.0;

    std::uint64_t arrivals = 0;
    std::uint64_t events = 0;

    /// First entry is the delivery that opens the window. Empty unless requested.
    std::vector<DeliveryRecord> trace;

    bool operator==(const SimResult&) const = default;
};

inline constexpr std::size_t kBatchCount = 50;

/// Runs one M/G/1/1 sample path. Deterministic in the config.
SimResult run(const SimConfig& config);

/// Returns the measured delivery rate; needs at least 100 measured deliveries.
double estimate_effective_rate(const SimResult& result);

struct RunOutcome {
    std::optional<SimResult> result;
    std::string error;

    bool ok() const { return result.has_value(); }
};

/// Runs every config on up to `workers` threads (0 picks the hardware count).
/// Output order follows input order; a failing config does not stop the others.
std::vector<RunOutcome> batch_run(const std::vector<SimConfig>& configs, unsigned workers = 0);

}  // namespace aoi
