#include "aoi/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace aoi {

namespace {

struct BatchAccumulator {
    double area = 0.0;
    double time = 0.0;
    double count = 0.0;
    double sum_system_time = 0.0;
    double sum_interdeparture = 0.0;
    double sum_sq_interdeparture = 0.0;
};

// Standard error of the mean of per-batch estimates.
template <class Metric>
double batch_stderr(const std::vector<BatchAccumulator>& batches, Metric metric) {
    const std::size_t b = batches.size();
    if (b < 2) return 0.0;
    double mean = 0.0;
    for (const auto& acc : batches) mean += metric(acc);
    mean /= static_cast<double>(b);
    double ss = 0.0;
    for (const auto& acc : batches) {
        const double d = metric(acc) - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(b - 1) / static_cast<double>(b));
}

class ServiceSampler {
public:
    explicit ServiceSampler(const ServiceModel& model) : model_(model) {}

    double operator()(Rng& rng) const {
        if (const auto* dist = std::get_if<ServiceDistribution>(&model_)) return dist->sample(rng);
        const auto& symbols = std::get<SymbolLevelService>(model_);
        return static_cast<double>(sample_service_symbolwise(symbols.scheme, symbols.channel, rng));
    }

private:
    const ServiceModel& model_;
};

}  // namespace

void SimConfig::validate() const {
    if (!(std::isfinite(lam) && lam > 0.0)) throw std::invalid_argument("simulate: lambda must be positive");
    if (deliveries < warmup + 2) {
        throw std::invalid_argument("simulate: deliveries must exceed warmup by at least 2");
    }
    if (max_events_without_delivery == 0) throw std::invalid_argument("simulate: event cap must be positive");
}

SimResult run(const SimConfig& config) {
    config.validate();

    Rng rng(config.seed);
    std::exponential_distribution<double> interarrival(config.lam);
    const ServiceSampler draw_service(config.service);
    const bool preemptive = config.discipline == Discipline::Preemptive;

    const std::uint64_t opening = std::max<std::uint64_t>(config.warmup, 1);
    const std::uint64_t measured = config.deliveries - opening;
    const std::size_t batch_count = static_cast<std::size_t>(std::min<std::uint64_t>(kBatchCount, measured));
    std::vector<BatchAccumulator> batches(batch_count);

    SimResult out;
    double now = 0.0;
    double next_arrival = interarrival(rng);
    bool busy = false;
    double completion = std::numeric_limits<double>::infinity();
    double in_service_generated = 0.0;

    bool window_open = false;
    double age = 0.0;
    double interval_area = 0.0;
    double last_delivery = 0.0;
    std::uint64_t delivered = 0;
    std::uint64_t since_delivery = 0;

    // Age grows with slope one between events; integrate it exactly.
    auto advance_to = [&](double t) {
        const double dt = t - now;
        if (window_open) {
            interval_area += age * dt + 0.5 * dt * dt;
            age += dt;
        }
        now = t;
    };

    while (delivered < config.deliveries) {
        if (++since_delivery > config.max_events_without_delivery) {
            throw std::runtime_error("simulate: no delivery within the event cap; the arrival rate starves service");
        }
        ++out.events;
        if (busy && completion <= next_arrival) {
            advance_to(completion);
            busy = false;
            ++delivered;
            since_delivery = 0;
            if (window_open) {
                const std::uint64_t j = delivered - opening - 1;
                auto& acc = batches[static_cast<std::size_t>(j * batch_count / measured)];
                const double y = now - last_delivery;
                acc.area += interval_area;
                acc.time += y;
                acc.count += 1.0;
                acc.sum_system_time += now - in_service_generated;
                acc.sum_interdeparture += y;
                acc.sum_sq_interdeparture += y * y;
            }
            age = now - in_service_generated;
            interval_area = 0.0;
            last_delivery = now;
            if (!window_open && delivered == opening) window_open = true;
            if (window_open && config.record_trace) out.trace.push_back({in_service_generated, now});
        } else {
            advance_to(next_arrival);
            ++out.arrivals;
            if (!busy || preemptive) {
                busy = true;
                in_service_generated = now;
                completion = now + draw_service(rng);
            }
            next_arrival = now + interarrival(rng);
        }
    }

    BatchAccumulator total;
    for (const auto& acc : batches) {
        total.area += acc.area;
        total.time += acc.time;
        total.count += acc.count;
        total.sum_system_time += acc.sum_system_time;
        total.sum_interdeparture += acc.sum_interdeparture;
        total.sum_sq_interdeparture += acc.sum_sq_interdeparture;
    }
    out.measured_deliveries = measured;
    out.elapsed = total.time;
    out.total_area = total.area;
    out.avg_age = total.area / total.time;
    out.eff_rate = total.count / total.time;
    out.mean_interdeparture = total.sum_interdeparture / total.count;
    out.mean_sq_interdeparture = total.sum_sq_interdeparture / total.count;
    out.mean_system_time = total.sum_system_time / total.count;

    out.batches = batch_count;
    out.stderr_age = batch_stderr(batches, [](const BatchAccumulator& a) { return a.area / a.time; });
    out.stderr_eff_rate = batch_stderr(batches, [](const BatchAccumulator& a) { return a.count / a.time; });
    out.stderr_interdeparture =
        batch_stderr(batches, [](const BatchAccumulator& a) { return a.sum_interdeparture / a.count; });
    out.stderr_sq_interdeparture =
        batch_stderr(batches, [](const BatchAccumulator& a) { return a.sum_sq_interdeparture / a.count; });
    out.stderr_system_time =
        batch_stderr(batches, [](const BatchAccumulator& a) { return a.sum_system_time / a.count; });
    return out;
}

double estimate_effective_rate(const SimResult& result) {
    if (result.measured_deliveries < 100) {
        throw std::invalid_argument("effective rate needs at least 100 measured deliveries");
    }
    return result.eff_rate;
}

std::vector<RunOutcome> batch_run(const std::vector<SimConfig>& configs, unsigned workers) {
    if (configs.empty()) throw std::invalid_argument("batch_run: no configurations");
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, configs.size()));

    std::vector<RunOutcome> outcomes(configs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
                outcomes[i].result = run(configs[i]);
            } catch (const std::exception& e) {
                outcomes[i].error = e.what();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return outcomes;
}

}  // namespace aoi
