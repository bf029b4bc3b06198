#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ledbatsim/netsim.hpp"

namespace ledbatsim {

struct MetricsReport {
    double eta = 0.0;                       // bottleneck utilization in [0,1]
    std::optional<double> jain_long;        // empty when all rates are zero
    std::vector<std::pair<double, double>> jain_short;  // (window start, F)
    std::vector<double> per_flow_rate;      // packets/s over the long-term window
    int n_flows = 0;
};

// Jain's index F = (sum x_i)^2 / (N sum x_i^2). Empty result when all rates
// are zero (undefined / not-applicable).
std::optional<double> jain(std::span<const double> rates);

// Delivered packets at the bottleneck over (t0, t1] divided by C*(t1-t0).
double efficiency(const SimTrace& trace, double t0, double t1);

// Per-flow rates over (t0, t1], each flow normalized by its active lifetime
// intersected with the window. Flows with zero deliveries count as rate 0.
std::vector<double> per_flow_rates(const SimTrace& trace, double t0, double t1);

// Jain index over sliding windows [t, t+window_len), stride apart, counting
// only flows already started at the window start.
std::vector<std::pair<double, double>> jain_short_term(const SimTrace& trace,
                                                       double window_len,
                                                       double stride);

// Long-term window starts at the last flow's start time so all flows are
// active; short-term uses 5 s windows with 1 s stride.
MetricsReport compute_metrics(const SimTrace& trace);

struct MetricStats {
    double eta_mean = 0.0;
    double eta_var = 0.0;
    double jain_mean = 0.0;
    double jain_var = 0.0;
    int count = 0;
};

// Sample mean and unbiased sample variance over replications.
MetricStats aggregate(std::span<const MetricsReport> reports);

}  // namespace ledbatsim
