#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ledbatsim/controller.hpp"

namespace ledbatsim {

struct FlowSpec {
    int flow_id = 0;
    double start_time = 0.0;   // seconds
    double initial_cwnd = 0.0; // packets; 0 means "use ControllerConfig::init_cwnd"
};

// Full experiment description: one drop-tail bottleneck shared by N flows with
// symmetric propagation delay.
struct Scenario {
    double capacity_C = 800.0;   // packets/second
    double buffer_B = 100.0;     // packets
    double prop_delay = 0.025;   // one-way, seconds
    double packet_size = 1500.0; // bytes, rate conversion only
    std::vector<FlowSpec> flows;
    double duration = 60.0;      // seconds
    std::uint64_t seed = 1;
    ControllerConfig ctrl;
    double sample_interval = 0.1;       // trace sampling period, seconds
    double receiver_clock_offset = 0.0; // added to RX timestamps (testing hook)
    std::uint64_t max_events = 200'000'000; // runaway detection

    void validate() const;  // throws std::invalid_argument
};

struct LossEvent {
    double time = 0.0;
    int flow_id = 0;
};

struct DecreaseEvent {
    double time = 0.0;
    int flow_id = 0;
    double factor = 0.5;
};

struct SimTrace {
    // Sampled series: times[k] is the end of sampling interval k.
    std::vector<double> times;
    std::vector<std::vector<double>> cwnd;  // [flow][sample], packets
    std::vector<std::vector<double>> rate;  // [flow][sample], delivered pkts/s over the interval
    std::vector<double> queue;              // [sample], packets

    // Exact event logs.
    std::vector<LossEvent> losses;
    std::vector<DecreaseEvent> decreases;

    // Totals and scenario echo used by metrics.
    std::vector<long long> delivered;  // per flow
    std::vector<long long> dropped;    // per flow
    std::vector<long long> sent;       // per flow
    std::vector<double> flow_start;    // per flow
    double duration = 0.0;
    double capacity_C = 0.0;
    double sample_interval = 0.0;
    int n_flows = 0;
};

// Deterministic discrete-event run: identical Scenario (including seed)
// yields a byte-identical trace.
SimTrace run(const Scenario& scenario);

// n flows at start times 0, gap, 2*gap, ...
Scenario staggered_scenario(int n, double gap, Scenario base);

// Delivered packets of one flow over (t0, t1], from the sampled series.
double delivered_in_window(const SimTrace& trace, int flow_id, double t0, double t1);

std::string trace_csv(const SimTrace& trace);   // t,flow_id,cwnd_pkts,rate_pps,queue_pkts
std::string events_csv(const SimTrace& trace);  // t,flow_id,event,detail

}  // namespace ledbatsim
