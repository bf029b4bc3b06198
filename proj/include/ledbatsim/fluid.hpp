#pragma once

#include <span>
#include <string>
#include <vector>

namespace ledbatsim {

// N coupled window ODEs over one bottleneck, with per-flow base-delay
// overestimates e_i. Serves as an independent oracle for the packet
// simulator's unfairness behavior.
struct FluidSystem {
    int n_flows = 2;
    double rtt_R = 0.1;         // common round-trip, seconds
    double target_tau = 0.025;  // seconds
    double capacity_C = 800.0;  // packets/s
    double buffer_B = 100.0;    // packets
    std::vector<double> base_delay_error;  // e_i, seconds
    std::vector<double> windows;           // W_i at t_N, packets
    double queue0 = 0.0;        // q(t_N), packets
    double t_start = 0.0;       // t_N
    double step_h = 0.005;      // seconds

    void validate() const;  // throws std::invalid_argument
};

struct FluidTrace {
    std::vector<double> t;
    std::vector<std::vector<double>> windows;  // [flow][step]
    std::vector<double> queue;                 // packets
    double step_h = 0.0;
};

// Fixed-step explicit integration of
//   dW_i/dt = (1/R) (tau - q_i)/tau,   q_i = max(0, q - e_i C)/C in delay units
//   dq/dt   = sum_i W_i/R - C, clipped to [0, B]
// Windows floored at 1e-3 packets so starvation stays visible.
FluidTrace integrate(const FluidSystem& sys, double t_end);

// Max pairwise window gap at time t (nearest sample).
double d_max(const FluidTrace& trace, double t);
double d_max_at(std::span<const double> windows);

// Unfairness onset bound: t_N + R * (max pairwise gap at t_N) / (N-1).
// Requires the gap to be positive and N < B/(tau C).
double t_star(const FluidSystem& sys, std::span<const double> windows_at_tN);

struct PropositionVerdict {
    bool applicable = false;  // positive initial gap present
    bool holds = false;       // d_max(t) > 0 at every sample t > t_star
    double t_star = 0.0;
    double min_dmax_after = 0.0;
};

PropositionVerdict check_proposition(const FluidSystem& sys, double t_end);

std::string verdict_text(const PropositionVerdict& v);
std::string fluid_trace_csv(const FluidSystem& sys, const FluidTrace& trace);  // t,flow_id,W,q_i

}  // namespace ledbatsim
