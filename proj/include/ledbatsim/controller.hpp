#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace ledbatsim {

enum class VariantMode {
    Plain,
    RandomPacing,
    SlowStart,
    RandomDrop,
    MultiplicativeDecrease,
};

const char* variant_name(VariantMode mode);

// Sender-side parameters. The window law keeps the queuing delay near the
// target tau; the gain defaults to 1/tau so the increase slope never exceeds
// Reno's one-packet-per-RTT.
struct ControllerConfig {
    double target_tau = 0.025;   // seconds
    double gain = 0.0;           // 1/seconds; 0 means "use 1/target_tau"
    VariantMode variant = VariantMode::Plain;
    double drop_prob_p = 0.0;    // RandomDrop only, [0,1)
    double beta = 0.0;           // MultiplicativeDecrease only, (0,1)
    double init_cwnd = 1.0;      // packets
    double min_cwnd = 1.0;       // packets
    double loss_backoff = 0.5;

    double effective_gain() const { return gain > 0.0 ? gain : 1.0 / target_tau; }
    void validate() const;  // throws std::invalid_argument
};

// One acked packet as seen by the sender. one_way_delay is RX timestamp minus
// TX timestamp and may carry an arbitrary clock offset; only differences are
// meaningful.
struct DelaySample {
    double one_way_delay = 0.0;  // seconds
    double ack_time = 0.0;       // sender clock, seconds
    bool loss_flag = false;
};

struct ControlEvent {
    enum class Kind { MultiplicativeDrop, RandomHalve, LossHalve };
    double time = 0.0;
    Kind kind = Kind::LossHalve;
    double factor = 0.5;  // multiplicative factor applied to the window
};

// Pure LEDBAT sender state machine. Callers serialize calls per instance;
// instances share nothing.
class Controller {
  public:
    Controller(const ControllerConfig& cfg, std::uint64_t seed);

    // Window update on ack receipt. Rejects samples with loss_flag set.
    std::vector<ControlEvent> on_ack(const DelaySample& sample);

    // Loss reaction: multiplicative backoff, at most once per RTT estimate.
    std::optional<ControlEvent> on_loss(double now);

    // Transmission offsets for a batch of n packets. RandomPacing spreads the
    // batch with sorted uniform jitter over the RTT; other modes send
    // immediately.
    std::vector<double> pacing_schedule(double rtt_estimate, int n_packets);

    double cwnd() const { return cwnd_; }
    double base_delay() const { return base_delay_; }
    double last_qdelay() const { return last_qdelay_; }
    bool in_slow_start() const { return in_slow_start_; }
    double last_decrease_time() const { return last_decrease_time_; }
    bool has_delay_sample() const;

    // 2*base_delay + last_qdelay (symmetric path assumption); 0 before the
    // first delay sample.
    double rtt_estimate() const;

    const ControllerConfig& config() const { return cfg_; }

  private:
    void additive_update(double qdelay);

    ControllerConfig cfg_;
    double cwnd_;
    double base_delay_;
    double last_qdelay_ = 0.0;
    bool in_slow_start_;
    double last_decrease_time_;
    std::mt19937_64 rng_;
};

}  // namespace ledbatsim
