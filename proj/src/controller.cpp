#include "ledbatsim/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ledbatsim {

const char* variant_name(VariantMode mode) {
    switch (mode) {
        case VariantMode::Plain: return "plain";
        case VariantMode::RandomPacing: return "random-pacing";
        case VariantMode::SlowStart: return "slow-start";
        case VariantMode::RandomDrop: return "random-drop";
        case VariantMode::MultiplicativeDecrease: return "mult-decrease";
    }
    return "?";
}

void ControllerConfig::validate() const {
    if (!(target_tau > 0.0)) throw std::invalid_argument("target_tau must be > 0");
    if (gain < 0.0) throw std::invalid_argument("gain must be >= 0");
    if (!(min_cwnd >= 1.0)) throw std::invalid_argument("min_cwnd must be >= 1");
    if (!(init_cwnd >= min_cwnd)) throw std::invalid_argument("init_cwnd must be >= min_cwnd");
    if (!(loss_backoff > 0.0 && loss_backoff < 1.0))
        throw std::invalid_argument("loss_backoff must be in (0,1)");
    if (variant == VariantMode::RandomDrop) {
        // p = 0 is allowed as the degenerate case identical to Plain.
        if (!(drop_prob_p >= 0.0 && drop_prob_p < 1.0))
            throw std::invalid_argument("drop_prob_p must be in [0,1) for random-drop");
    } else if (drop_prob_p != 0.0) {
        throw std::invalid_argument("drop_prob_p only applies to random-drop");
    }
    if (variant == VariantMode::MultiplicativeDecrease) {
        if (!(beta > 0.0 && beta < 1.0))
            throw std::invalid_argument("beta must be in (0,1) for mult-decrease");
    } else if (beta != 0.0) {
        throw std::invalid_argument("beta only applies to mult-decrease");
    }
}

Controller::Controller(const ControllerConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      cwnd_(cfg.init_cwnd),
      base_delay_(std::numeric_limits<double>::infinity()),
      in_slow_start_(cfg.variant == VariantMode::SlowStart),
      last_decrease_time_(-std::numeric_limits<double>::infinity()),
      rng_(seed) {
    cfg_.validate();
}

bool Controller::has_delay_sample() const { return std::isfinite(base_delay_); }

double Controller::rtt_estimate() const {
    if (!has_delay_sample()) return 0.0;
    return 2.0 * base_delay_ + last_qdelay_;
}

void Controller::additive_update(double qdelay) {
    // W += gain * (tau - q) / W; with gain = 1/tau this is Eq-style
    // W += (1/W) (tau - q)/tau.
    double delta = cfg_.effective_gain() * (cfg_.target_tau - qdelay) / cwnd_;
    cwnd_ = std::max(cfg_.min_cwnd, cwnd_ + delta);
}

std::vector<ControlEvent> Controller::on_ack(const DelaySample& sample) {
    if (sample.loss_flag)
        throw std::invalid_argument("loss-flagged sample must be routed to on_loss");

    base_delay_ = std::min(base_delay_, sample.one_way_delay);
    double q = sample.one_way_delay - base_delay_;
    last_qdelay_ = q;

    std::vector<ControlEvent> events;
    switch (cfg_.variant) {
        case VariantMode::SlowStart:
            if (in_slow_start_) {
                cwnd_ += 1.0;
            } else {
                additive_update(q);
            }
            break;
        case VariantMode::Plain:
        case VariantMode::RandomPacing:
            additive_update(q);
            break;
        case VariantMode::RandomDrop: {
            additive_update(q);
            if (cfg_.drop_prob_p > 0.0 &&
                std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < cfg_.drop_prob_p) {
                cwnd_ = std::max(cfg_.min_cwnd, 0.5 * cwnd_);
                events.push_back({sample.ack_time, ControlEvent::Kind::RandomHalve, 0.5});
            }
            break;
        }
        case VariantMode::MultiplicativeDecrease:
            if (q <= cfg_.target_tau) {
                additive_update(q);
            } else if (sample.ack_time - last_decrease_time_ >= rtt_estimate()) {
                cwnd_ = std::max(cfg_.min_cwnd, cfg_.beta * cwnd_);
                last_decrease_time_ = sample.ack_time;
                events.push_back({sample.ack_time, ControlEvent::Kind::MultiplicativeDrop, cfg_.beta});
            }
            // Over target with the guard closed: the additive decrease has been
            // replaced, so no window change at all.
            break;
    }
    return events;
}

std::optional<ControlEvent> Controller::on_loss(double now) {
    std::optional<ControlEvent> event;
    if (now - last_decrease_time_ >= rtt_estimate()) {
        cwnd_ = std::max(cfg_.min_cwnd, cfg_.loss_backoff * cwnd_);
        last_decrease_time_ = now;
        event = ControlEvent{now, ControlEvent::Kind::LossHalve, cfg_.loss_backoff};
    }
    in_slow_start_ = false;
    return event;
}

std::vector<double> Controller::pacing_schedule(double rtt_estimate, int n_packets) {
    if (n_packets < 1) throw std::invalid_argument("n_packets must be >= 1");
    if (!(rtt_estimate > 0.0)) throw std::invalid_argument("rtt_estimate must be > 0");

    if (cfg_.variant != VariantMode::RandomPacing || n_packets == 1)
        return std::vector<double>(static_cast<std::size_t>(n_packets), 0.0);

    std::vector<double> offsets(static_cast<std::size_t>(n_packets));
    std::uniform_real_distribution<double> unif(0.0, rtt_estimate);
    for (auto& o : offsets) o = unif(rng_);
    // Sorting is the reordering-avoidance step; nudge exact ties so the
    // sequence is strictly increasing.
    std::sort(offsets.begin(), offsets.end());
    for (std::size_t i = 1; i < offsets.size(); ++i)
        if (offsets[i] <= offsets[i - 1])
            offsets[i] = std::nextafter(offsets[i - 1], std::numeric_limits<double>::infinity());
    return offsets;
}

}  // namespace ledbatsim
