#include "ledbatsim/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <stdexcept>

#include "ledbatsim/csvio.hpp"
#include "ledbatsim/rng.hpp"

namespace ledbatsim {

void Scenario::validate() const {
    if (!(capacity_C > 0.0)) throw std::invalid_argument("capacity_C must be > 0");
    if (!(buffer_B >= 1.0)) throw std::invalid_argument("buffer_B must be >= 1");
    if (!(prop_delay > 0.0)) throw std::invalid_argument("prop_delay must be > 0");
    if (!(packet_size > 0.0)) throw std::invalid_argument("packet_size must be > 0");
    if (duration < 0.0) throw std::invalid_argument("duration must be >= 0");
    if (!(sample_interval > 0.0)) throw std::invalid_argument("sample_interval must be > 0");
    if (flows.empty()) throw std::invalid_argument("flows must be non-empty");
    for (std::size_t i = 0; i < flows.size(); ++i) {
        const auto& f = flows[i];
        if (f.flow_id != static_cast<int>(i))
            throw std::invalid_argument("flow_id must be the ordinal position");
        if (f.start_time < 0.0) throw std::invalid_argument("flow start_time must be >= 0");
        if (duration > 0.0 && f.start_time >= duration)
            throw std::invalid_argument("flow start_time must be < duration");
        if (i > 0 && f.start_time < flows[i - 1].start_time)
            throw std::invalid_argument("flow start times must be nondecreasing");
    }
    ctrl.validate();
}

Scenario staggered_scenario(int n, double gap, Scenario base) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (gap < 0.0) throw std::invalid_argument("gap must be >= 0");
    base.flows.clear();
    for (int i = 0; i < n; ++i)
        base.flows.push_back({i, gap * i, 0.0});
    return base;
}

namespace {

enum class EventKind : std::uint8_t {
    Departure,   // link finishes serving a packet
    FlowStart,
    Send,        // sender puts a packet on the wire
    AckArrive,
    LossSignal,
    PacingRound,
    Sample,
};

// Same-instant ordering: link departures first (a packet finishing service at
// t has left the queue by t), then trace samples, then flow events by
// (flow_id, seq).
constexpr int kLinkOrder = -2;
constexpr int kSamplerOrder = -1;

struct Event {
    double t;
    int flow_id;         // kLinkOrder, kSamplerOrder, or >=0 flows
    long long seq;       // packet seq, or -1
    std::uint64_t serial;
    EventKind kind;
    double payload;      // AckArrive: measured one-way delay
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.t != b.t) return a.t > b.t;
        if (a.flow_id != b.flow_id) return a.flow_id > b.flow_id;
        if (a.seq != b.seq) return a.seq > b.seq;
        return a.serial > b.serial;
    }
};

struct FlowRt {
    FlowSpec spec;
    std::unique_ptr<Controller> ctrl;
    int in_flight = 0;       // sent, not yet acked or loss-signaled
    int pending_sends = 0;   // scheduled Send events not yet executed (pacing)
    long long next_seq = 0;
    double send_credit = 0.0;
    double last_paced_send = 0.0;
    long long delivered = 0;
    long long dropped = 0;
    long long loss_signals = 0;
    long long sent = 0;
    long long delivered_since_sample = 0;
};

class Sim {
  public:
    explicit Sim(const Scenario& sc) : sc_(sc) {}

    SimTrace run() {
        sc_.validate();
        const int n = static_cast<int>(sc_.flows.size());
        flows_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) flows_[static_cast<std::size_t>(i)].spec = sc_.flows[static_cast<std::size_t>(i)];

        trace_.n_flows = n;
        trace_.duration = sc_.duration;
        trace_.capacity_C = sc_.capacity_C;
        trace_.sample_interval = sc_.sample_interval;
        trace_.cwnd.resize(static_cast<std::size_t>(n));
        trace_.rate.resize(static_cast<std::size_t>(n));

        for (int i = 0; i < n; ++i)
            push({sc_.flows[static_cast<std::size_t>(i)].start_time, i, -1, 0, EventKind::FlowStart, 0.0});
        const long long n_samples = static_cast<long long>(std::floor(sc_.duration / sc_.sample_interval + 1e-9));
        for (long long k = 1; k <= n_samples; ++k)
            push({static_cast<double>(k) * sc_.sample_interval, kSamplerOrder, k, 0, EventKind::Sample, 0.0});

        std::uint64_t processed = 0;
        while (!queue_.empty()) {
            Event ev = queue_.top();
            if (ev.t > sc_.duration) break;
            queue_.pop();
            if (++processed > sc_.max_events)
                throw std::runtime_error("event budget exceeded (runaway simulation)");
            dispatch(ev);
        }

        finalize();
        return std::move(trace_);
    }

  private:
    void push(Event ev) {
        ev.serial = serial_++;
        queue_.push(ev);
    }

    double service_time() const { return 1.0 / sc_.capacity_C; }

    bool pacing_mode() const { return sc_.ctrl.variant == VariantMode::RandomPacing; }

    void dispatch(const Event& ev) {
        switch (ev.kind) {
            case EventKind::Departure: backlog_--; break;
            case EventKind::FlowStart: on_flow_start(ev); break;
            case EventKind::Send: on_send(ev); break;
            case EventKind::AckArrive: on_ack(ev); break;
            case EventKind::LossSignal: on_loss_signal(ev); break;
            case EventKind::PacingRound: on_pacing_round(ev); break;
            case EventKind::Sample: on_sample(ev); break;
        }
    }

    void on_flow_start(const Event& ev) {
        auto& f = flows_[static_cast<std::size_t>(ev.flow_id)];
        ControllerConfig cfg = sc_.ctrl;
        if (f.spec.initial_cwnd > 0.0) cfg.init_cwnd = f.spec.initial_cwnd;
        f.ctrl = std::make_unique<Controller>(cfg, flow_seed(sc_.seed, ev.flow_id));
        if (pacing_mode()) {
            f.last_paced_send = ev.t;
            push({ev.t, ev.flow_id, -1, 0, EventKind::PacingRound, 0.0});
        } else {
            try_send(ev.flow_id, ev.t);
        }
    }

    // Packets the window currently permits beyond what is in flight or already
    // scheduled; real-valued windows spend accumulated fractional credit one
    // bonus packet at a time.
    bool may_send(FlowRt& f) {
        double w = f.ctrl->cwnd();
        int eff = static_cast<int>(std::floor(w));
        int outstanding = f.in_flight + f.pending_sends;
        if (outstanding < eff) return true;
        if (f.send_credit >= 1.0 && outstanding < eff + 1) {
            f.send_credit -= 1.0;
            return true;
        }
        return false;
    }

    void try_send(int flow_id, double now) {
        auto& f = flows_[static_cast<std::size_t>(flow_id)];
        while (may_send(f)) transmit(flow_id, now);
    }

    void on_pacing_round(const Event& ev) {
        auto& f = flows_[static_cast<std::size_t>(ev.flow_id)];
        double rtt = f.ctrl->has_delay_sample() ? f.ctrl->rtt_estimate()
                                                : 2.0 * sc_.prop_delay + service_time();
        int n = 0;
        while (may_send(f)) {
            n++;
            f.pending_sends++;
        }
        if (n > 0) {
            auto offsets = f.ctrl->pacing_schedule(rtt, n);
            for (double off : offsets) {
                double t = std::max(ev.t + off, f.last_paced_send);
                f.last_paced_send = t;
                push({t, ev.flow_id, -1, 0, EventKind::Send, 0.0});
            }
        }
        push({ev.t + rtt, ev.flow_id, -1, 0, EventKind::PacingRound, 0.0});
    }

    void on_send(const Event& ev) {
        auto& f = flows_[static_cast<std::size_t>(ev.flow_id)];
        f.pending_sends--;
        transmit(ev.flow_id, ev.t);
    }

    void transmit(int flow_id, double now) {
        auto& f = flows_[static_cast<std::size_t>(flow_id)];
        long long seq = f.next_seq++;
        f.sent++;
        f.in_flight++;
        if (backlog_ >= static_cast<long long>(sc_.buffer_B)) {
            // Drop-tail. The sender learns of the drop when the ack would have
            // come back, roughly one RTT later.
            f.dropped++;
            trace_.losses.push_back({now, flow_id});
            push({now + 2.0 * sc_.prop_delay + service_time(), flow_id, seq, 0,
                  EventKind::LossSignal, 0.0});
            return;
        }
        backlog_++;
        double depart = std::max(now, link_free_) + service_time();
        link_free_ = depart;
        push({depart, kLinkOrder, seq, 0, EventKind::Departure, 0.0});
        // Timestamps tick on a power-of-two grid (~1 ns). Quantized delay plus
        // quantized offset are exact in double arithmetic, so a constant
        // receiver clock offset cancels exactly out of delay differences.
        constexpr double kTick = 1073741824.0;  // 2^30 per second
        double raw = (depart - now) + sc_.prop_delay;
        double owd = (std::nearbyint(raw * kTick) +
                      std::nearbyint(sc_.receiver_clock_offset * kTick)) / kTick;
        push({depart + 2.0 * sc_.prop_delay, flow_id, seq, 0, EventKind::AckArrive, owd});
    }

    void on_ack(const Event& ev) {
        auto& f = flows_[static_cast<std::size_t>(ev.flow_id)];
        f.in_flight--;
        f.delivered++;
        f.delivered_since_sample++;
        auto events = f.ctrl->on_ack({ev.payload, ev.t, false});
        for (const auto& ce : events)
            trace_.decreases.push_back({ce.time, ev.flow_id, ce.factor});
        double w = f.ctrl->cwnd();
        f.send_credit = std::min(2.0, f.send_credit + (w - std::floor(w)) / w);
        if (!pacing_mode()) try_send(ev.flow_id, ev.t);
    }

    void on_loss_signal(const Event& ev) {
        auto& f = flows_[static_cast<std::size_t>(ev.flow_id)];
        f.in_flight--;
        f.loss_signals++;
        auto ce = f.ctrl->on_loss(ev.t);
        if (ce) trace_.decreases.push_back({ce->time, ev.flow_id, ce->factor});
        if (!pacing_mode()) try_send(ev.flow_id, ev.t);
    }

    void on_sample(const Event& ev) {
        trace_.times.push_back(ev.t);
        trace_.queue.push_back(static_cast<double>(backlog_));
        if (backlog_ > static_cast<long long>(sc_.buffer_B))
            throw std::logic_error("queue bound violated");
        if (backlog_ > 0 && link_free_ <= ev.t)
            throw std::logic_error("work conservation violated: backlog with idle link");
        for (std::size_t i = 0; i < flows_.size(); ++i) {
            auto& f = flows_[i];
            trace_.cwnd[i].push_back(f.ctrl ? f.ctrl->cwnd() : 0.0);
            trace_.rate[i].push_back(static_cast<double>(f.delivered_since_sample) / sc_.sample_interval);
            f.delivered_since_sample = 0;
        }
    }

    void finalize() {
        long long total_delivered = 0;
        for (auto& f : flows_) {
            trace_.delivered.push_back(f.delivered);
            trace_.dropped.push_back(f.dropped);
            trace_.sent.push_back(f.sent);
            trace_.flow_start.push_back(f.spec.start_time);
            total_delivered += f.delivered;
            // Conservation: everything sent is acked, loss-signaled, or still
            // outstanding (in queue/flight, or a drop whose signal is pending).
            if (f.sent != f.delivered + f.loss_signals + f.in_flight)
                throw std::logic_error("packet conservation violated");
        }
        if (static_cast<double>(total_delivered) >
            sc_.capacity_C * sc_.duration + 1.0)
            throw std::logic_error("delivered packets exceed link capacity");
    }

    Scenario sc_;
    std::vector<FlowRt> flows_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::uint64_t serial_ = 0;
    long long backlog_ = 0;
    double link_free_ = 0.0;
    SimTrace trace_;
};

}  // namespace

SimTrace run(const Scenario& scenario) { return Sim(scenario).run(); }

double delivered_in_window(const SimTrace& trace, int flow_id, double t0, double t1) {
    double sum = 0.0;
    const auto& rates = trace.rate[static_cast<std::size_t>(flow_id)];
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        double t = trace.times[k];
        if (t > t0 + 1e-9 && t <= t1 + 1e-9)
            sum += rates[k] * trace.sample_interval;
    }
    return sum;
}

std::string trace_csv(const SimTrace& trace) {
    std::string out = "t,flow_id,cwnd_pkts,rate_pps,queue_pkts\n";
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        for (int i = 0; i < trace.n_flows; ++i) {
            append_double(out, trace.times[k]);
            out += ',';
            out += std::to_string(i);
            out += ',';
            append_double(out, trace.cwnd[static_cast<std::size_t>(i)][k]);
            out += ',';
            append_double(out, trace.rate[static_cast<std::size_t>(i)][k]);
            out += ',';
            append_double(out, trace.queue[k]);
            out += '\n';
        }
    }
    return out;
}

std::string events_csv(const SimTrace& trace) {
    struct Row { double t; int flow; int kind; double detail; };
    std::vector<Row> rows;
    rows.reserve(trace.losses.size() + trace.decreases.size());
    for (const auto& l : trace.losses) rows.push_back({l.time, l.flow_id, 0, 0.0});
    for (const auto& d : trace.decreases) rows.push_back({d.time, d.flow_id, 1, d.factor});
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.flow < b.flow;
    });
    std::string out = "t,flow_id,event,detail\n";
    for (const auto& r : rows) {
        append_double(out, r.t);
        out += ',';
        out += std::to_string(r.flow);
        out += r.kind == 0 ? ",loss," : ",decrease,";
        if (r.kind == 1) append_double(out, r.detail);
        out += '\n';
    }
    return out;
}

}  // namespace ledbatsim
