#include "ledbatsim/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ledbatsim/csvio.hpp"

namespace ledbatsim {

namespace {
constexpr double kWindowFloor = 1e-3;  // packets
}

void FluidSystem::validate() const {
    if (n_flows < 1) throw std::invalid_argument("n_flows must be >= 1");
    if (!(rtt_R > 0.0)) throw std::invalid_argument("rtt_R must be > 0");
    if (!(target_tau > 0.0)) throw std::invalid_argument("target_tau must be > 0");
    if (!(capacity_C > 0.0)) throw std::invalid_argument("capacity_C must be > 0");
    if (!(buffer_B > 0.0)) throw std::invalid_argument("buffer_B must be > 0");
    if (base_delay_error.size() != static_cast<std::size_t>(n_flows))
        throw std::invalid_argument("base_delay_error must have n_flows entries");
    if (windows.size() != static_cast<std::size_t>(n_flows))
        throw std::invalid_argument("windows must have n_flows entries");
    for (double e : base_delay_error)
        if (e < 0.0 || e > (n_flows - 1) * target_tau + 1e-12)
            throw std::invalid_argument("base_delay_error must lie in [0, (N-1)*tau]");
    for (double w : windows)
        if (!(w > 0.0)) throw std::invalid_argument("windows must be positive");
    if (queue0 < 0.0 || queue0 > buffer_B)
        throw std::invalid_argument("queue0 must lie in [0, buffer_B]");
    if (!(step_h > 0.0)) throw std::invalid_argument("step_h must be > 0");
    if (step_h > rtt_R / 10.0 + 1e-12)
        throw std::invalid_argument("step_h too large: need h <= R/10 for stability");
}

FluidTrace integrate(const FluidSystem& sys, double t_end) {
    sys.validate();
    if (!(t_end > sys.t_start)) throw std::invalid_argument("t_end must exceed t_start");

    const int n = sys.n_flows;
    const double h = sys.step_h;
    const long long steps = static_cast<long long>(std::ceil((t_end - sys.t_start) / h - 1e-9));

    FluidTrace trace;
    trace.step_h = h;
    trace.windows.assign(static_cast<std::size_t>(n), {});
    std::vector<double> w = sys.windows;
    double q = sys.queue0;

    auto record = [&](double t) {
        trace.t.push_back(t);
        trace.queue.push_back(q);
        for (int i = 0; i < n; ++i)
            trace.windows[static_cast<std::size_t>(i)].push_back(w[static_cast<std::size_t>(i)]);
    };
    record(sys.t_start);

    for (long long k = 0; k < steps; ++k) {
        double sum_w = 0.0;
        for (double wi : w) sum_w += wi;
        for (int i = 0; i < n; ++i) {
            double qi = std::max(0.0, q - sys.base_delay_error[static_cast<std::size_t>(i)] * sys.capacity_C) /
                        sys.capacity_C;  // perceived queuing delay, seconds
            double dw = (1.0 / sys.rtt_R) * (sys.target_tau - qi) / sys.target_tau;
            auto& wi = w[static_cast<std::size_t>(i)];
            wi = std::max(kWindowFloor, wi + h * dw);
        }
        double dq = sum_w / sys.rtt_R - sys.capacity_C;
        q = std::clamp(q + h * dq, 0.0, sys.buffer_B);
        record(sys.t_start + static_cast<double>(k + 1) * h);
    }
    return trace;
}

double d_max_at(std::span<const double> windows) {
    if (windows.empty()) throw std::invalid_argument("windows must be non-empty");
    auto [lo, hi] = std::minmax_element(windows.begin(), windows.end());
    return *hi - *lo;
}

double d_max(const FluidTrace& trace, double t) {
    if (trace.t.empty()) throw std::invalid_argument("empty trace");
    if (t < trace.t.front() - 1e-9 || t > trace.t.back() + 1e-9)
        throw std::invalid_argument("t outside trace range");
    auto it = std::lower_bound(trace.t.begin(), trace.t.end(), t - 1e-12);
    std::size_t k = static_cast<std::size_t>(it - trace.t.begin());
    if (k >= trace.t.size()) k = trace.t.size() - 1;
    std::vector<double> w;
    w.reserve(trace.windows.size());
    for (const auto& series : trace.windows) w.push_back(series[k]);
    return d_max_at(w);
}

static void require_precondition(const FluidSystem& sys) {
    if (!(static_cast<double>(sys.n_flows) < sys.buffer_B / (sys.target_tau * sys.capacity_C)))
        throw std::invalid_argument("precondition N < B/(tau*C) fails");
}

double t_star(const FluidSystem& sys, std::span<const double> windows_at_tN) {
    sys.validate();
    require_precondition(sys);
    if (sys.n_flows < 2) throw std::invalid_argument("t_star needs at least two flows");
    double gap = d_max_at(windows_at_tN);
    if (!(gap > 0.0)) throw std::invalid_argument("d_max at t_N must be positive");
    return sys.t_start + sys.rtt_R * gap / static_cast<double>(sys.n_flows - 1);
}

PropositionVerdict check_proposition(const FluidSystem& sys, double t_end) {
    sys.validate();
    require_precondition(sys);

    PropositionVerdict v;
    double gap0 = d_max_at(sys.windows);
    if (!(gap0 > 0.0)) return v;  // not applicable: no initial gap
    v.applicable = true;
    v.t_star = t_star(sys, sys.windows);

    FluidTrace trace = integrate(sys, t_end);
    double min_gap = std::numeric_limits<double>::infinity();
    std::vector<double> w(static_cast<std::size_t>(sys.n_flows));
    for (std::size_t k = 0; k < trace.t.size(); ++k) {
        if (trace.t[k] <= v.t_star) continue;
        for (int i = 0; i < sys.n_flows; ++i)
            w[static_cast<std::size_t>(i)] = trace.windows[static_cast<std::size_t>(i)][k];
        min_gap = std::min(min_gap, d_max_at(w));
    }
    v.min_dmax_after = std::isfinite(min_gap) ? min_gap : 0.0;
    v.holds = std::isfinite(min_gap) && min_gap > 0.0;
    return v;
}

std::string verdict_text(const PropositionVerdict& v) {
    std::string out;
    out += "applicable: ";
    out += v.applicable ? "yes" : "no";
    out += "\n";
    if (v.applicable) {
        out += "holds: ";
        out += v.holds ? "yes" : "no";
        out += "\nt_star: " + format_double(v.t_star);
        out += "\nmin_dmax_after_tstar: " + format_double(v.min_dmax_after);
        out += "\n";
    }
    return out;
}

std::string fluid_trace_csv(const FluidSystem& sys, const FluidTrace& trace) {
    std::string out = "t,flow_id,W,q_i\n";
    for (std::size_t k = 0; k < trace.t.size(); ++k) {
        for (int i = 0; i < sys.n_flows; ++i) {
            double qi = std::max(0.0, trace.queue[k] - sys.base_delay_error[static_cast<std::size_t>(i)] * sys.capacity_C) /
                        sys.capacity_C;
            append_double(out, trace.t[k]);
            out += ',';
            out += std::to_string(i);
            out += ',';
            append_double(out, trace.windows[static_cast<std::size_t>(i)][k]);
            out += ',';
            append_double(out, qi);
            out += '\n';
        }
    }
    return out;
}

}  // namespace ledbatsim
