#include "ledbatsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ledbatsim {

std::optional<double> jain(std::span<const double> rates) {
    if (rates.empty()) throw std::invalid_argument("jain needs at least one rate");
    double sum = 0.0, sumsq = 0.0;
    for (double x : rates) {
        if (x < 0.0) throw std::invalid_argument("rates must be nonnegative");
        sum += x;
        sumsq += x * x;
    }
    if (sumsq == 0.0) return std::nullopt;
    return (sum * sum) / (static_cast<double>(rates.size()) * sumsq);
}

double efficiency(const SimTrace& trace, double t0, double t1) {
    if (!(t1 > t0)) throw std::invalid_argument("empty measurement window");
    double delivered = 0.0;
    for (int i = 0; i < trace.n_flows; ++i)
        delivered += delivered_in_window(trace, i, t0, t1);
    // The sampled window can capture one extra packet at each edge; clamp so a
    // fully busy link reads exactly 1.
    return std::clamp(delivered / (trace.capacity_C * (t1 - t0)), 0.0, 1.0);
}

std::vector<double> per_flow_rates(const SimTrace& trace, double t0, double t1) {
    if (!(t1 > t0)) throw std::invalid_argument("empty measurement window");
    std::vector<double> rates;
    rates.reserve(static_cast<std::size_t>(trace.n_flows));
    for (int i = 0; i < trace.n_flows; ++i) {
        double active0 = std::max(t0, trace.flow_start[static_cast<std::size_t>(i)]);
        double span = t1 - active0;
        if (span <= 0.0) {
            rates.push_back(0.0);
            continue;
        }
        rates.push_back(delivered_in_window(trace, i, active0, t1) / span);
    }
    return rates;
}

std::vector<std::pair<double, double>> jain_short_term(const SimTrace& trace,
                                                       double window_len,
                                                       double stride) {
    if (!(window_len > 0.0) || !(stride > 0.0))
        throw std::invalid_argument("window_len and stride must be > 0");
    if (window_len > trace.duration + 1e-9)
        throw std::invalid_argument("window_len exceeds trace duration");
    std::vector<std::pair<double, double>> out;
    for (double t = 0.0; t + window_len <= trace.duration + 1e-9; t += stride) {
        std::vector<double> rates;
        for (int i = 0; i < trace.n_flows; ++i) {
            if (trace.flow_start[static_cast<std::size_t>(i)] > t + 1e-9) continue;
            rates.push_back(delivered_in_window(trace, i, t, t + window_len) / window_len);
        }
        if (rates.empty()) continue;
        if (auto f = jain(rates)) out.emplace_back(t, *f);
    }
    return out;
}

MetricsReport compute_metrics(const SimTrace& trace) {
    MetricsReport report;
    report.n_flows = trace.n_flows;
    if (trace.duration <= 0.0 || trace.times.empty()) return report;

    double last_start = 0.0;
    for (double s : trace.flow_start) last_start = std::max(last_start, s);
    double t0 = std::min(last_start, trace.duration - trace.sample_interval);

    report.eta = efficiency(trace, t0, trace.duration);
    report.per_flow_rate = per_flow_rates(trace, t0, trace.duration);
    report.jain_long = jain(report.per_flow_rate);
    double window = std::min(5.0, trace.duration);
    report.jain_short = jain_short_term(trace, window, 1.0);
    return report;
}

MetricStats aggregate(std::span<const MetricsReport> reports) {
    if (reports.empty()) throw std::invalid_argument("aggregate needs at least one report");
    MetricStats st;
    st.count = static_cast<int>(reports.size());
    double jsum = 0.0;
    int jcount = 0;
    for (const auto& r : reports) {
        st.eta_mean += r.eta;
        if (r.jain_long) {
            jsum += *r.jain_long;
            jcount++;
        }
    }
    st.eta_mean /= static_cast<double>(st.count);
    st.jain_mean = jcount > 0 ? jsum / jcount : 0.0;
    if (st.count > 1) {
        double acc = 0.0;
        for (const auto& r : reports) acc += (r.eta - st.eta_mean) * (r.eta - st.eta_mean);
        st.eta_var = acc / static_cast<double>(st.count - 1);
    }
    if (jcount > 1) {
        double acc = 0.0;
        for (const auto& r : reports)
            if (r.jain_long) acc += (*r.jain_long - st.jain_mean) * (*r.jain_long - st.jain_mean);
        st.jain_var = acc / static_cast<double>(jcount - 1);
    }
    return st;
}

}  // namespace ledbatsim
