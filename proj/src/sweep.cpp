#include "ledbatsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "ledbatsim/csvio.hpp"
#include "ledbatsim/rng.hpp"

namespace ledbatsim {

const char* sweep_parameter_name(SweepSpec::Parameter p) {
    switch (p) {
        case SweepSpec::Parameter::DropProb: return "drop_prob_p";
        case SweepSpec::Parameter::Beta: return "beta";
        case SweepSpec::Parameter::NFlows: return "n_flows";
    }
    return "?";
}

void SweepSpec::validate() const {
    if (values.empty()) throw std::invalid_argument("sweep values must be non-empty");
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (n_flows < 1) throw std::invalid_argument("n_flows must be >= 1");
    if (arrival == Arrival::FixedGap && gap < 0.0)
        throw std::invalid_argument("gap must be >= 0");
    if (arrival == Arrival::UniformRandom && !(t_max >= 0.0))
        throw std::invalid_argument("t_max must be >= 0");
    if (parameter == SweepSpec::Parameter::NFlows)
        for (double v : values)
            if (v < 1.0 || v != std::floor(v))
                throw std::invalid_argument("n_flows values must be positive integers");
}

std::uint64_t cell_seed(const SweepSpec& spec, double value, int replication) {
    std::uint64_t bits = spec.parameter == SweepSpec::Parameter::NFlows
                             ? static_cast<std::uint64_t>(value)
                             : std::bit_cast<std::uint64_t>(value);
    return replication_seed(spec.base.seed, bits, static_cast<std::uint64_t>(replication));
}

Scenario materialize_cell(const SweepSpec& spec, double value, int replication) {
    spec.validate();
    Scenario sc = spec.base;
    int n = spec.n_flows;
    switch (spec.parameter) {
        case SweepSpec::Parameter::DropProb:
            sc.ctrl.variant = VariantMode::RandomDrop;
            sc.ctrl.drop_prob_p = value;
            sc.ctrl.beta = 0.0;
            break;
        case SweepSpec::Parameter::Beta:
            sc.ctrl.variant = VariantMode::MultiplicativeDecrease;
            sc.ctrl.beta = value;
            sc.ctrl.drop_prob_p = 0.0;
            break;
        case SweepSpec::Parameter::NFlows:
            n = static_cast<int>(value);
            break;
    }

    std::uint64_t seed = cell_seed(spec, value, replication);
    sc.seed = seed;
    // Arrival draws come from their own stream so they do not interact with
    // the per-flow controller streams.
    std::mt19937_64 rng(splitmix64(seed ^ 0xa5a5a5a5deadbeefULL));
    std::vector<double> starts(static_cast<std::size_t>(n));
    if (spec.arrival == SweepSpec::Arrival::FixedGap) {
        std::uniform_real_distribution<double> jitter(-spec.start_jitter, spec.start_jitter);
        starts[0] = 0.0;
        for (int i = 1; i < n; ++i)
            starts[static_cast<std::size_t>(i)] = std::max(0.0, spec.gap * i + jitter(rng));
    } else {
        std::uniform_real_distribution<double> unif(0.0, spec.t_max);
        for (auto& s : starts) s = unif(rng);
    }
    std::sort(starts.begin(), starts.end());

    sc.flows.clear();
    for (int i = 0; i < n; ++i)
        sc.flows.push_back({i, starts[static_cast<std::size_t>(i)], 0.0});
    return sc;
}

SweepResult run_sweep(const SweepSpec& spec, int jobs) {
    spec.validate();
    if (jobs < 1) jobs = 1;

    struct CellKey { double value; int rep; };
    std::vector<CellKey> keys;
    for (double v : spec.values)
        for (int r = 0; r < spec.replications; ++r) keys.push_back({v, r});

    SweepResult result;
    result.cells.resize(keys.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t k = next.fetch_add(1);
            if (k >= keys.size()) return;
            const auto& key = keys[k];
            Scenario sc = materialize_cell(spec, key.value, key.rep);
            SimTrace trace = run(sc);
            SweepCell cell;
            cell.value = key.value;
            cell.replication = key.rep;
            cell.seed = sc.seed;
            cell.scenario_id = std::string(sweep_parameter_name(spec.parameter)) + "=" +
                               format_double(key.value) + "/rep" + std::to_string(key.rep);
            cell.report = compute_metrics(trace);
            result.cells[k] = std::move(cell);
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (double v : spec.values) {
        std::vector<MetricsReport> reports;
        for (const auto& c : result.cells)
            if (c.value == v) reports.push_back(c.report);
        result.aggregates.push_back({v, aggregate(reports)});
    }
    return result;
}

}  // namespace ledbatsim
