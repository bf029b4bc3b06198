#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ledbatsim/metrics.hpp"
#include "ledbatsim/netsim.hpp"

namespace ledbatsim {

// Parameter sweep with seeded replications. Flow start times come from the
// arrival model, not from the base scenario's flow list.
struct SweepSpec {
    enum class Parameter { DropProb, Beta, NFlows };
    enum class Arrival { FixedGap, UniformRandom };

    Parameter parameter = Parameter::DropProb;
    std::vector<double> values;
    int replications = 1;
    Arrival arrival = Arrival::FixedGap;
    double gap = 10.0;           // fixed-gap spacing, seconds
    double start_jitter = 0.001; // uniform jitter half-width added after the first flow
    double t_max = 60.0;         // uniform-random start range
    int n_flows = 2;             // flow count when the swept parameter is not n_flows
    Scenario base;               // base.seed is the sweep master seed

    void validate() const;
};

const char* sweep_parameter_name(SweepSpec::Parameter p);

struct SweepCell {
    double value = 0.0;
    int replication = 0;
    std::uint64_t seed = 0;
    std::string scenario_id;
    MetricsReport report;
};

struct SweepAggregate {
    double value = 0.0;
    MetricStats stats;
};

struct SweepResult {
    std::vector<SweepCell> cells;        // ordered by (value index, replication)
    std::vector<SweepAggregate> aggregates;
};

// Fully resolved scenario for one sweep cell; pure function of the spec,
// parameter value and replication index, so any cell can be reproduced alone.
Scenario materialize_cell(const SweepSpec& spec, double value, int replication);

std::uint64_t cell_seed(const SweepSpec& spec, double value, int replication);

// Runs every cell. Output is identical regardless of the worker count.
SweepResult run_sweep(const SweepSpec& spec, int jobs = 1);

}  // namespace ledbatsim
