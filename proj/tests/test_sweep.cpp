#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "ledbatsim/sweep.hpp"

using namespace ledbatsim;

namespace {

SweepSpec small_spec() {
    SweepSpec spec;
    spec.parameter = SweepSpec::Parameter::DropProb;
    spec.values = {1e-3, 1e-2};
    spec.replications = 3;
    spec.n_flows = 2;
    spec.base.duration = 20.0;
    spec.base.seed = 11;
    return spec;
}

}  // namespace

TEST_CASE("spec validation") {
    SweepSpec spec = small_spec();
    CHECK_NOTHROW(spec.validate());
    spec.values.clear();
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = small_spec();
    spec.replications = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = small_spec();
    spec.parameter = SweepSpec::Parameter::NFlows;
    spec.values = {2.5};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("cell seeds are pure functions of their coordinates") {
    auto spec = small_spec();
    CHECK(cell_seed(spec, 1e-3, 0) == cell_seed(spec, 1e-3, 0));
    CHECK(cell_seed(spec, 1e-3, 0) != cell_seed(spec, 1e-3, 1));
    CHECK(cell_seed(spec, 1e-3, 0) != cell_seed(spec, 1e-2, 0));
    auto other = spec;
    other.base.seed = 12;
    CHECK(cell_seed(spec, 1e-3, 0) != cell_seed(other, 1e-3, 0));
}

TEST_CASE("materialized cells apply the swept parameter") {
    auto spec = small_spec();
    auto sc = materialize_cell(spec, 1e-3, 0);
    CHECK(sc.ctrl.variant == VariantMode::RandomDrop);
    CHECK(sc.ctrl.drop_prob_p == 1e-3);
    CHECK(sc.flows.size() == 2);
    CHECK(sc.seed == cell_seed(spec, 1e-3, 0));

    spec.parameter = SweepSpec::Parameter::Beta;
    spec.values = {0.6};
    sc = materialize_cell(spec, 0.6, 0);
    CHECK(sc.ctrl.variant == VariantMode::MultiplicativeDecrease);
    CHECK(sc.ctrl.beta == 0.6);

    spec.parameter = SweepSpec::Parameter::NFlows;
    spec.values = {5};
    sc = materialize_cell(spec, 5, 0);
    CHECK(sc.flows.size() == 5);
}

TEST_CASE("fixed-gap arrivals sit near the grid, uniform arrivals in range") {
    auto spec = small_spec();
    spec.gap = 5.0;
    for (int rep = 0; rep < 10; ++rep) {
        auto sc = materialize_cell(spec, 1e-3, rep);
        REQUIRE(sc.flows.size() == 2);
        CHECK(sc.flows[0].start_time == 0.0);
        CHECK(std::abs(sc.flows[1].start_time - 5.0) <= spec.start_jitter);
    }

    spec.arrival = SweepSpec::Arrival::UniformRandom;
    spec.t_max = 15.0;
    for (int rep = 0; rep < 10; ++rep) {
        auto sc = materialize_cell(spec, 1e-3, rep);
        double prev = 0.0;
        for (const auto& f : sc.flows) {
            CHECK(f.start_time >= prev);  // sorted
            CHECK(f.start_time <= spec.t_max);
            prev = f.start_time;
        }
    }
}

TEST_CASE("re-materializing a cell reproduces it exactly") {
    auto spec = small_spec();
    spec.arrival = SweepSpec::Arrival::UniformRandom;
    auto a = materialize_cell(spec, 1e-2, 2);
    auto b = materialize_cell(spec, 1e-2, 2);
    REQUIRE(a.flows.size() == b.flows.size());
    for (std::size_t i = 0; i < a.flows.size(); ++i)
        CHECK(a.flows[i].start_time == b.flows[i].start_time);
    CHECK(a.seed == b.seed);
}

TEST_CASE("parallel execution matches serial exactly") {
    auto spec = small_spec();
    auto serial = run_sweep(spec, 1);
    auto parallel = run_sweep(spec, 4);
    REQUIRE(serial.cells.size() == parallel.cells.size());
    for (std::size_t k = 0; k < serial.cells.size(); ++k) {
        CHECK(serial.cells[k].scenario_id == parallel.cells[k].scenario_id);
        CHECK(serial.cells[k].seed == parallel.cells[k].seed);
        CHECK(serial.cells[k].report.eta == parallel.cells[k].report.eta);
        CHECK(serial.cells[k].report.jain_long == parallel.cells[k].report.jain_long);
    }
    REQUIRE(serial.aggregates.size() == parallel.aggregates.size());
    for (std::size_t k = 0; k < serial.aggregates.size(); ++k) {
        CHECK(serial.aggregates[k].stats.eta_mean == parallel.aggregates[k].stats.eta_mean);
        CHECK(serial.aggregates[k].stats.jain_mean == parallel.aggregates[k].stats.jain_mean);
    }
}

TEST_CASE("aggregates equal a recomputation from the cells") {
    auto spec = small_spec();
    auto result = run_sweep(spec, 2);
    for (const auto& agg : result.aggregates) {
        std::vector<MetricsReport> reports;
        for (const auto& c : result.cells)
            if (c.value == agg.value) reports.push_back(c.report);
        auto st = aggregate(reports);
        CHECK(agg.stats.eta_mean == st.eta_mean);
        CHECK(agg.stats.eta_var == st.eta_var);
        CHECK(agg.stats.jain_mean == st.jain_mean);
        CHECK(agg.stats.jain_var == st.jain_var);
    }
}
