#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ledbatsim/config.hpp"
#include "ledbatsim/controller.hpp"
#include "ledbatsim/fluid.hpp"
#include "ledbatsim/metrics.hpp"
#include "ledbatsim/netsim.hpp"
#include "ledbatsim/sweep.hpp"

namespace py = pybind11;
using namespace ledbatsim;

PYBIND11_MODULE(_ledbatsim, m) {
    m.doc() = "LEDBAT fairness simulator core";

    py::enum_<VariantMode>(m, "VariantMode")
        .value("Plain", VariantMode::Plain)
        .value("RandomPacing", VariantMode::RandomPacing)
        .value("SlowStart", VariantMode::SlowStart)
        .value("RandomDrop", VariantMode::RandomDrop)
        .value("MultiplicativeDecrease", VariantMode::MultiplicativeDecrease);

    py::class_<ControllerConfig>(m, "ControllerConfig")
        .def(py::init<>())
        .def_readwrite("target_tau", &ControllerConfig::target_tau)
        .def_readwrite("gain", &ControllerConfig::gain)
        .def_readwrite("variant", &ControllerConfig::variant)
        .def_readwrite("drop_prob_p", &ControllerConfig::drop_prob_p)
        .def_readwrite("beta", &ControllerConfig::beta)
        .def_readwrite("init_cwnd", &ControllerConfig::init_cwnd)
        .def_readwrite("min_cwnd", &ControllerConfig::min_cwnd)
        .def_readwrite("loss_backoff", &ControllerConfig::loss_backoff)
        .def("validate", &ControllerConfig::validate);

    py::class_<DelaySample>(m, "DelaySample")
        .def(py::init<>())
        .def_readwrite("one_way_delay", &DelaySample::one_way_delay)
        .def_readwrite("ack_time", &DelaySample::ack_time)
        .def_readwrite("loss_flag", &DelaySample::loss_flag);

    py::class_<Controller>(m, "Controller")
        .def(py::init<const ControllerConfig&, std::uint64_t>(), py::arg("config"), py::arg("seed"))
        .def("on_ack",
             [](Controller& c, double one_way_delay, double ack_time) {
                 auto events = c.on_ack({one_way_delay, ack_time, false});
                 return events.size();
             },
             py::arg("one_way_delay"), py::arg("ack_time"))
        .def("on_loss", [](Controller& c, double now) { return c.on_loss(now).has_value(); })
        .def("pacing_schedule", &Controller::pacing_schedule)
        .def_property_readonly("cwnd", &Controller::cwnd)
        .def_property_readonly("base_delay", &Controller::base_delay)
        .def_property_readonly("rtt_estimate", &Controller::rtt_estimate);

    py::class_<FlowSpec>(m, "FlowSpec")
        .def(py::init<int, double, double>(), py::arg("flow_id"), py::arg("start_time"),
             py::arg("initial_cwnd") = 0.0)
        .def_readwrite("flow_id", &FlowSpec::flow_id)
        .def_readwrite("start_time", &FlowSpec::start_time)
        .def_readwrite("initial_cwnd", &FlowSpec::initial_cwnd);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("capacity_C", &Scenario::capacity_C)
        .def_readwrite("buffer_B", &Scenario::buffer_B)
        .def_readwrite("prop_delay", &Scenario::prop_delay)
        .def_readwrite("packet_size", &Scenario::packet_size)
        .def_readwrite("flows", &Scenario::flows)
        .def_readwrite("duration", &Scenario::duration)
        .def_readwrite("seed", &Scenario::seed)
        .def_readwrite("ctrl", &Scenario::ctrl)
        .def_readwrite("sample_interval", &Scenario::sample_interval)
        .def("validate", &Scenario::validate);

    py::class_<SimTrace>(m, "SimTrace")
        .def_readonly("times", &SimTrace::times)
        .def_readonly("cwnd", &SimTrace::cwnd)
        .def_readonly("rate", &SimTrace::rate)
        .def_readonly("queue", &SimTrace::queue)
        .def_readonly("delivered", &SimTrace::delivered)
        .def_readonly("dropped", &SimTrace::dropped)
        .def_readonly("n_flows", &SimTrace::n_flows)
        .def("to_csv", [](const SimTrace& t) { return trace_csv(t); });

    m.def("run", &run, py::arg("scenario"), "Run one deterministic simulation");
    m.def("staggered_scenario", &staggered_scenario, py::arg("n"), py::arg("gap"), py::arg("base"));
    m.def("scenario_from_config_text",
          [](const std::string& text) { return scenario_from_config(ConfigMap::parse(text)); });

    m.def("jain", [](const std::vector<double>& rates) -> py::object {
        auto f = jain(rates);
        if (!f) return py::none();
        return py::float_(*f);
    });
    m.def("efficiency", &efficiency, py::arg("trace"), py::arg("t0"), py::arg("t1"));
    m.def("per_flow_rates", &per_flow_rates);

    py::class_<MetricsReport>(m, "MetricsReport")
        .def_readonly("eta", &MetricsReport::eta)
        .def_property_readonly("jain_long",
                               [](const MetricsReport& r) -> py::object {
                                   if (!r.jain_long) return py::none();
                                   return py::float_(*r.jain_long);
                               })
        .def_readonly("per_flow_rate", &MetricsReport::per_flow_rate)
        .def_readonly("n_flows", &MetricsReport::n_flows);
    m.def("compute_metrics", &compute_metrics);

    py::class_<FluidSystem>(m, "FluidSystem")
        .def(py::init<>())
        .def_readwrite("n_flows", &FluidSystem::n_flows)
        .def_readwrite("rtt_R", &FluidSystem::rtt_R)
        .def_readwrite("target_tau", &FluidSystem::target_tau)
        .def_readwrite("capacity_C", &FluidSystem::capacity_C)
        .def_readwrite("buffer_B", &FluidSystem::buffer_B)
        .def_readwrite("base_delay_error", &FluidSystem::base_delay_error)
        .def_readwrite("windows", &FluidSystem::windows)
        .def_readwrite("queue0", &FluidSystem::queue0)
        .def_readwrite("step_h", &FluidSystem::step_h);

    py::class_<FluidTrace>(m, "FluidTrace")
        .def_readonly("t", &FluidTrace::t)
        .def_readonly("windows", &FluidTrace::windows)
        .def_readonly("queue", &FluidTrace::queue);

    py::class_<PropositionVerdict>(m, "PropositionVerdict")
        .def_readonly("applicable", &PropositionVerdict::applicable)
        .def_readonly("holds", &PropositionVerdict::holds)
        .def_readonly("t_star", &PropositionVerdict::t_star)
        .def_readonly("min_dmax_after", &PropositionVerdict::min_dmax_after);

    m.def("integrate", &integrate, py::arg("system"), py::arg("t_end"));
    m.def("check_proposition", &check_proposition, py::arg("system"), py::arg("t_end"));
}
