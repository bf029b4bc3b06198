#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ledbatsim/config.hpp"
#include "ledbatsim/csvio.hpp"
#include "ledbatsim/fluid.hpp"
#include "ledbatsim/metrics.hpp"
#include "ledbatsim/netsim.hpp"
#include "ledbatsim/sweep.hpp"
#include "presets_gen.hpp"
#include "svgplot.hpp"

namespace fs = std::filesystem;
using namespace ledbatsim;

namespace {

ConfigMap load_input(const std::string& config_path, const std::string& preset) {
    if (!config_path.empty() && !preset.empty())
        throw std::runtime_error("give either --config or --preset, not both");
    if (!config_path.empty()) return ConfigMap::load(config_path);
    if (!preset.empty()) {
        auto it = presets::kPresets.find(preset);
        if (it == presets::kPresets.end()) {
            std::string names;
            for (const auto& [name, text] : presets::kPresets)
                names += (names.empty() ? "" : ", ") + name;
            throw std::runtime_error("unknown preset '" + preset + "' (available: " + names + ")");
        }
        return ConfigMap::parse(it->second);
    }
    throw std::runtime_error("one of --config or --preset is required");
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string param_string(const ControllerConfig& ctrl) {
    if (ctrl.variant == VariantMode::RandomDrop) return format_double(ctrl.drop_prob_p);
    if (ctrl.variant == VariantMode::MultiplicativeDecrease) return format_double(ctrl.beta);
    return "";
}

std::string metrics_csv_row(const std::string& scenario_id, const std::string& variant,
                            const std::string& param, std::uint64_t seed,
                            const MetricsReport& report) {
    std::string row = scenario_id + "," + variant + "," + param + "," + std::to_string(seed) + ",";
    append_double(row, report.eta);
    row += ",";
    if (report.jain_long) append_double(row, *report.jain_long);
    else row += "na";
    row += "\n";
    return row;
}

constexpr const char* kMetricsHeader = "scenario_id,variant,param,seed,eta,jain_long\n";

int cmd_run(const std::string& config_path, const std::string& preset,
            std::optional<std::uint64_t> seed, const std::string& out_dir) {
    ConfigMap cfg = load_input(config_path, preset);
    if (is_sweep_config(cfg))
        throw std::runtime_error("this is a sweep config; use the 'sweep' subcommand");
    Scenario sc = scenario_from_config(cfg);
    if (seed) sc.seed = *seed;

    SimTrace trace = run(sc);
    MetricsReport report = compute_metrics(trace);

    std::string id = preset.empty() ? fs::path(config_path).stem().string() : preset;
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "trace.csv", trace_csv(trace));
        write_file(fs::path(out_dir) / "events.csv", events_csv(trace));
        write_file(fs::path(out_dir) / "metrics.csv",
                   kMetricsHeader + metrics_csv_row(id, variant_name(sc.ctrl.variant),
                                                    param_string(sc.ctrl), sc.seed, report));
        write_file(fs::path(out_dir) / "manifest.txt", scenario_manifest(sc));
    }
    std::cout << "scenario: " << id << "\n"
              << "flows: " << trace.n_flows << ", duration: " << format_double(trace.duration)
              << " s\n"
              << "eta: " << format_double(report.eta) << "\n"
              << "jain_long: " << (report.jain_long ? format_double(*report.jain_long) : "na")
              << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& preset,
              std::optional<std::uint64_t> seed, std::optional<int> reps,
              const std::string& out_dir, int jobs) {
    ConfigMap cfg = load_input(config_path, preset);
    if (!is_sweep_config(cfg))
        throw std::runtime_error("this is a scenario config; use the 'run' subcommand");
    SweepSpec spec = sweep_from_config(cfg);
    if (seed) spec.base.seed = *seed;
    if (reps) spec.replications = *reps;

    SweepResult result = run_sweep(spec, jobs);

    std::string per_run = kMetricsHeader;
    const char* variant = variant_name(
        spec.parameter == SweepSpec::Parameter::DropProb ? VariantMode::RandomDrop
        : spec.parameter == SweepSpec::Parameter::Beta   ? VariantMode::MultiplicativeDecrease
                                                         : spec.base.ctrl.variant);
    for (const auto& cell : result.cells)
        per_run += metrics_csv_row(cell.scenario_id, variant, format_double(cell.value),
                                   cell.seed, cell.report);

    std::string agg = "parameter,value,eta_mean,eta_var,jain_mean,jain_var\n";
    for (const auto& a : result.aggregates) {
        agg += std::string(sweep_parameter_name(spec.parameter)) + ",";
        append_double(agg, a.value);
        agg += ",";
        append_double(agg, a.stats.eta_mean);
        agg += ",";
        append_double(agg, a.stats.eta_var);
        agg += ",";
        append_double(agg, a.stats.jain_mean);
        agg += ",";
        append_double(agg, a.stats.jain_var);
        agg += "\n";
    }

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "per_run.csv", per_run);
        write_file(fs::path(out_dir) / "aggregate.csv", agg);
        write_file(fs::path(out_dir) / "manifest.txt", sweep_manifest(spec));
    }
    std::cout << agg;
    return 0;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing input: " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

int cmd_plotdata(const std::string& in_dir, const std::string& out_dir, bool emit_svg) {
    fs::create_directories(out_dir);
    if (fs::exists(fs::path(in_dir) / "trace.csv")) {
        auto rows = read_csv(fs::path(in_dir) / "trace.csv");
        // t,flow_id,cwnd,rate,queue -> wide cwnd table + queue table
        std::map<double, std::map<int, double>> cwnd;
        std::map<double, double> queue;
        int n_flows = 0;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            double t = std::stod(rows[r][0]);
            int flow = std::stoi(rows[r][1]);
            n_flows = std::max(n_flows, flow + 1);
            cwnd[t][flow] = std::stod(rows[r][2]);
            queue[t] = std::stod(rows[r][4]);
        }
        std::string cwnd_csv = "t";
        for (int i = 0; i < n_flows; ++i) cwnd_csv += ",cwnd_flow" + std::to_string(i);
        cwnd_csv += "\n";
        for (const auto& [t, per_flow] : cwnd) {
            append_double(cwnd_csv, t);
            for (int i = 0; i < n_flows; ++i) {
                cwnd_csv += ",";
                auto it = per_flow.find(i);
                append_double(cwnd_csv, it == per_flow.end() ? 0.0 : it->second);
            }
            cwnd_csv += "\n";
        }
        std::string queue_csv = "t,queue_pkts\n";
        for (const auto& [t, q] : queue) {
            append_double(queue_csv, t);
            queue_csv += ",";
            append_double(queue_csv, q);
            queue_csv += "\n";
        }
        write_file(fs::path(out_dir) / "cwnd.csv", cwnd_csv);
        write_file(fs::path(out_dir) / "queue.csv", queue_csv);
        if (emit_svg) {
            std::vector<svg::Series> cwnd_series(static_cast<std::size_t>(n_flows));
            svg::Series queue_series{"queue", {}, {}};
            for (int i = 0; i < n_flows; ++i)
                cwnd_series[static_cast<std::size_t>(i)].label = "flow " + std::to_string(i);
            for (const auto& [t, per_flow] : cwnd)
                for (const auto& [flow, w] : per_flow) {
                    cwnd_series[static_cast<std::size_t>(flow)].x.push_back(t);
                    cwnd_series[static_cast<std::size_t>(flow)].y.push_back(w);
                }
            for (const auto& [t, q] : queue) {
                queue_series.x.push_back(t);
                queue_series.y.push_back(q);
            }
            write_file(fs::path(out_dir) / "cwnd.svg",
                       svg::line_chart(cwnd_series, "time [s]", "cwnd [packets]"));
            write_file(fs::path(out_dir) / "queue.svg",
                       svg::line_chart({queue_series}, "time [s]", "queue [packets]"));
        }
        std::cout << "wrote cwnd.csv and queue.csv to " << out_dir << "\n";
        return 0;
    }
    if (fs::exists(fs::path(in_dir) / "aggregate.csv")) {
        auto rows = read_csv(fs::path(in_dir) / "aggregate.csv");
        if (rows.size() < 2) throw std::runtime_error("aggregate.csv has no data rows");
        std::string param = rows[1][0];
        bool beta_axis = param == "beta";
        std::string x_name = beta_axis ? "one_minus_beta" : (param == "drop_prob_p" ? "p" : "n");
        std::string out = x_name + ",eta_mean,eta_var,F_mean,F_var\n";
        svg::Series eta{"efficiency", {}, {}}, fairness{"Jain F", {}, {}};
        for (std::size_t r = 1; r < rows.size(); ++r) {
            double x = std::stod(rows[r][1]);
            if (beta_axis) x = 1.0 - x;  // reported as 1-beta
            append_double(out, x);
            for (int c = 2; c <= 5; ++c) out += "," + rows[r][c];
            out += "\n";
            eta.x.push_back(x);
            eta.y.push_back(std::stod(rows[r][2]));
            fairness.x.push_back(x);
            fairness.y.push_back(std::stod(rows[r][4]));
        }
        write_file(fs::path(out_dir) / "metric_vs_param.csv", out);
        if (emit_svg)
            write_file(fs::path(out_dir) / "metrics.svg",
                       svg::line_chart({eta, fairness}, x_name, "metric",
                                       param == "drop_prob_p"));
        std::cout << "wrote metric_vs_param.csv to " << out_dir << "\n";
        return 0;
    }
    throw std::runtime_error("no trace.csv or aggregate.csv under " + in_dir);
}

int cmd_fluid(const std::string& config_path, double t_end, const std::string& out_dir) {
    ConfigMap cfg = ConfigMap::load(config_path);
    FluidSystem sys = fluid_from_config(cfg);
    PropositionVerdict verdict = check_proposition(sys, t_end);
    std::cout << verdict_text(verdict);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        FluidTrace trace = integrate(sys, t_end);
        write_file(fs::path(out_dir) / "fluid_trace.csv", fluid_trace_csv(sys, trace));
        write_file(fs::path(out_dir) / "verdict.txt", verdict_text(verdict));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LEDBAT fairness simulator and experiment harness"};
    app.require_subcommand(1);

    std::string config_path, preset, out_dir, in_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
    int jobs = 1;
    double t_end = 60.0;
    bool emit_svg = false;

    auto* run_cmd = app.add_subcommand("run", "run one scenario and emit trace/metrics");
    run_cmd->add_option("--config", config_path, "scenario config file");
    run_cmd->add_option("--preset", preset, "built-in scenario name (e.g. fig1-two-flow)");
    run_cmd->add_option("--seed", seed, "override the scenario seed");
    run_cmd->add_option("--out", out_dir, "output directory");

    auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep with replications");
    sweep_cmd->add_option("--config", config_path, "sweep config file");
    sweep_cmd->add_option("--preset", preset, "built-in sweep name (e.g. fig3-psweep)");
    sweep_cmd->add_option("--seed", seed, "override the master seed");
    sweep_cmd->add_option("--reps", reps, "override the replication count");
    sweep_cmd->add_option("--jobs", jobs, "worker threads");
    sweep_cmd->add_option("--out", out_dir, "output directory");

    auto* plot_cmd = app.add_subcommand("plotdata", "turn run/sweep output into figure tables");
    plot_cmd->add_option("--in", in_dir, "run or sweep output directory")->required();
    plot_cmd->add_option("--out", out_dir, "output directory")->required();
    plot_cmd->add_flag("--svg", emit_svg, "also emit static SVG charts");

    auto* fluid_cmd = app.add_subcommand("fluid", "fluid-model unfairness check");
    fluid_cmd->add_option("--config", config_path, "fluid system config file")->required();
    fluid_cmd->add_option("--t-end", t_end, "integration horizon, seconds");
    fluid_cmd->add_option("--out", out_dir, "output directory for the fluid trace");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(config_path, preset, seed, out_dir);
        if (sweep_cmd->parsed()) return cmd_sweep(config_path, preset, seed, reps, out_dir, jobs);
        if (plot_cmd->parsed()) return cmd_plotdata(in_dir, out_dir, emit_svg);
        if (fluid_cmd->parsed()) return cmd_fluid(config_path, t_end, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
