#include "ledbatsim/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ledbatsim/csvio.hpp"

namespace ledbatsim {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': not a number: '" + text + "'");
    }
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        if (cfg.values_.count(key))
            throw std::invalid_argument("config key '" + key + "' given twice");
        cfg.values_[key] = value;
    }
    return cfg;
}

ConfigMap ConfigMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

bool ConfigMap::has(const std::string& key) const { return values_.count(key) > 0; }

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
    consumed_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    consumed_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(key, it->second);
}

std::uint64_t ConfigMap::get_u64(const std::string& key, std::uint64_t fallback) const {
    consumed_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return std::stoull(it->second);
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': not an integer: '" + it->second + "'");
    }
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
    consumed_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return std::stoi(it->second);
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': not an integer: '" + it->second + "'");
    }
}

std::vector<double> ConfigMap::get_double_list(const std::string& key) const {
    consumed_.insert(key);
    auto it = values_.find(key);
    std::vector<double> out;
    if (it == values_.end()) return out;
    std::istringstream in(it->second);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(key, item));
    }
    return out;
}

void ConfigMap::reject_unknown_keys() const {
    std::string unknown;
    for (const auto& [key, value] : values_)
        if (!consumed_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
    if (!unknown.empty())
        throw std::invalid_argument("unknown config key(s): " + unknown);
}

VariantMode variant_from_string(const std::string& name) {
    if (name == "plain") return VariantMode::Plain;
    if (name == "random-pacing") return VariantMode::RandomPacing;
    if (name == "slow-start") return VariantMode::SlowStart;
    if (name == "random-drop") return VariantMode::RandomDrop;
    if (name == "mult-decrease") return VariantMode::MultiplicativeDecrease;
    throw std::invalid_argument("config key 'variant': unknown variant '" + name + "'");
}

static ControllerConfig controller_from_config(const ConfigMap& cfg) {
    ControllerConfig ctrl;
    ctrl.variant = variant_from_string(cfg.get_string("variant", "plain"));
    ctrl.target_tau = cfg.get_double("target_tau", ctrl.target_tau);
    ctrl.gain = cfg.get_double("gain", ctrl.gain);
    ctrl.drop_prob_p = cfg.get_double("drop_prob_p", 0.0);
    ctrl.beta = cfg.get_double("beta", 0.0);
    ctrl.init_cwnd = cfg.get_double("init_cwnd", ctrl.init_cwnd);
    ctrl.min_cwnd = cfg.get_double("min_cwnd", ctrl.min_cwnd);
    ctrl.loss_backoff = cfg.get_double("loss_backoff", ctrl.loss_backoff);
    return ctrl;
}

Scenario scenario_from_config(const ConfigMap& cfg) {
    Scenario sc;
    sc.capacity_C = cfg.get_double("capacity_C", sc.capacity_C);
    sc.buffer_B = cfg.get_double("buffer_B", sc.buffer_B);
    sc.prop_delay = cfg.get_double("prop_delay", sc.prop_delay);
    sc.packet_size = cfg.get_double("packet_size", sc.packet_size);
    sc.duration = cfg.get_double("duration", sc.duration);
    sc.seed = cfg.get_u64("seed", sc.seed);
    sc.sample_interval = cfg.get_double("sample_interval", sc.sample_interval);
    sc.receiver_clock_offset = cfg.get_double("receiver_clock_offset", 0.0);
    sc.ctrl = controller_from_config(cfg);

    auto starts = cfg.get_double_list("flow_starts");
    if (starts.empty())
        throw std::invalid_argument("config key 'flow_starts': at least one flow is required");
    auto init_cwnds = cfg.get_double_list("flow_initial_cwnds");
    if (!init_cwnds.empty() && init_cwnds.size() != starts.size())
        throw std::invalid_argument("config key 'flow_initial_cwnds': length must match flow_starts");
    for (std::size_t i = 0; i < starts.size(); ++i)
        sc.flows.push_back({static_cast<int>(i), starts[i],
                            init_cwnds.empty() ? 0.0 : init_cwnds[i]});

    cfg.reject_unknown_keys();
    sc.validate();
    return sc;
}

bool is_sweep_config(const ConfigMap& cfg) { return cfg.has("parameter"); }

SweepSpec sweep_from_config(const ConfigMap& cfg) {
    SweepSpec spec;
    std::string param = cfg.get_string("parameter", "");
    if (param == "drop_prob_p") spec.parameter = SweepSpec::Parameter::DropProb;
    else if (param == "beta") spec.parameter = SweepSpec::Parameter::Beta;
    else if (param == "n_flows") spec.parameter = SweepSpec::Parameter::NFlows;
    else throw std::invalid_argument("config key 'parameter': must be drop_prob_p, beta or n_flows");

    spec.values = cfg.get_double_list("values");
    spec.replications = cfg.get_int("replications", 1);
    std::string arrival = cfg.get_string("arrival_model", "fixed-gap");
    if (arrival == "fixed-gap") spec.arrival = SweepSpec::Arrival::FixedGap;
    else if (arrival == "uniform-random") spec.arrival = SweepSpec::Arrival::UniformRandom;
    else throw std::invalid_argument("config key 'arrival_model': must be fixed-gap or uniform-random");
    spec.gap = cfg.get_double("gap", spec.gap);
    spec.start_jitter = cfg.get_double("start_jitter", spec.start_jitter);
    spec.t_max = cfg.get_double("t_max", spec.t_max);
    spec.n_flows = cfg.get_int("n_flows", spec.n_flows);

    // The rest of the file is the base scenario; flow placement comes from the
    // arrival model, so no flow_starts key here.
    Scenario base;
    base.capacity_C = cfg.get_double("capacity_C", base.capacity_C);
    base.buffer_B = cfg.get_double("buffer_B", base.buffer_B);
    base.prop_delay = cfg.get_double("prop_delay", base.prop_delay);
    base.packet_size = cfg.get_double("packet_size", base.packet_size);
    base.duration = cfg.get_double("duration", base.duration);
    base.seed = cfg.get_u64("seed", base.seed);
    base.sample_interval = cfg.get_double("sample_interval", base.sample_interval);
    base.ctrl = controller_from_config(cfg);
    spec.base = base;

    cfg.reject_unknown_keys();
    spec.validate();
    return spec;
}

FluidSystem fluid_from_config(const ConfigMap& cfg) {
    FluidSystem sys;
    sys.n_flows = cfg.get_int("n_flows", sys.n_flows);
    sys.rtt_R = cfg.get_double("rtt_R", sys.rtt_R);
    sys.target_tau = cfg.get_double("target_tau", sys.target_tau);
    sys.capacity_C = cfg.get_double("capacity_C", sys.capacity_C);
    sys.buffer_B = cfg.get_double("buffer_B", sys.buffer_B);
    sys.queue0 = cfg.get_double("queue0", sys.queue0);
    sys.t_start = cfg.get_double("t_start", sys.t_start);
    sys.step_h = cfg.get_double("step_h", sys.step_h);

    sys.base_delay_error = cfg.get_double_list("base_delay_errors");
    if (sys.base_delay_error.empty() &&
        cfg.get_string("error_model", "") == "staggered") {
        // e_i = (i-1)*tau: each later arrival absorbs the targets of all
        // earlier flows into its base delay.
        for (int i = 0; i < sys.n_flows; ++i)
            sys.base_delay_error.push_back(i * sys.target_tau);
    }
    sys.windows = cfg.get_double_list("windows");

    cfg.reject_unknown_keys();
    sys.validate();
    return sys;
}

static void kv(std::string& out, const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
}

static void kvd(std::string& out, const std::string& key, double value) {
    kv(out, key, format_double(value));
}

static std::string controller_manifest(const ControllerConfig& ctrl) {
    std::string out;
    kv(out, "variant", variant_name(ctrl.variant));
    kvd(out, "target_tau", ctrl.target_tau);
    kvd(out, "gain", ctrl.effective_gain());
    if (ctrl.variant == VariantMode::RandomDrop) kvd(out, "drop_prob_p", ctrl.drop_prob_p);
    if (ctrl.variant == VariantMode::MultiplicativeDecrease) kvd(out, "beta", ctrl.beta);
    kvd(out, "init_cwnd", ctrl.init_cwnd);
    kvd(out, "min_cwnd", ctrl.min_cwnd);
    kvd(out, "loss_backoff", ctrl.loss_backoff);
    return out;
}

std::string scenario_manifest(const Scenario& sc) {
    std::string out;
    kvd(out, "capacity_C", sc.capacity_C);
    kvd(out, "buffer_B", sc.buffer_B);
    kvd(out, "prop_delay", sc.prop_delay);
    kvd(out, "packet_size", sc.packet_size);
    kvd(out, "duration", sc.duration);
    kv(out, "seed", std::to_string(sc.seed));
    kvd(out, "sample_interval", sc.sample_interval);
    if (sc.receiver_clock_offset != 0.0)
        kvd(out, "receiver_clock_offset", sc.receiver_clock_offset);
    out += controller_manifest(sc.ctrl);
    std::string starts, cwnds;
    bool any_cwnd = false;
    for (const auto& f : sc.flows) {
        if (!starts.empty()) { starts += ","; cwnds += ","; }
        starts += format_double(f.start_time);
        cwnds += format_double(f.initial_cwnd);
        if (f.initial_cwnd > 0.0) any_cwnd = true;
    }
    kv(out, "flow_starts", starts);
    if (any_cwnd) kv(out, "flow_initial_cwnds", cwnds);
    return out;
}

std::string sweep_manifest(const SweepSpec& spec) {
    std::string out;
    kv(out, "parameter", sweep_parameter_name(spec.parameter));
    std::string values;
    for (double v : spec.values) {
        if (!values.empty()) values += ",";
        values += format_double(v);
    }
    kv(out, "values", values);
    kv(out, "replications", std::to_string(spec.replications));
    kv(out, "arrival_model",
       spec.arrival == SweepSpec::Arrival::FixedGap ? "fixed-gap" : "uniform-random");
    if (spec.arrival == SweepSpec::Arrival::FixedGap) {
        kvd(out, "gap", spec.gap);
        kvd(out, "start_jitter", spec.start_jitter);
    } else {
        kvd(out, "t_max", spec.t_max);
    }
    kv(out, "n_flows", std::to_string(spec.n_flows));
    kvd(out, "capacity_C", spec.base.capacity_C);
    kvd(out, "buffer_B", spec.base.buffer_B);
    kvd(out, "prop_delay", spec.base.prop_delay);
    kvd(out, "packet_size", spec.base.packet_size);
    kvd(out, "duration", spec.base.duration);
    kv(out, "seed", std::to_string(spec.base.seed));
    kvd(out, "sample_interval", spec.base.sample_interval);
    out += controller_manifest(spec.base.ctrl);
    return out;
}

}  // namespace ledbatsim
