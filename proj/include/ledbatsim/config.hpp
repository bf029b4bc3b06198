#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ledbatsim/fluid.hpp"
#include "ledbatsim/netsim.hpp"
#include "ledbatsim/sweep.hpp"

namespace ledbatsim {

// Flat "key = value" text, '#' starts a comment. Used for scenario configs,
// sweep configs and run manifests alike.
class ConfigMap {
  public:
    static ConfigMap parse(const std::string& text);
    static ConfigMap load(const std::string& path);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;  // comma-separated

    // Throws naming every key that was never read.
    void reject_unknown_keys() const;

  private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
};

Scenario scenario_from_config(const ConfigMap& cfg);
SweepSpec sweep_from_config(const ConfigMap& cfg);
FluidSystem fluid_from_config(const ConfigMap& cfg);

// True when the config describes a sweep (has a "parameter" key).
bool is_sweep_config(const ConfigMap& cfg);

VariantMode variant_from_string(const std::string& name);

// Fully resolved parameters in config format, sufficient to reproduce a run.
std::string scenario_manifest(const Scenario& sc);
std::string sweep_manifest(const SweepSpec& spec);

}  // namespace ledbatsim
