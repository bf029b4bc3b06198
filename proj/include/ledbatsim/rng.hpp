#pragma once

#include <cstdint>

namespace ledbatsim {

// splitmix64: used to derive independent seed streams from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-flow stream: adding a flow must not perturb the draws of other flows.
inline std::uint64_t flow_seed(std::uint64_t scenario_seed, int flow_id) {
    return splitmix64(scenario_seed ^ splitmix64(0x9e3779b9ULL + static_cast<std::uint64_t>(flow_id)));
}

// Replication seed: pure function of (master seed, parameter value bits, replication index).
inline std::uint64_t replication_seed(std::uint64_t master_seed,
                                      std::uint64_t value_bits,
                                      std::uint64_t replication) {
    return splitmix64(master_seed ^ splitmix64(value_bits) ^ splitmix64(replication * 0x2545f4914f6cdd1dULL));
}

}  // namespace ledbatsim
