#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace spanmack {

/// Runtime knobs. A fixed seed makes every run fully deterministic; the
/// group-order limit guards the exhaustive searches at the input boundary.
/// SPANMACK_MAX_ORDER in the environment overrides the configured limit.
struct Config {
    int max_group_order = 24;
    int window_group_order = 6;
    int window_set_size = 6;
    int window_orbits = 3;
    int sample_count = 30;
    std::uint64_t seed = 0;
    bool rational_coefficients = true; // false: insist on integer output

    static Config from_env();

    void validate() const {
        if (max_group_order <= 0 || window_group_order <= 0 || window_set_size <= 0 ||
            window_orbits <= 0 || sample_count <= 0)
            throw std::invalid_argument("Config: bounds must be positive");
    }
};

inline Config Config::from_env() {
    Config base;
    if (const char* v = std::getenv("SPANMACK_MAX_ORDER")) {
        int n = std::atoi(v);
        if (n <= 0) throw std::invalid_argument("SPANMACK_MAX_ORDER must be positive");
        base.max_group_order = n;
    }
    return base;
}

} // namespace spanmack
