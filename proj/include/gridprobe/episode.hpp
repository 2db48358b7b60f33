#pragma once

#include <array>
#include <cstdint>

#include "gridprobe/fault_types.hpp"
#include "gridprobe/signal_matrix.hpp"

namespace gridprobe {

// Per-episode domain randomization, kept for provenance and stored in the
// dataset container.
struct RandomizationRecord {
    std::array<double, 4> line_length_km{};
    double load_level = 0.0;
    double source_impedance = 0.0;
    std::uint64_t noise_seed = 0;
};

// One simulated 1 s fault case: 48 x 6400 signal matrix plus fault metadata.
struct Episode {
    std::uint64_t episode_id = 0;
    SignalMatrix signals;  // 48 x 6400
    double sample_rate_hz = 6400.0;
    FaultType fault_type = FaultType::NoFault;
    int faulted_line = 0;         // 1..4
    double location_frac = 0.0;   // in [0.01, 0.99], from the terminal-1 end
    double t_inception = 0.0;     // s
    double t_clearing = 0.0;      // s
    std::uint64_t seed = 0;
    RandomizationRecord randomization;

    int sample_count() const { return signals.cols; }
    // throws std::logic_error when a structural invariant is broken
    void validate() const;
};

}  // namespace gridprobe
