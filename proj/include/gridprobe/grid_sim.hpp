#pragma once

#include <cstdint>
#include <vector>

#include "gridprobe/channel_layout.hpp"
#include "gridprobe/episode.hpp"
#include "gridprobe/grid_config.hpp"

namespace gridprobe {

// Analytic short-circuit waveform generator. Pre-fault state is a clean
// 50 Hz sinusoid per channel; at inception the faulted phases of the faulted
// line's relays carry the classic short-circuit current with a decaying DC
// offset, bus voltages sag by a voltage divider in electrical distance to the
// fault, and relays away from the faulted line see an attenuated echo of the
// disturbance. |V|/|I| at a faulted-line relay is proportional to the
// impedance between relay and fault, which is what makes localization
// learnable from the signals.
Episode synthesize_episode(const GridConfig& cfg, const ChannelLayout& layout,
                           FaultType fault, int line, double location_frac,
                           std::uint64_t seed);

// Deterministic per-episode seed stream; episode i of a dataset is fully
// defined by (master_seed, i) regardless of generation order.
std::uint64_t episode_seed(std::uint64_t master_seed, std::uint64_t episode_index);

std::vector<Episode> generate_dataset(const GridConfig& cfg, std::size_t n_episodes,
                                      std::uint64_t master_seed, int jobs = 1);

// Electrical distance (per-unit impedance) from each substation bus to the
// fault point, through healthy paths. Exposed for tests.
std::array<double, 3> bus_fault_distances(const ChannelLayout& layout,
                                          const std::array<double, 4>& line_impedance,
                                          int faulted_line, double location_frac);

}  // namespace gridprobe
