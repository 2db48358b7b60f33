#pragma once

#include <string>
#include <vector>

#include "gridprobe/episode.hpp"

namespace gridprobe {

// Binary dataset container. Layout, all integers little-endian:
//   magic "GPB1" | u32 version | f64 sample_rate | u32 channels | u32 episodes
// followed by one record per episode:
//   u64 episode_id | u32 fault_type | u32 faulted_line
//   f64 location_frac | f64 t_inception | f64 t_clearing | u64 seed
//   f64 line_length_km[4] | f64 load_level | f64 source_impedance | u64 noise_seed
//   u32 rows | u32 cols | f32 samples[rows*cols] row-major
void write_dataset(const std::string& path, const std::vector<Episode>& episodes);

std::vector<Episode> read_dataset(const std::string& path);

// CSV with one row per episode:
// episode_id,fault_type,line,loc,t_inception,t_clearing,seed
void write_sidecar(const std::string& path, const std::vector<Episode>& episodes);

}  // namespace gridprobe
