#include "gridprobe/dataset_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "gridprobe/binio.hpp"
#include "gridprobe/fault_types.hpp"

namespace gridprobe {

namespace {

constexpr char kMagic[4] = {'G', 'P', 'B', '1'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void write_dataset(const std::string& path, const std::vector<Episode>& episodes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open dataset file for writing: " + path);

    out.write(kMagic, 4);
    binio::put_u32(out, kVersion);
    binio::put_f64(out, episodes.empty() ? 0.0 : episodes.front().sample_rate_hz);
    binio::put_u32(out, 48);
    binio::put_u32(out, static_cast<std::uint32_t>(episodes.size()));

    for (const Episode& ep : episodes) {
        binio::put_u64(out, ep.episode_id);
        binio::put_u32(out, static_cast<std::uint32_t>(ep.fault_type));
        binio::put_u32(out, static_cast<std::uint32_t>(ep.faulted_line));
        binio::put_f64(out, ep.location_frac);
        binio::put_f64(out, ep.t_inception);
        binio::put_f64(out, ep.t_clearing);
        binio::put_u64(out, ep.seed);
        for (double len : ep.randomization.line_length_km) binio::put_f64(out, len);
        binio::put_f64(out, ep.randomization.load_level);
        binio::put_f64(out, ep.randomization.source_impedance);
        binio::put_u64(out, ep.randomization.noise_seed);
        binio::put_u32(out, static_cast<std::uint32_t>(ep.signals.rows));
        binio::put_u32(out, static_cast<std::uint32_t>(ep.signals.cols));
        // bulk sample write; this tool targets little-endian hosts and the
        // reader below makes the same assumption
        out.write(reinterpret_cast<const char*>(ep.signals.data.data()),
                  static_cast<std::streamsize>(ep.signals.data.size() * sizeof(float)));
    }
    if (!out) throw std::runtime_error("write failed for dataset file: " + path);
}

std::vector<Episode> read_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not a GPB1 dataset file: " + path);
    const std::uint32_t version = binio::get_u32(in);
    if (version != kVersion)
        throw std::runtime_error("unsupported GPB1 version " + std::to_string(version));

    const double sample_rate = binio::get_f64(in);
    const std::uint32_t channels = binio::get_u32(in);
    const std::uint32_t count = binio::get_u32(in);
    if (channels != 48) throw std::runtime_error("unexpected channel count in dataset header");

    std::vector<Episode> episodes;
    episodes.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        Episode ep;
        ep.sample_rate_hz = sample_rate;
        ep.episode_id = binio::get_u64(in);
        ep.fault_type = fault_type_from_index(static_cast<int>(binio::get_u32(in)));
        ep.faulted_line = static_cast<int>(binio::get_u32(in));
        ep.location_frac = binio::get_f64(in);
        ep.t_inception = binio::get_f64(in);
        ep.t_clearing = binio::get_f64(in);
        ep.seed = binio::get_u64(in);
        for (double& len : ep.randomization.line_length_km) len = binio::get_f64(in);
        ep.randomization.load_level = binio::get_f64(in);
        ep.randomization.source_impedance = binio::get_f64(in);
        ep.randomization.noise_seed = binio::get_u64(in);
        const int rows = static_cast<int>(binio::get_u32(in));
        const int cols = static_cast<int>(binio::get_u32(in));
        if (rows != 48 || cols <= 0)
            throw std::runtime_error("corrupt episode record in dataset file");
        ep.signals = SignalMatrix(rows, cols);
        in.read(reinterpret_cast<char*>(ep.signals.data.data()),
                static_cast<std::streamsize>(ep.signals.data.size() * sizeof(float)));
        if (!in) throw std::runtime_error("truncated dataset file: " + path);
        episodes.push_back(std::move(ep));
    }
    return episodes;
}

void write_sidecar(const std::string& path, const std::vector<Episode>& episodes) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open sidecar file for writing: " + path);
    out << "episode_id,fault_type,line,loc,t_inception,t_clearing,seed\n";
    char buf[160];
    for (const Episode& ep : episodes) {
        const std::string name(fault_type_name(ep.fault_type));
        std::snprintf(buf, sizeof(buf), "%llu,%s,%d,%.10g,%.10g,%.10g,%llu\n",
                      static_cast<unsigned long long>(ep.episode_id), name.c_str(),
                      ep.faulted_line, ep.location_frac, ep.t_inception, ep.t_clearing,
                      static_cast<unsigned long long>(ep.seed));
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed for sidecar file: " + path);
}

}  // namespace gridprobe
