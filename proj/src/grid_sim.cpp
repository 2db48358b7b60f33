#include "gridprobe/grid_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "gridprobe/rng.hpp"

namespace gridprobe {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
// time constant of the post-inception voltage collapse
constexpr double kVoltageCollapseTau = 0.002;

void check_range(const Range& r, const char* name) {
    if (!(r.lo <= r.hi))
        throw std::invalid_argument(std::string("GridConfig: empty range for ") + name);
}

struct PhaseDrive {
    double coeff = 0.0;  // 0, +1 or -1
    double angle = 0.0;  // driving angle of the fault loop
};

// Fault-loop participation per phase. Phase-phase faults push equal and
// opposite current through the two phases (no zero-sequence); ground faults
// give each faulted phase its own loop, so the phase currents no longer sum
// to zero. That residual is what separates e.g. AB from ABG.
std::array<PhaseDrive, 3> phase_drives(FaultType fault, const std::array<double, 3>& phase_angle,
                                       double theta) {
    std::array<PhaseDrive, 3> d{};
    const PhaseSet ph = faulted_phases(fault);
    const bool ground = involves_ground(fault);
    if (ph.count() == 2 && !ground) {
        int first = -1, second = -1;
        for (int p = 0; p < 3; ++p) {
            if (!ph.has(p)) continue;
            (first < 0 ? first : second) = p;
        }
        const double drive = phase_angle[first] - theta;
        d[first] = {1.0, drive};
        d[second] = {-1.0, drive};
        return d;
    }
    for (int p = 0; p < 3; ++p)
        if (ph.has(p)) d[p] = {1.0, phase_angle[p] - theta};
    return d;
}

}  // namespace

void GridConfig::validate() const {
    check_range(line_length_km, "line_length_km");
    check_range(load_level, "load_level");
    check_range(source_impedance, "source_impedance");
    check_range(fault_duration_s, "fault_duration_s");
    check_range(inception_time_s, "inception_time_s");
    check_range(dc_time_constant_s, "dc_time_constant_s");
    check_range(impedance_angle_rad, "impedance_angle_rad");
    check_range(echo_attenuation, "echo_attenuation");
    if (!(snr_db > 0.0)) throw std::invalid_argument("GridConfig: snr_db must be positive");
    if (!(sample_rate_hz > 0.0) || !(duration_s > 0.0) || !(frequency_hz > 0.0) ||
        !(line_impedance_per_km > 0.0))
        throw std::invalid_argument("GridConfig: rates and impedances must be positive");
}

void Episode::validate() const {
    if (signals.rows != 48 || signals.cols != 6400)
        throw std::logic_error("Episode: signals must be 48 x 6400");
    for (float v : signals.data)
        if (!std::isfinite(v)) throw std::logic_error("Episode: non-finite sample");
    if (fault_type != FaultType::NoFault) {
        if (location_frac < 0.01 || location_frac > 0.99)
            throw std::logic_error("Episode: location_frac out of [0.01, 0.99]");
        if (!(t_inception < t_clearing && t_clearing <= 1.0) || !(t_inception > 0.0))
            throw std::logic_error("Episode: bad fault interval");
    }
}

std::array<double, 3> bus_fault_distances(const ChannelLayout& layout,
                                          const std::array<double, 4>& line_impedance,
                                          int faulted_line, double loc) {
    const auto subs = layout.line_substations(faulted_line);
    const int bus_a = subs[0] - 1;  // terminal-1 side
    const int bus_b = subs[1] - 1;
    const double z_f = line_impedance[faulted_line - 1];

    // impedance between two adjacent buses through healthy lines only
    auto healthy_hop = [&](int s1, int s2) {
        double inv = 0.0;
        bool any = false;
        for (int line = 1; line <= ChannelLayout::kLineCount; ++line) {
            if (line == faulted_line) continue;
            const auto ends = layout.line_substations(line);
            if ((ends[0] - 1 == s1 && ends[1] - 1 == s2) || (ends[0] - 1 == s2 && ends[1] - 1 == s1)) {
                inv += 1.0 / line_impedance[line - 1];
                any = true;
            }
        }
        return any ? 1.0 / inv : 1e9;
    };

    std::array<double, 3> dist;
    dist.fill(1e9);
    dist[bus_a] = std::min(loc * z_f, healthy_hop(bus_a, bus_b) + (1.0 - loc) * z_f);
    dist[bus_b] = std::min((1.0 - loc) * z_f, healthy_hop(bus_a, bus_b) + loc * z_f);
    // settle remaining buses through adjacent ones (3-bus string; one sweep
    // in each direction suffices)
    for (int sweep = 0; sweep < 2; ++sweep) {
        for (int s = 0; s < ChannelLayout::kSubstationCount; ++s) {
            for (int o = 0; o < ChannelLayout::kSubstationCount; ++o) {
                if (o == s) continue;
                const double hop = healthy_hop(s, o);
                if (hop < 1e8) dist[s] = std::min(dist[s], dist[o] + hop);
            }
        }
    }
    return dist;
}

Episode synthesize_episode(const GridConfig& cfg, const ChannelLayout& layout,
                           FaultType fault, int line, double loc, std::uint64_t seed) {
    cfg.validate();
    if (fault == FaultType::NoFault)
        throw std::invalid_argument("synthesize_episode: fault must be a short-circuit type");
    if (line < 1 || line > ChannelLayout::kLineCount)
        throw std::invalid_argument("synthesize_episode: line out of range 1..4");
    if (loc < 0.01 || loc > 0.99)
        throw std::invalid_argument("synthesize_episode: location_frac out of [0.01, 0.99]");

    Rng rng(seed);

    Episode ep;
    ep.seed = seed;
    ep.fault_type = fault;
    ep.faulted_line = line;
    ep.location_frac = loc;
    ep.sample_rate_hz = cfg.sample_rate_hz;

    auto& rec = ep.randomization;
    for (auto& len : rec.line_length_km) len = rng.uniform(cfg.line_length_km.lo, cfg.line_length_km.hi);
    rec.load_level = rng.uniform(cfg.load_level.lo, cfg.load_level.hi);
    rec.source_impedance = rng.uniform(cfg.source_impedance.lo, cfg.source_impedance.hi);

    // inception snaps to the fundamental-cycle grid (6400/50 = 128 samples per
    // cycle) so the fixed-stride windows sample the carrier at four phase
    // offsets instead of a continuum; point-on-wave diversity for the DC
    // offset still comes from the impedance angle draw
    const double cycle_s = 1.0 / cfg.frequency_hz;
    const double t_inc_raw = rng.uniform(cfg.inception_time_s.lo, cfg.inception_time_s.hi);
    ep.t_inception = std::clamp(std::round(t_inc_raw / cycle_s) * cycle_s,
                                cfg.inception_time_s.lo, cfg.inception_time_s.hi);
    const double duration = rng.uniform(cfg.fault_duration_s.lo, cfg.fault_duration_s.hi);
    ep.t_clearing = std::min(cfg.duration_s, ep.t_inception + duration);

    const double tau_dc = rng.uniform(cfg.dc_time_constant_s.lo, cfg.dc_time_constant_s.hi);
    const double theta = rng.uniform(cfg.impedance_angle_rad.lo, cfg.impedance_angle_rad.hi);
    // narrow reference-phase jitter; combined with cycle-aligned inception it
    // keeps the window sampling lattice learnable for small first layers
    const double phi0 = rng.uniform(0.0, 0.15);
    const double pf_angle = rng.uniform(0.1, 0.5);

    // per-substation Thevenin impedance spreads around the recorded base value;
    // the base width confounds current-only distance inference (additive term)
    // while the narrow spread keeps voltage sag ratios usable, and |V|/|I|
    // stays exact either way
    std::array<double, ChannelLayout::kSubstationCount> sub_z_src{};
    for (auto& s : sub_z_src) s = rec.source_impedance * rng.uniform(0.97, 1.03);

    std::array<double, ChannelLayout::kRelayCount> echo{};
    for (auto& a : echo) a = rng.uniform(cfg.echo_attenuation.lo, cfg.echo_attenuation.hi);
    std::array<double, ChannelLayout::kRelayCount> load_jitter{};
    for (auto& j : load_jitter) j = rng.uniform(0.85, 1.15);

    rec.noise_seed = rng.next_u64();

    const std::array<double, 3> phase_angle = {phi0, phi0 - kTwoPi / 3.0, phi0 + kTwoPi / 3.0};
    const auto drives = phase_drives(fault, phase_angle, theta);

    std::array<double, 4> line_z{};
    for (int l = 0; l < 4; ++l) line_z[l] = cfg.line_impedance_per_km * rec.line_length_km[l];
    const double z_faulted = line_z[line - 1];

    const auto bus_dist = bus_fault_distances(layout, line_z, line, loc);
    const auto ends = layout.line_relays(line);

    auto src_at = [&](int relay) { return sub_z_src[layout.relay_substation(relay) - 1]; };

    // short-circuit current magnitude per faulted-line terminal
    std::array<double, ChannelLayout::kRelayCount + 1> fault_i_mag{};
    fault_i_mag[ends.terminal1_relay] = 1.0 / (src_at(ends.terminal1_relay) + loc * z_faulted);
    fault_i_mag[ends.terminal2_relay] =
        1.0 / (src_at(ends.terminal2_relay) + (1.0 - loc) * z_faulted);
    const double echo_basis_mag = fault_i_mag[ends.terminal1_relay];

    const double omega = kTwoPi * cfg.frequency_hz;
    const int n_samples = static_cast<int>(std::lround(cfg.sample_rate_hz * cfg.duration_s));
    const double dt = 1.0 / cfg.sample_rate_hz;
    const double t_f = ep.t_inception;
    const double t_c = ep.t_clearing;
    const double sqrt2 = std::sqrt(2.0);

    const PhaseSet faulted = faulted_phases(fault);
    const bool pair_fault = faulted.count() == 2 && !involves_ground(fault);
    int pair_x = -1, pair_y = -1;
    if (pair_fault) {
        for (int p = 0; p < 3; ++p) {
            if (!faulted.has(p)) continue;
            (pair_x < 0 ? pair_x : pair_y) = p;
        }
    }

    ep.signals = SignalMatrix(ChannelLayout::kChannelCount, n_samples);

    for (int relay = 1; relay <= ChannelLayout::kRelayCount; ++relay) {
        const bool on_faulted_line = layout.relay_line(relay) == line;
        const double load_amp = sqrt2 * rec.load_level * load_jitter[relay - 1];
        const double load_sign = layout.relay_terminal(relay) == 1 ? 1.0 : -1.0;
        const double i_mag = on_faulted_line ? fault_i_mag[relay] : echo[relay - 1] * echo_basis_mag;

        // electrical distance from this relay to the fault point: along the
        // line for the faulted line's own relays, through the healthy network
        // for everyone else
        double relay_d;
        if (on_faulted_line)
            relay_d = (layout.relay_terminal(relay) == 1 ? loc : 1.0 - loc) * z_faulted;
        else
            relay_d = bus_dist[layout.relay_substation(relay) - 1];
        const double sag = relay_d / (relay_d + src_at(relay));

        float* row_i[3];
        float* row_v[3];
        for (int phase = 0; phase < 3; ++phase) {
            row_i[phase] = ep.signals.row(layout.channel(relay, Quantity::Current, phase));
            row_v[phase] = ep.signals.row(layout.channel(relay, Quantity::Voltage, phase));
        }

        std::array<double, 3> dc_at_inception{};
        for (int p = 0; p < 3; ++p) dc_at_inception[p] = std::sin(omega * t_f + drives[p].angle);

        for (int s = 0; s < n_samples; ++s) {
            const double t = s * dt;
            double v_nom[3];
            for (int p = 0; p < 3; ++p) v_nom[p] = sqrt2 * std::sin(omega * t + phase_angle[p]);

            double env = 0.0;
            double recovery = 1.0;
            if (t >= t_f) {
                env = 1.0 - std::exp(-(t - t_f) / kVoltageCollapseTau);
                if (t > t_c) {
                    recovery = std::exp(-(t - t_c) / cfg.clearing_recovery_s);
                    env *= recovery;
                }
            }

            // sagged voltage targets: ground-involved faults pull each faulted
            // phase toward zero; an ungrounded phase-phase fault pulls the pair
            // toward its instantaneous midpoint, which keeps the phase sum (the
            // zero-sequence voltage) intact
            double v_tgt[3] = {v_nom[0], v_nom[1], v_nom[2]};
            if (pair_fault) {
                const double mid = 0.5 * (v_nom[pair_x] + v_nom[pair_y]);
                v_tgt[pair_x] = mid + sag * (v_nom[pair_x] - mid);
                v_tgt[pair_y] = mid + sag * (v_nom[pair_y] - mid);
            } else {
                for (int p = 0; p < 3; ++p)
                    if (faulted.has(p)) v_tgt[p] = sag * v_nom[p];
            }

            for (int p = 0; p < 3; ++p) {
                double i = load_sign * load_amp * std::sin(omega * t + phase_angle[p] - pf_angle);
                if (drives[p].coeff != 0.0 && t >= t_f) {
                    i += sqrt2 * i_mag * drives[p].coeff * recovery *
                         (std::sin(omega * t + drives[p].angle) -
                          dc_at_inception[p] * std::exp(-(t - t_f) / tau_dc));
                }
                row_i[p][s] = static_cast<float>(i);
                row_v[p][s] = static_cast<float>(v_nom[p] + env * (v_tgt[p] - v_nom[p]));
            }
        }
    }

    // measurement noise, one independent stream per channel so the result
    // does not depend on channel fill order
    const double noise_scale = std::pow(10.0, -cfg.snr_db / 20.0);
    for (int relay = 1; relay <= ChannelLayout::kRelayCount; ++relay) {
        for (int phase = 0; phase < 3; ++phase) {
            for (Quantity q : {Quantity::Current, Quantity::Voltage}) {
                const int ch = layout.channel(relay, q, phase);
                const double rms =
                    q == Quantity::Current ? rec.load_level * load_jitter[relay - 1] : 1.0;
                const double sigma = rms * noise_scale;
                Rng noise(mix_seed(rec.noise_seed, static_cast<std::uint64_t>(ch)));
                float* row = ep.signals.row(ch);
                for (int s = 0; s < n_samples; ++s)
                    row[s] = static_cast<float>(row[s] + sigma * noise.normal());
            }
        }
    }

    return ep;
}

std::uint64_t episode_seed(std::uint64_t master_seed, std::uint64_t episode_index) {
    return mix_seed(master_seed, episode_index);
}

std::vector<Episode> generate_dataset(const GridConfig& cfg, std::size_t n_episodes,
                                      std::uint64_t master_seed, int jobs) {
    cfg.validate();
    if (n_episodes == 0)
        throw std::invalid_argument("generate_dataset: n_episodes must be at least 1");

    const ChannelLayout layout = ChannelLayout::standard();
    std::vector<Episode> episodes(n_episodes);

    auto make_episode = [&](std::size_t i) {
        const std::uint64_t seed = episode_seed(master_seed, i);
        Rng pick(mix_seed(seed, 0x706172616dULL));
        const FaultType fault = kShortCircuitTypes[pick.uniform_index(kShortCircuitTypes.size())];
        const int line = 1 + static_cast<int>(pick.uniform_index(ChannelLayout::kLineCount));
        const double loc = pick.uniform(0.01, 0.99);
        episodes[i] = synthesize_episode(cfg, layout, fault, line, loc, seed);
        episodes[i].episode_id = i;
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < n_episodes; ++i) make_episode(i);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(jobs));
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w] {
                for (std::size_t i = static_cast<std::size_t>(w); i < n_episodes;
                     i += static_cast<std::size_t>(jobs))
                    make_episode(i);
            });
        }
        for (auto& t : workers) t.join();
    }
    return episodes;
}

}  // namespace gridprobe
