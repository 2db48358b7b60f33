#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridprobe/channel_layout.hpp"
#include "gridprobe/signal_matrix.hpp"

namespace gridprobe {

enum class DegradationKind {
    None,
    MissingVoltage,
    MissingCurrent,
    ReducedRate,       // param = factor in {2,4,8,16,32,64}
    RelayFailure,      // param = relay 1..8
    SubstationFailure, // param = substation 1..3
    PhaseFailure,      // param = phase 0..2
    TemporalLoss,      // param = duration in ms, one of {5,10,20,40}
};

struct DegradationSpec {
    DegradationKind kind = DegradationKind::None;
    int param = 0;

    bool is_channel_mask() const {
        return kind == DegradationKind::MissingVoltage || kind == DegradationKind::MissingCurrent ||
               kind == DegradationKind::RelayFailure || kind == DegradationKind::SubstationFailure ||
               kind == DegradationKind::PhaseFailure;
    }
};

// canonical text form, identical to the experiment-config syntax:
// none | missing_voltage | missing_current | rate:<k> | relay:<1-8> |
// substation:<1-3> | phase:<A|B|C> | temporal:<ms>
std::string spec_to_string(const DegradationSpec& spec);
// throws std::invalid_argument with a reason on malformed or out-of-domain text
DegradationSpec parse_spec(const std::string& text);

// channel indices zeroed by a masking variant; contract error otherwise
std::vector<int> mask_channels(const DegradationSpec& spec, const ChannelLayout& layout);

void apply_channel_mask(SignalMatrix& signals, const std::vector<int>& mask);

// keeps columns at indices 0 mod k and holds each kept value over the
// following k-1 columns (zero-order hold); shape preserved
void decimate_hold(SignalMatrix& signals, int factor);

// zeroes round(duration_ms * 6.4) consecutive columns across all rows
void zero_block(SignalMatrix& window, int onset, int duration_ms);

// dispatches to the operator for the spec; TemporalLoss draws its onset from
// the given window seed, so the same window is degraded identically wherever
// it is materialized
void apply_degradation(SignalMatrix& window, const DegradationSpec& spec,
                       const ChannelLayout& layout, std::uint64_t window_seed);

}  // namespace gridprobe
