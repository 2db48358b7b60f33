#include "gridprobe/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "gridprobe/rng.hpp"

namespace gridprobe {

namespace {

const int kRateFactors[] = {2, 4, 8, 16, 32, 64};
const int kTemporalDurations[] = {5, 10, 20, 40};

bool contains(const int* begin, const int* end, int v) {
    return std::find(begin, end, v) != end;
}

int parse_int_param(const std::string& text, std::size_t colon) {
    const std::string tail = text.substr(colon + 1);
    std::size_t used = 0;
    int value;
    try {
        value = std::stoi(tail, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad scenario parameter '" + tail + "'");
    }
    if (used != tail.size())
        throw std::invalid_argument("bad scenario parameter '" + tail + "'");
    return value;
}

}  // namespace

std::string spec_to_string(const DegradationSpec& spec) {
    switch (spec.kind) {
        case DegradationKind::None: return "none";
        case DegradationKind::MissingVoltage: return "missing_voltage";
        case DegradationKind::MissingCurrent: return "missing_current";
        case DegradationKind::ReducedRate: return "rate:" + std::to_string(spec.param);
        case DegradationKind::RelayFailure: return "relay:" + std::to_string(spec.param);
        case DegradationKind::SubstationFailure: return "substation:" + std::to_string(spec.param);
        case DegradationKind::PhaseFailure:
            return std::string("phase:") + static_cast<char>('A' + spec.param);
        case DegradationKind::TemporalLoss: return "temporal:" + std::to_string(spec.param);
    }
    throw std::logic_error("spec_to_string: unknown kind");
}

DegradationSpec parse_spec(const std::string& text) {
    if (text == "none") return {DegradationKind::None, 0};
    if (text == "missing_voltage") return {DegradationKind::MissingVoltage, 0};
    if (text == "missing_current") return {DegradationKind::MissingCurrent, 0};

    const std::size_t colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (colon == std::string::npos)
        throw std::invalid_argument("unknown scenario '" + text + "'");

    if (head == "rate") {
        const int k = parse_int_param(text, colon);
        if (!contains(std::begin(kRateFactors), std::end(kRateFactors), k))
            throw std::invalid_argument("rate factor must be one of 2,4,8,16,32,64");
        return {DegradationKind::ReducedRate, k};
    }
    if (head == "relay") {
        const int r = parse_int_param(text, colon);
        if (r < 1 || r > ChannelLayout::kRelayCount)
            throw std::invalid_argument("relay out of range 1..8");
        return {DegradationKind::RelayFailure, r};
    }
    if (head == "substation") {
        const int s = parse_int_param(text, colon);
        if (s < 1 || s > ChannelLayout::kSubstationCount)
            throw std::invalid_argument("substation out of range 1..3");
        return {DegradationKind::SubstationFailure, s};
    }
    if (head == "phase") {
        const std::string tail = text.substr(colon + 1);
        if (tail.size() != 1 || tail[0] < 'A' || tail[0] > 'C')
            throw std::invalid_argument("phase must be A, B, or C");
        return {DegradationKind::PhaseFailure, tail[0] - 'A'};
    }
    if (head == "temporal") {
        const int ms = parse_int_param(text, colon);
        if (!contains(std::begin(kTemporalDurations), std::end(kTemporalDurations), ms))
            throw std::invalid_argument("temporal duration must be one of 5,10,20,40 ms");
        return {DegradationKind::TemporalLoss, ms};
    }
    throw std::invalid_argument("unknown scenario '" + text + "'");
}

std::vector<int> mask_channels(const DegradationSpec& spec, const ChannelLayout& layout) {
    if (!spec.is_channel_mask())
        throw std::logic_error("mask_channels: spec is not a channel-masking variant");

    std::vector<int> mask;
    for (int relay = 1; relay <= ChannelLayout::kRelayCount; ++relay) {
        for (int phase = 0; phase < 3; ++phase) {
            for (Quantity q : {Quantity::Current, Quantity::Voltage}) {
                bool hit = false;
                switch (spec.kind) {
                    case DegradationKind::MissingVoltage: hit = q == Quantity::Voltage; break;
                    case DegradationKind::MissingCurrent: hit = q == Quantity::Current; break;
                    case DegradationKind::RelayFailure: hit = relay == spec.param; break;
                    case DegradationKind::SubstationFailure:
                        hit = layout.relay_substation(relay) == spec.param;
                        break;
                    case DegradationKind::PhaseFailure: hit = phase == spec.param; break;
                    default: break;
                }
                if (hit) mask.push_back(layout.channel(relay, q, phase));
            }
        }
    }
    std::sort(mask.begin(), mask.end());
    return mask;
}

void apply_channel_mask(SignalMatrix& signals, const std::vector<int>& mask) {
    for (int c : mask) {
        if (c < 0 || c >= signals.rows)
            throw std::logic_error("apply_channel_mask: channel outside the matrix");
        std::memset(signals.row(c), 0, static_cast<std::size_t>(signals.cols) * sizeof(float));
    }
}

void decimate_hold(SignalMatrix& signals, int factor) {
    if (factor == 1) return;
    if (!contains(std::begin(kRateFactors), std::end(kRateFactors), factor))
        throw std::invalid_argument("decimate_hold: factor must be one of 1,2,4,8,16,32,64");
    for (int r = 0; r < signals.rows; ++r) {
        float* row = signals.row(r);
        for (int j = 0; j < signals.cols; j += factor) {
            const float held = row[j];
            const int run_end = std::min(signals.cols, j + factor);
            for (int k = j + 1; k < run_end; ++k) row[k] = held;
        }
    }
}

void zero_block(SignalMatrix& window, int onset, int duration_ms) {
    if (!contains(std::begin(kTemporalDurations), std::end(kTemporalDurations), duration_ms))
        throw std::invalid_argument("zero_block: duration must be one of 5,10,20,40 ms");
    const int block = static_cast<int>(std::lround(duration_ms * 6.4));
    if (onset < 0 || onset + block > window.cols)
        throw std::logic_error("zero_block: block exceeds the window");
    for (int r = 0; r < window.rows; ++r)
        std::memset(window.row(r) + onset, 0, static_cast<std::size_t>(block) * sizeof(float));
}

void apply_degradation(SignalMatrix& window, const DegradationSpec& spec,
                       const ChannelLayout& layout, std::uint64_t window_seed) {
    switch (spec.kind) {
        case DegradationKind::None:
            return;
        case DegradationKind::ReducedRate:
            decimate_hold(window, spec.param);
            return;
        case DegradationKind::TemporalLoss: {
            const int block = static_cast<int>(std::lround(spec.param * 6.4));
            Rng rng(mix_seed(window_seed, 0x7e3bULL));
            const int onset = static_cast<int>(
                rng.uniform_index(static_cast<std::size_t>(window.cols - block + 1)));
            zero_block(window, onset, spec.param);
            return;
        }
        default:
            apply_channel_mask(window, mask_channels(spec, layout));
            return;
    }
}

}  // namespace gridprobe
