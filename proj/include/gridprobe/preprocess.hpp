#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gridprobe/episode.hpp"
#include "gridprobe/fault_types.hpp"
#include "gridprobe/signal_matrix.hpp"

namespace gridprobe {

inline constexpr int kWindowLen = 320;   // 50 ms at 6.4 kHz
inline constexpr int kWindowStride = 32;  // 5 ms at 6.4 kHz

// half-open sample range of the +-80 ms crop around fault inception,
// clamped to the episode
struct CropSpan {
    int begin = 0;
    int end = 0;

    int length() const { return end - begin; }
};

CropSpan crop_episode(const Episode& ep);

// number of stride-32 windows of length 320 that fit into a crop
int window_count(int crop_length);

// lightweight handle for one window; the tensor itself is materialized on
// demand from the episode signals
struct WindowRef {
    int episode_index = 0;         // position in the dataset vector
    std::uint64_t episode_id = 0;
    int crop_begin = 0;            // absolute sample index of the crop start
    int start_sample = 0;          // window offset within the crop
    FaultType fc_label = FaultType::NoFault;
    float fl_target = 0.0f;        // meaningful iff fc_label != NoFault
};

// windows for one episode; empty (with a warning on stderr) if the crop is
// shorter than one window
std::vector<WindowRef> segment_episode(const Episode& ep, int episode_index);

std::vector<WindowRef> segment_dataset(const std::vector<Episode>& episodes);

// copies the window's 48x320 slice out of the episode signals
SignalMatrix window_tensor(const Episode& ep, const WindowRef& ref);

// per-channel statistics computed on (degraded) training windows only
struct ChannelStats {
    std::array<double, 48> mean{};
    std::array<double, 48> stdev{};
    bool from_training = false;  // provenance guard, set by the accumulator
};

class StatsAccumulator {
public:
    void add(const SignalMatrix& window);
    ChannelStats finalize() const;

private:
    std::array<double, 48> sum_{};
    std::array<double, 48> sum_sq_{};
    std::int64_t count_ = 0;
};

// z-scores each channel in place; channels with stdev below 1e-9 become all
// zeros (masked-channel guard)
void normalize_window(SignalMatrix& window, const ChannelStats& stats);

}  // namespace gridprobe
