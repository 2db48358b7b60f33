#include "gridprobe/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iostream>
#include <stdexcept>

namespace gridprobe {

CropSpan crop_episode(const Episode& ep) {
    const double fs = ep.sample_rate_hz;
    const int n = ep.signals.cols;
    CropSpan span;
    span.begin = std::max(0, static_cast<int>(std::lround((ep.t_inception - 0.08) * fs)));
    span.end = std::min(n, static_cast<int>(std::lround((ep.t_inception + 0.08) * fs)));
    return span;
}

int window_count(int crop_length) {
    if (crop_length < kWindowLen) return 0;
    return (crop_length - kWindowLen) / kWindowStride + 1;
}

std::vector<WindowRef> segment_episode(const Episode& ep, int episode_index) {
    const CropSpan span = crop_episode(ep);
    const int count = window_count(span.length());
    if (count == 0) {
        std::cerr << "warning: episode " << ep.episode_id << " crop shorter than one window, skipped\n";
        return {};
    }

    const double fs = ep.sample_rate_hz;
    const int s_inception = static_cast<int>(std::lround(ep.t_inception * fs));
    const int s_clearing = static_cast<int>(std::lround(ep.t_clearing * fs));

    std::vector<WindowRef> refs;
    refs.reserve(static_cast<std::size_t>(count));
    for (int w = 0; w < count; ++w) {
        WindowRef ref;
        ref.episode_index = episode_index;
        ref.episode_id = ep.episode_id;
        ref.crop_begin = span.begin;
        ref.start_sample = w * kWindowStride;
        const int g = span.begin + ref.start_sample;
        // majority-overlap rule: the faulted interval must cover more than
        // half the window before the window inherits the fault label, so a
        // labeled window always retains fault evidence even when a short
        // outage block erases part of it
        const int overlap =
            std::min(g + kWindowLen, s_clearing) - std::max(g, s_inception);
        const bool majority_fault = overlap > kWindowLen / 2;
        if (majority_fault && ep.fault_type != FaultType::NoFault) {
            ref.fc_label = ep.fault_type;
            ref.fl_target = static_cast<float>(ep.location_frac);
        }
        refs.push_back(ref);
    }
    return refs;
}

std::vector<WindowRef> segment_dataset(const std::vector<Episode>& episodes) {
    std::vector<WindowRef> refs;
    for (std::size_t i = 0; i < episodes.size(); ++i) {
        auto per_episode = segment_episode(episodes[i], static_cast<int>(i));
        refs.insert(refs.end(), per_episode.begin(), per_episode.end());
    }
    return refs;
}

SignalMatrix window_tensor(const Episode& ep, const WindowRef& ref) {
    const int begin = ref.crop_begin + ref.start_sample;
    if (begin < 0 || begin + kWindowLen > ep.signals.cols)
        throw std::logic_error("window_tensor: window span outside the episode");
    SignalMatrix w(ep.signals.rows, kWindowLen);
    for (int c = 0; c < ep.signals.rows; ++c)
        std::memcpy(w.row(c), ep.signals.row(c) + begin, kWindowLen * sizeof(float));
    return w;
}

void StatsAccumulator::add(const SignalMatrix& window) {
    if (window.rows != 48) throw std::logic_error("StatsAccumulator: expected 48 channels");
    for (int c = 0; c < 48; ++c) {
        const float* row = window.row(c);
        double s = 0.0, s2 = 0.0;
        for (int j = 0; j < window.cols; ++j) {
            s += row[j];
            s2 += static_cast<double>(row[j]) * row[j];
        }
        sum_[c] += s;
        sum_sq_[c] += s2;
    }
    count_ += window.cols;
}

ChannelStats StatsAccumulator::finalize() const {
    if (count_ == 0) throw std::logic_error("StatsAccumulator: no windows added");
    ChannelStats stats;
    for (int c = 0; c < 48; ++c) {
        const double mean = sum_[c] / static_cast<double>(count_);
        const double var = std::max(0.0, sum_sq_[c] / static_cast<double>(count_) - mean * mean);
        stats.mean[c] = mean;
        stats.stdev[c] = std::sqrt(var);
    }
    stats.from_training = true;
    return stats;
}

void normalize_window(SignalMatrix& window, const ChannelStats& stats) {
    if (window.rows != 48) throw std::logic_error("normalize_window: expected 48 channels");
    for (int c = 0; c < 48; ++c) {
        const double scale = stats.stdev[c] < 1e-9 ? 0.0 : 1.0 / stats.stdev[c];
        const double mean = stats.mean[c];
        float* row = window.row(c);
        for (int j = 0; j < window.cols; ++j)
            row[j] = static_cast<float>((row[j] - mean) * scale);
    }
}

}  // namespace gridprobe
