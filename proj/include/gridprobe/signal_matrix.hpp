#pragma once

#include <cstddef>
#include <vector>

namespace gridprobe {

// Channel-major waveform block: one row per channel, one column per sample.
// Episodes are 48 x 6400, model windows 48 x 320.
struct SignalMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<float> data;

    SignalMatrix() = default;
    SignalMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0f) {}

    float* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
    const float* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

    float& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    float at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    bool same_shape(const SignalMatrix& o) const { return rows == o.rows && cols == o.cols; }
};

}  // namespace gridprobe
