#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridprobe {

enum class Task { FC, FL };

// dense row-major 64-bit matrix used by the training stack
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double* row(int r) { return a.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const { return a.data() + static_cast<std::size_t>(r) * cols; }
    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

struct ModelParams {
    Task task = Task::FC;
    std::array<int, 4> sizes{};  // input, hidden1, hidden2, output
    Mat w1, w2, w3;              // sizes[i] x sizes[i+1]
    std::vector<double> b1, b2, b3;
};

struct Gradients {
    Mat w1, w2, w3;
    std::vector<double> b1, b2, b3;
};

struct TrainConfig {
    double learning_rate = 1.38e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int batch_size = 256;
    int max_epochs = 200;
    int patience = 20;
    double val_fraction = 0.10;
    int hidden1 = 256;
    int hidden2 = 128;
    std::uint64_t seed = 0;
};

struct AdamState {
    Gradients m;  // first moments
    Gradients v;  // second moments
    std::int64_t t = 0;
};

struct TrainHistory {
    std::vector<double> train_loss;  // one entry per completed epoch
    std::vector<double> val_loss;
    int best_epoch = 0;  // 1-based epoch whose parameters were returned
};

// abstract example feed; lets the trainer stream windows that are
// materialized (cropped, degraded, normalized) on demand
class ExampleSource {
public:
    virtual ~ExampleSource() = default;
    virtual int count() const = 0;
    virtual int feature_dim() const = 0;
    // writes example i's features into dst[0..feature_dim)
    virtual void materialize(int i, double* dst) const = 0;
    virtual int label(int i) const = 0;        // FC class index
    virtual double target(int i) const = 0;    // FL location fraction
    virtual std::uint64_t group(int i) const = 0;  // episode id, for leakage checks
};

// plain in-memory source for tests and toy problems
class DenseSource : public ExampleSource {
public:
    Mat x;
    std::vector<int> labels;
    std::vector<double> targets;
    std::vector<std::uint64_t> groups;

    int count() const override { return x.rows; }
    int feature_dim() const override { return x.cols; }
    void materialize(int i, double* dst) const override;
    int label(int i) const override { return labels[i]; }
    double target(int i) const override { return targets.empty() ? 0.0 : targets[i]; }
    std::uint64_t group(int i) const override {
        return groups.empty() ? static_cast<std::uint64_t>(i) : groups[i];
    }
};

// decides when training stops: no improvement of the best validation loss
// for `patience` consecutive epochs
class EarlyStopper {
public:
    explicit EarlyStopper(int patience);
    // records one epoch's validation loss; returns true if it improved the best
    bool observe(double val_loss);
    bool should_stop() const;
    int best_epoch() const { return best_epoch_; }
    double best_loss() const { return best_loss_; }

private:
    int patience_;
    int epoch_ = 0;
    int best_epoch_ = 0;
    double best_loss_;
};

ModelParams init_mlp(const std::array<int, 4>& sizes, Task task, std::uint64_t seed);

// batch forward pass; returns outputs (softmax probabilities for FC, raw
// scalars for FL) and fills the activation cache when one is given
struct ForwardCache {
    Mat a1, a2;  // post-ReLU hidden activations
};
Mat forward(const ModelParams& params, const Mat& batch, ForwardCache* cache = nullptr);

// mean loss over the batch (cross-entropy for FC, MAE for FL) and its
// gradients; labels are class indices for FC, fractions for FL
double loss_and_grad(const ModelParams& params, const Mat& batch, const std::vector<int>& labels,
                     const std::vector<double>& targets, Gradients& grads);

// validation-style loss without gradients
double batch_loss(const ModelParams& params, const Mat& batch, const std::vector<int>& labels,
                  const std::vector<double>& targets);

void adam_step(ModelParams& params, const Gradients& grads, AdamState& state,
               const TrainConfig& cfg);

// thrown when a loss turns non-finite; the CLI maps it to exit code 3
struct TrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ModelParams train(const ExampleSource& train_set, const ExampleSource& val_set,
                  const TrainConfig& cfg, Task task, TrainHistory* history = nullptr);

// FC: argmax class per example (lowest index wins ties)
std::vector<int> predict_classes(const ModelParams& params, const ExampleSource& data);
// FL: raw outputs clamped to [0.01, 0.99]
std::vector<double> predict_fractions(const ModelParams& params, const ExampleSource& data);

void save_checkpoint(const std::string& path, const ModelParams& params, std::uint64_t seed,
                     std::uint64_t config_hash);
ModelParams load_checkpoint(const std::string& path, std::uint64_t* seed = nullptr,
                            std::uint64_t* config_hash = nullptr);

std::uint64_t train_config_hash(const TrainConfig& cfg);

}  // namespace gridprobe
