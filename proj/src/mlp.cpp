#include "gridprobe/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include "gridprobe/binio.hpp"
#include "gridprobe/rng.hpp"

namespace gridprobe {

namespace {

// ---------------------------------------------------------------------------
// dense kernels
//
// The training cost is dominated by the first layer, whose weight matrix is
// 15360 x h. Both hot products stream that matrix once per 4-row block of the
// batch while the per-row accumulators stay in registers, which needs the
// inner extent as a compile-time constant; common hidden widths get dedicated
// instantiations and everything else takes the generic path.
// ---------------------------------------------------------------------------

// Y(B x n) += X(B x m) @ W(m x n)
template <int N>
void gemm_nn_fixed(const Mat& x, const Mat& w, Mat& y) {
    const int rows = x.rows, m = x.cols;
    int i = 0;
    for (; i + 4 <= rows; i += 4) {
        const double* x0 = x.row(i);
        const double* x1 = x.row(i + 1);
        const double* x2 = x.row(i + 2);
        const double* x3 = x.row(i + 3);
        double acc0[N], acc1[N], acc2[N], acc3[N];
        std::memcpy(acc0, y.row(i), sizeof acc0);
        std::memcpy(acc1, y.row(i + 1), sizeof acc1);
        std::memcpy(acc2, y.row(i + 2), sizeof acc2);
        std::memcpy(acc3, y.row(i + 3), sizeof acc3);
        for (int k = 0; k < m; ++k) {
            const double* wr = w.row(k);
            const double v0 = x0[k], v1 = x1[k], v2 = x2[k], v3 = x3[k];
            for (int j = 0; j < N; ++j) acc0[j] += v0 * wr[j];
            for (int j = 0; j < N; ++j) acc1[j] += v1 * wr[j];
            for (int j = 0; j < N; ++j) acc2[j] += v2 * wr[j];
            for (int j = 0; j < N; ++j) acc3[j] += v3 * wr[j];
        }
        std::memcpy(y.row(i), acc0, sizeof acc0);
        std::memcpy(y.row(i + 1), acc1, sizeof acc1);
        std::memcpy(y.row(i + 2), acc2, sizeof acc2);
        std::memcpy(y.row(i + 3), acc3, sizeof acc3);
    }
    for (; i < rows; ++i) {
        const double* xi = x.row(i);
        double acc[N];
        std::memcpy(acc, y.row(i), sizeof acc);
        for (int k = 0; k < m; ++k) {
            const double* wr = w.row(k);
            const double v = xi[k];
            for (int j = 0; j < N; ++j) acc[j] += v * wr[j];
        }
        std::memcpy(y.row(i), acc, sizeof acc);
    }
}

void gemm_nn_generic(const Mat& x, const Mat& w, Mat& y) {
    const int n = w.cols;
    for (int i = 0; i < x.rows; ++i) {
        const double* xi = x.row(i);
        double* yi = y.row(i);
        for (int k = 0; k < x.cols; ++k) {
            const double* wr = w.row(k);
            const double v = xi[k];
            for (int j = 0; j < n; ++j) yi[j] += v * wr[j];
        }
    }
}

void gemm_nn(const Mat& x, const Mat& w, Mat& y) {
    if (x.cols != w.rows || y.rows != x.rows || y.cols != w.cols)
        throw std::logic_error("gemm_nn: shape mismatch");
    switch (w.cols) {
        case 16: gemm_nn_fixed<16>(x, w, y); return;
        case 32: gemm_nn_fixed<32>(x, w, y); return;
        case 64: gemm_nn_fixed<64>(x, w, y); return;
        case 128: gemm_nn_fixed<128>(x, w, y); return;
        case 256: gemm_nn_fixed<256>(x, w, y); return;
        default: gemm_nn_generic(x, w, y); return;
    }
}

// dW(m x n) += X(B x m)^T @ D(B x n)
template <int N>
void gemm_tn_fixed(const Mat& x, const Mat& d, Mat& dw) {
    const int rows = x.rows, m = x.cols;
    int i = 0;
    for (; i + 4 <= rows; i += 4) {
        const double* x0 = x.row(i);
        const double* x1 = x.row(i + 1);
        const double* x2 = x.row(i + 2);
        const double* x3 = x.row(i + 3);
        const double* d0 = d.row(i);
        const double* d1 = d.row(i + 1);
        const double* d2 = d.row(i + 2);
        const double* d3 = d.row(i + 3);
        for (int k = 0; k < m; ++k) {
            double* wr = dw.row(k);
            const double v0 = x0[k], v1 = x1[k], v2 = x2[k], v3 = x3[k];
            for (int j = 0; j < N; ++j)
                wr[j] += v0 * d0[j] + v1 * d1[j] + v2 * d2[j] + v3 * d3[j];
        }
    }
    for (; i < rows; ++i) {
        const double* xi = x.row(i);
        const double* di = d.row(i);
        for (int k = 0; k < m; ++k) {
            double* wr = dw.row(k);
            const double v = xi[k];
            for (int j = 0; j < N; ++j) wr[j] += v * di[j];
        }
    }
}

void gemm_tn_generic(const Mat& x, const Mat& d, Mat& dw) {
    const int n = d.cols;
    for (int i = 0; i < x.rows; ++i) {
        const double* xi = x.row(i);
        const double* di = d.row(i);
        for (int k = 0; k < x.cols; ++k) {
            double* wr = dw.row(k);
            const double v = xi[k];
            for (int j = 0; j < n; ++j) wr[j] += v * di[j];
        }
    }
}

void gemm_tn(const Mat& x, const Mat& d, Mat& dw) {
    if (x.rows != d.rows || dw.rows != x.cols || dw.cols != d.cols)
        throw std::logic_error("gemm_tn: shape mismatch");
    switch (d.cols) {
        case 16: gemm_tn_fixed<16>(x, d, dw); return;
        case 32: gemm_tn_fixed<32>(x, d, dw); return;
        case 64: gemm_tn_fixed<64>(x, d, dw); return;
        case 128: gemm_tn_fixed<128>(x, d, dw); return;
        case 256: gemm_tn_fixed<256>(x, d, dw); return;
        default: gemm_tn_generic(x, d, dw); return;
    }
}

// Y(B x m) += D(B x n) @ W(m x n)^T; only used between hidden layers where
// every extent is small
void gemm_nt(const Mat& d, const Mat& w, Mat& y) {
    if (d.cols != w.cols || y.rows != d.rows || y.cols != w.rows)
        throw std::logic_error("gemm_nt: shape mismatch");
    for (int i = 0; i < d.rows; ++i) {
        const double* di = d.row(i);
        double* yi = y.row(i);
        for (int k = 0; k < w.rows; ++k) {
            const double* wr = w.row(k);
            double s = 0.0;
            for (int j = 0; j < w.cols; ++j) s += di[j] * wr[j];
            yi[k] += s;
        }
    }
}

void set_bias_rows(Mat& y, const std::vector<double>& b) {
    for (int i = 0; i < y.rows; ++i) std::memcpy(y.row(i), b.data(), b.size() * sizeof(double));
}

void relu_inplace(Mat& z) {
    for (double& v : z.a) v = v > 0.0 ? v : 0.0;
}

void add_col_sums(const Mat& d, std::vector<double>& db) {
    for (int i = 0; i < d.rows; ++i) {
        const double* di = d.row(i);
        for (int j = 0; j < d.cols; ++j) db[j] += di[j];
    }
}

// zeroes entries of d where the matching activation was clipped by ReLU
void mask_by_activation(Mat& d, const Mat& a) {
    for (std::size_t i = 0; i < d.a.size(); ++i)
        if (a.a[i] <= 0.0) d.a[i] = 0.0;
}

void softmax_rows(Mat& z) {
    for (int i = 0; i < z.rows; ++i) {
        double* row = z.row(i);
        double mx = row[0];
        for (int j = 1; j < z.cols; ++j) mx = std::max(mx, row[j]);
        double sum = 0.0;
        for (int j = 0; j < z.cols; ++j) {
            row[j] = std::exp(row[j] - mx);
            sum += row[j];
        }
        for (int j = 0; j < z.cols; ++j) row[j] /= sum;
    }
}

Gradients make_grads_like(const ModelParams& p) {
    Gradients g;
    g.w1 = Mat(p.w1.rows, p.w1.cols);
    g.w2 = Mat(p.w2.rows, p.w2.cols);
    g.w3 = Mat(p.w3.rows, p.w3.cols);
    g.b1.assign(p.b1.size(), 0.0);
    g.b2.assign(p.b2.size(), 0.0);
    g.b3.assign(p.b3.size(), 0.0);
    return g;
}

void zero_grads(Gradients& g) {
    std::fill(g.w1.a.begin(), g.w1.a.end(), 0.0);
    std::fill(g.w2.a.begin(), g.w2.a.end(), 0.0);
    std::fill(g.w3.a.begin(), g.w3.a.end(), 0.0);
    std::fill(g.b1.begin(), g.b1.end(), 0.0);
    std::fill(g.b2.begin(), g.b2.end(), 0.0);
    std::fill(g.b3.begin(), g.b3.end(), 0.0);
}

void adam_update(std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
                 std::vector<double>& v, double alpha, double beta1, double beta2, double eps,
                 double bc1, double bc2) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        p[i] -= alpha * mhat / (std::sqrt(vhat) + eps);
    }
}

void fill_batch(const ExampleSource& src, const std::vector<int>& order, int begin, int end,
                Mat& x, std::vector<int>& labels, std::vector<double>& targets) {
    const int b = end - begin;
    x.rows = b;
    labels.resize(static_cast<std::size_t>(b));
    targets.resize(static_cast<std::size_t>(b));
    for (int r = 0; r < b; ++r) {
        const int idx = order[static_cast<std::size_t>(begin + r)];
        src.materialize(idx, x.row(r));
        labels[static_cast<std::size_t>(r)] = src.label(idx);
        targets[static_cast<std::size_t>(r)] = src.target(idx);
    }
}

}  // namespace

void DenseSource::materialize(int i, double* dst) const {
    std::memcpy(dst, x.row(i), static_cast<std::size_t>(x.cols) * sizeof(double));
}

EarlyStopper::EarlyStopper(int patience)
    : patience_(patience), best_loss_(std::numeric_limits<double>::infinity()) {
    if (patience < 1) throw std::invalid_argument("EarlyStopper: patience must be >= 1");
}

bool EarlyStopper::observe(double val_loss) {
    ++epoch_;
    if (val_loss < best_loss_) {
        best_loss_ = val_loss;
        best_epoch_ = epoch_;
        return true;
    }
    return false;
}

bool EarlyStopper::should_stop() const { return epoch_ - best_epoch_ >= patience_; }

ModelParams init_mlp(const std::array<int, 4>& sizes, Task task, std::uint64_t seed) {
    for (int s : sizes)
        if (s < 1) throw std::invalid_argument("init_mlp: layer sizes must be positive");
    const int expected_out = task == Task::FC ? 11 : 1;
    if (sizes[3] != expected_out)
        throw std::invalid_argument("init_mlp: output size does not match the task");

    ModelParams p;
    p.task = task;
    p.sizes = sizes;
    p.w1 = Mat(sizes[0], sizes[1]);
    p.w2 = Mat(sizes[1], sizes[2]);
    p.w3 = Mat(sizes[2], sizes[3]);
    p.b1.assign(static_cast<std::size_t>(sizes[1]), 0.0);
    p.b2.assign(static_cast<std::size_t>(sizes[2]), 0.0);
    p.b3.assign(static_cast<std::size_t>(sizes[3]), 0.0);

    Rng rng(seed);
    auto glorot_fill = [&rng](Mat& w) {
        const double bound = std::sqrt(6.0 / (w.rows + w.cols));
        for (double& v : w.a) v = rng.uniform(-bound, bound);
    };
    glorot_fill(p.w1);
    glorot_fill(p.w2);
    glorot_fill(p.w3);
    return p;
}

Mat forward(const ModelParams& params, const Mat& batch, ForwardCache* cache) {
    if (batch.cols != params.sizes[0])
        throw std::logic_error("forward: input width does not match the model");

    Mat a1(batch.rows, params.sizes[1]);
    set_bias_rows(a1, params.b1);
    gemm_nn(batch, params.w1, a1);
    relu_inplace(a1);

    Mat a2(batch.rows, params.sizes[2]);
    set_bias_rows(a2, params.b2);
    gemm_nn(a1, params.w2, a2);
    relu_inplace(a2);

    Mat out(batch.rows, params.sizes[3]);
    set_bias_rows(out, params.b3);
    gemm_nn(a2, params.w3, out);

    if (params.task == Task::FC) softmax_rows(out);

    if (cache) {
        cache->a1 = std::move(a1);
        cache->a2 = std::move(a2);
    }
    return out;
}

double loss_and_grad(const ModelParams& params, const Mat& batch, const std::vector<int>& labels,
                     const std::vector<double>& targets, Gradients& grads) {
    const int b = batch.rows;
    if (b == 0) throw std::invalid_argument("loss_and_grad: empty batch");

    ForwardCache cache;
    Mat out = forward(params, batch, &cache);

    // output-layer delta, already divided by the batch size
    double loss = 0.0;
    Mat d3(out.rows, out.cols);
    if (params.task == Task::FC) {
        if (static_cast<int>(labels.size()) != b)
            throw std::invalid_argument("loss_and_grad: labels do not match the batch");
        for (int i = 0; i < b; ++i) {
            const int y = labels[static_cast<std::size_t>(i)];
            if (y < 0 || y >= out.cols) throw std::invalid_argument("loss_and_grad: label out of range");
            const double* p = out.row(i);
            loss -= std::log(std::max(p[y], 1e-300));
            double* d = d3.row(i);
            for (int j = 0; j < out.cols; ++j) d[j] = p[j] / b;
            d[y] -= 1.0 / b;
        }
    } else {
        if (static_cast<int>(targets.size()) != b)
            throw std::invalid_argument("loss_and_grad: targets do not match the batch");
        for (int i = 0; i < b; ++i) {
            const double diff = out.at(i, 0) - targets[static_cast<std::size_t>(i)];
            loss += std::fabs(diff);
            d3.at(i, 0) = (diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0)) / b;
        }
    }
    loss /= b;

    if (grads.w1.rows != params.w1.rows || grads.w1.cols != params.w1.cols ||
        grads.w2.rows != params.w2.rows || grads.w2.cols != params.w2.cols ||
        grads.w3.rows != params.w3.rows || grads.w3.cols != params.w3.cols ||
        grads.b1.size() != params.b1.size() || grads.b2.size() != params.b2.size() ||
        grads.b3.size() != params.b3.size())
        grads = make_grads_like(params);
    zero_grads(grads);
    gemm_tn(cache.a2, d3, grads.w3);
    add_col_sums(d3, grads.b3);

    Mat d2(b, params.sizes[2]);
    gemm_nt(d3, params.w3, d2);
    mask_by_activation(d2, cache.a2);
    gemm_tn(cache.a1, d2, grads.w2);
    add_col_sums(d2, grads.b2);

    Mat d1(b, params.sizes[1]);
    gemm_nt(d2, params.w2, d1);
    mask_by_activation(d1, cache.a1);
    gemm_tn(batch, d1, grads.w1);
    add_col_sums(d1, grads.b1);

    return loss;
}

double batch_loss(const ModelParams& params, const Mat& batch, const std::vector<int>& labels,
                  const std::vector<double>& targets) {
    const int b = batch.rows;
    if (b == 0) throw std::invalid_argument("batch_loss: empty batch");
    Mat out = forward(params, batch);
    double loss = 0.0;
    if (params.task == Task::FC) {
        for (int i = 0; i < b; ++i)
            loss -= std::log(std::max(out.row(i)[labels[static_cast<std::size_t>(i)]], 1e-300));
    } else {
        for (int i = 0; i < b; ++i)
            loss += std::fabs(out.at(i, 0) - targets[static_cast<std::size_t>(i)]);
    }
    return loss / b;
}

void adam_step(ModelParams& params, const Gradients& grads, AdamState& state,
               const TrainConfig& cfg) {
    if (state.t == 0) {
        state.m = make_grads_like(params);
        state.v = make_grads_like(params);
    }
    state.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));

    adam_update(params.w1.a, grads.w1.a, state.m.w1.a, state.v.w1.a, cfg.learning_rate, cfg.beta1,
                cfg.beta2, cfg.epsilon, bc1, bc2);
    adam_update(params.w2.a, grads.w2.a, state.m.w2.a, state.v.w2.a, cfg.learning_rate, cfg.beta1,
                cfg.beta2, cfg.epsilon, bc1, bc2);
    adam_update(params.w3.a, grads.w3.a, state.m.w3.a, state.v.w3.a, cfg.learning_rate, cfg.beta1,
                cfg.beta2, cfg.epsilon, bc1, bc2);
    adam_update(params.b1, grads.b1, state.m.b1, state.v.b1, cfg.learning_rate, cfg.beta1,
                cfg.beta2, cfg.epsilon, bc1, bc2);
    adam_update(params.b2, grads.b2, state.m.b2, state.v.b2, cfg.learning_rate, cfg.beta1,
                cfg.beta2, cfg.epsilon, bc1, bc2);
    adam_update(params.b3, grads.b3, state.m.b3, state.v.b3, cfg.learning_rate, cfg.beta1,
                cfg.beta2, cfg.epsilon, bc1, bc2);
}

ModelParams train(const ExampleSource& train_set, const ExampleSource& val_set,
                  const TrainConfig& cfg, Task task, TrainHistory* history) {
    if (train_set.count() == 0 || val_set.count() == 0)
        throw std::invalid_argument("train: train and validation sets must be nonempty");
    if (train_set.feature_dim() != val_set.feature_dim())
        throw std::invalid_argument("train: feature dimensions differ");

    std::set<std::uint64_t> train_groups;
    for (int i = 0; i < train_set.count(); ++i) train_groups.insert(train_set.group(i));
    for (int i = 0; i < val_set.count(); ++i)
        if (train_groups.count(val_set.group(i)))
            throw std::invalid_argument("train: validation episodes overlap the training set");

    const std::array<int, 4> sizes = {train_set.feature_dim(), cfg.hidden1, cfg.hidden2,
                                      task == Task::FC ? 11 : 1};
    ModelParams params = init_mlp(sizes, task, mix_seed(cfg.seed, 0x1f17ULL));
    AdamState state;
    Gradients grads = make_grads_like(params);
    EarlyStopper stopper(cfg.patience);

    ModelParams best = params;
    const int n = train_set.count();
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::vector<int> val_order(static_cast<std::size_t>(val_set.count()));
    for (int i = 0; i < val_set.count(); ++i) val_order[static_cast<std::size_t>(i)] = i;

    Mat batch(cfg.batch_size, train_set.feature_dim());
    std::vector<int> labels;
    std::vector<double> targets;

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        Rng shuffle_rng(mix_seed(cfg.seed, 0xe90cULL, static_cast<std::uint64_t>(epoch)));
        shuffle_rng.shuffle(order);

        double epoch_loss = 0.0;
        for (int begin = 0; begin < n; begin += cfg.batch_size) {
            const int end = std::min(n, begin + cfg.batch_size);
            fill_batch(train_set, order, begin, end, batch, labels, targets);
            const double loss = loss_and_grad(params, batch, labels, targets, grads);
            if (!std::isfinite(loss))
                throw TrainingError("non-finite training loss at epoch " + std::to_string(epoch));
            epoch_loss += loss * (end - begin);
            adam_step(params, grads, state, cfg);
        }
        epoch_loss /= n;

        double val_loss = 0.0;
        const int vn = val_set.count();
        for (int begin = 0; begin < vn; begin += cfg.batch_size) {
            const int end = std::min(vn, begin + cfg.batch_size);
            fill_batch(val_set, val_order, begin, end, batch, labels, targets);
            val_loss += batch_loss(params, batch, labels, targets) * (end - begin);
        }
        val_loss /= vn;
        if (!std::isfinite(val_loss))
            throw TrainingError("non-finite validation loss at epoch " + std::to_string(epoch));

        if (stopper.observe(val_loss)) best = params;
        if (history) {
            history->train_loss.push_back(epoch_loss);
            history->val_loss.push_back(val_loss);
            history->best_epoch = stopper.best_epoch();
        }
        if (stopper.should_stop()) break;
    }
    return best;
}

std::vector<int> predict_classes(const ModelParams& params, const ExampleSource& data) {
    std::vector<int> preds;
    preds.reserve(static_cast<std::size_t>(data.count()));
    Mat batch(256, data.feature_dim());
    for (int begin = 0; begin < data.count(); begin += 256) {
        const int end = std::min(data.count(), begin + 256);
        batch.rows = end - begin;
        for (int r = 0; r < batch.rows; ++r) data.materialize(begin + r, batch.row(r));
        Mat out = forward(params, batch);
        for (int r = 0; r < out.rows; ++r) {
            const double* row = out.row(r);
            int arg = 0;
            for (int j = 1; j < out.cols; ++j)
                if (row[j] > row[arg]) arg = j;
            preds.push_back(arg);
        }
    }
    return preds;
}

std::vector<double> predict_fractions(const ModelParams& params, const ExampleSource& data) {
    std::vector<double> preds;
    preds.reserve(static_cast<std::size_t>(data.count()));
    Mat batch(256, data.feature_dim());
    for (int begin = 0; begin < data.count(); begin += 256) {
        const int end = std::min(data.count(), begin + 256);
        batch.rows = end - begin;
        for (int r = 0; r < batch.rows; ++r) data.materialize(begin + r, batch.row(r));
        Mat out = forward(params, batch);
        for (int r = 0; r < out.rows; ++r) preds.push_back(std::clamp(out.at(r, 0), 0.01, 0.99));
    }
    return preds;
}

namespace {

constexpr char kCheckpointMagic[4] = {'G', 'P', 'M', '1'};

void put_mat(std::ostream& out, const Mat& m) {
    for (double v : m.a) binio::put_f64(out, v);
}

void put_vec(std::ostream& out, const std::vector<double>& v) {
    for (double x : v) binio::put_f64(out, x);
}

void get_mat(std::istream& in, Mat& m) {
    for (double& v : m.a) v = binio::get_f64(in);
}

void get_vec(std::istream& in, std::vector<double>& v) {
    for (double& x : v) x = binio::get_f64(in);
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelParams& params, std::uint64_t seed,
                     std::uint64_t config_hash) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    out.write(kCheckpointMagic, 4);
    binio::put_u32(out, params.task == Task::FC ? 0 : 1);
    for (int s : params.sizes) binio::put_u32(out, static_cast<std::uint32_t>(s));
    binio::put_u64(out, seed);
    binio::put_u64(out, config_hash);
    put_mat(out, params.w1);
    put_vec(out, params.b1);
    put_mat(out, params.w2);
    put_vec(out, params.b2);
    put_mat(out, params.w3);
    put_vec(out, params.b3);
    if (!out) throw std::runtime_error("write failed for checkpoint: " + path);
}

ModelParams load_checkpoint(const std::string& path, std::uint64_t* seed,
                            std::uint64_t* config_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0)
        throw std::runtime_error("not a model checkpoint: " + path);

    ModelParams p;
    p.task = binio::get_u32(in) == 0 ? Task::FC : Task::FL;
    for (int& s : p.sizes) s = static_cast<int>(binio::get_u32(in));
    const std::uint64_t s = binio::get_u64(in);
    const std::uint64_t h = binio::get_u64(in);
    if (seed) *seed = s;
    if (config_hash) *config_hash = h;

    p.w1 = Mat(p.sizes[0], p.sizes[1]);
    p.w2 = Mat(p.sizes[1], p.sizes[2]);
    p.w3 = Mat(p.sizes[2], p.sizes[3]);
    p.b1.assign(static_cast<std::size_t>(p.sizes[1]), 0.0);
    p.b2.assign(static_cast<std::size_t>(p.sizes[2]), 0.0);
    p.b3.assign(static_cast<std::size_t>(p.sizes[3]), 0.0);
    get_mat(in, p.w1);
    get_vec(in, p.b1);
    get_mat(in, p.w2);
    get_vec(in, p.b2);
    get_mat(in, p.w3);
    get_vec(in, p.b3);
    if (!in) throw std::runtime_error("truncated checkpoint: " + path);
    return p;
}

std::uint64_t train_config_hash(const TrainConfig& cfg) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.17g|%.17g|%.17g|%.17g|%d|%d|%d|%.17g|%d|%d|%llu",
                  cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon, cfg.batch_size,
                  cfg.max_epochs, cfg.patience, cfg.val_fraction, cfg.hidden1, cfg.hidden2,
                  static_cast<unsigned long long>(cfg.seed));
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char* p = buf; *p; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace gridprobe
