#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "gridprobe/mlp.hpp"
#include "gridprobe/rng.hpp"

using namespace gridprobe;

namespace {

struct ToyProblem {
    Mat batch;
    std::vector<int> labels;
    std::vector<double> targets;
};

ToyProblem make_toy(Task task, int n, int dim, int n_classes, std::uint64_t seed) {
    Rng rng(seed);
    ToyProblem toy;
    toy.batch = Mat(n, dim);
    for (auto& v : toy.batch.a) v = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < n; ++i) {
        if (task == Task::FC)
            toy.labels.push_back(static_cast<int>(rng.uniform_index(
                static_cast<std::uint64_t>(n_classes))));
        else
            toy.targets.push_back(rng.uniform(0.05, 0.95));
    }
    if (task == Task::FC) toy.targets.assign(static_cast<std::size_t>(n), 0.0);
    if (task == Task::FL) toy.labels.assign(static_cast<std::size_t>(n), 0);
    return toy;
}

// collects every trainable parameter as (pointer, matching gradient pointer)
std::vector<std::pair<double*, double*>> parameter_view(ModelParams& p, Gradients& g) {
    std::vector<std::pair<double*, double*>> view;
    for (std::size_t i = 0; i < p.w1.a.size(); ++i) view.push_back({&p.w1.a[i], &g.w1.a[i]});
    for (std::size_t i = 0; i < p.w2.a.size(); ++i) view.push_back({&p.w2.a[i], &g.w2.a[i]});
    for (std::size_t i = 0; i < p.w3.a.size(); ++i) view.push_back({&p.w3.a[i], &g.w3.a[i]});
    for (std::size_t i = 0; i < p.b1.size(); ++i) view.push_back({&p.b1[i], &g.b1[i]});
    for (std::size_t i = 0; i < p.b2.size(); ++i) view.push_back({&p.b2[i], &g.b2[i]});
    for (std::size_t i = 0; i < p.b3.size(); ++i) view.push_back({&p.b3[i], &g.b3[i]});
    return view;
}

double max_gradient_error(Task task, const std::array<int, 4>& sizes, std::uint64_t seed) {
    ModelParams params = init_mlp(sizes, task, seed);
    const ToyProblem toy = make_toy(task, 6, sizes[0], sizes[3], seed + 1);

    Gradients grads;
    loss_and_grad(params, toy.batch, toy.labels, toy.targets, grads);

    auto view = parameter_view(params, grads);
    const double h = 1e-5;
    double worst = 0.0;
    for (auto& [value, grad] : view) {
        const double saved = *value;
        *value = saved + h;
        const double up = batch_loss(params, toy.batch, toy.labels, toy.targets);
        *value = saved - h;
        const double down = batch_loss(params, toy.batch, toy.labels, toy.targets);
        *value = saved;

        const double numeric = (up - down) / (2.0 * h);
        const double denom = std::max({1.0, std::fabs(numeric), std::fabs(*grad)});
        worst = std::max(worst, std::fabs(numeric - *grad) / denom);
    }
    return worst;
}

}  // namespace

TEST_CASE("analytic gradients match central differences for both heads") {
    // ReLU kinks make the check seed-sensitive in principle; these nets are
    // small enough that no activation sits within h of zero
    CHECK(max_gradient_error(Task::FC, {9, 8, 6, 11}, 12345) < 1e-4);
    CHECK(max_gradient_error(Task::FC, {5, 12, 4, 11}, 777) < 1e-4);
    CHECK(max_gradient_error(Task::FL, {9, 8, 6, 1}, 54321) < 1e-4);
    CHECK(max_gradient_error(Task::FL, {7, 10, 5, 1}, 999) < 1e-4);
}

TEST_CASE("forward matches a naive reference across kernel sizes") {
    // hidden sizes cover the specialized matmul paths and one generic fallback
    for (int hidden : {16, 32, 64, 128, 256, 24}) {
        const std::array<int, 4> sizes = {13, hidden, hidden, 11};
        const ModelParams p = init_mlp(sizes, Task::FC, 42);
        Mat batch(9, 13);
        Rng rng(7);
        for (auto& v : batch.a) v = rng.uniform(-2.0, 2.0);

        const Mat out = forward(p, batch);
        REQUIRE(out.rows == 9);
        REQUIRE(out.cols == 11);

        for (int i = 0; i < batch.rows; ++i) {
            // layer 1
            std::vector<double> a1(static_cast<std::size_t>(sizes[1]));
            for (int j = 0; j < sizes[1]; ++j) {
                double s = p.b1[static_cast<std::size_t>(j)];
                for (int k = 0; k < sizes[0]; ++k) s += batch.at(i, k) * p.w1.at(k, j);
                a1[static_cast<std::size_t>(j)] = std::max(0.0, s);
            }
            std::vector<double> a2(static_cast<std::size_t>(sizes[2]));
            for (int j = 0; j < sizes[2]; ++j) {
                double s = p.b2[static_cast<std::size_t>(j)];
                for (int k = 0; k < sizes[1]; ++k) s += a1[static_cast<std::size_t>(k)] * p.w2.at(k, j);
                a2[static_cast<std::size_t>(j)] = std::max(0.0, s);
            }
            std::vector<double> logits(static_cast<std::size_t>(sizes[3]));
            double peak = -1e300;
            for (int j = 0; j < sizes[3]; ++j) {
                double s = p.b3[static_cast<std::size_t>(j)];
                for (int k = 0; k < sizes[2]; ++k) s += a2[static_cast<std::size_t>(k)] * p.w3.at(k, j);
                logits[static_cast<std::size_t>(j)] = s;
                peak = std::max(peak, s);
            }
            double z = 0.0;
            for (double& v : logits) {
                v = std::exp(v - peak);
                z += v;
            }
            for (int j = 0; j < sizes[3]; ++j)
                CHECK(out.at(i, j) == doctest::Approx(logits[static_cast<std::size_t>(j)] / z)
                                          .epsilon(1e-10));
        }
    }
}

TEST_CASE("adam step reproduces the textbook update") {
    const std::array<int, 4> sizes = {2, 16, 16, 1};
    ModelParams p = init_mlp(sizes, Task::FL, 3);
    const double w0 = p.w1.at(0, 0);

    Gradients g;
    g.w1 = Mat(sizes[0], sizes[1]);
    g.w2 = Mat(sizes[1], sizes[2]);
    g.w3 = Mat(sizes[2], sizes[3]);
    g.b1.assign(static_cast<std::size_t>(sizes[1]), 0.0);
    g.b2.assign(static_cast<std::size_t>(sizes[2]), 0.0);
    g.b3.assign(static_cast<std::size_t>(sizes[3]), 0.0);
    g.w1.at(0, 0) = 0.5;

    TrainConfig cfg;
    cfg.learning_rate = 0.01;
    AdamState state;  // t == 0, so moments are allocated lazily on first use
    adam_step(p, g, state, cfg);

    // first step: m_hat = grad, v_hat = grad^2, update = lr * sign-ish form
    const double m_hat = 0.5;
    const double v_hat = 0.25;
    const double expected = w0 - 0.01 * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    CHECK(p.w1.at(0, 0) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(state.t == 1);

    // untouched weights stay put
    CHECK(p.w1.at(1, 1) == init_mlp(sizes, Task::FL, 3).w1.at(1, 1));
}

TEST_CASE("early stopper tracks the best epoch with patience") {
    EarlyStopper stopper(3);
    CHECK(stopper.observe(1.0));   // epoch 1, improvement
    CHECK(stopper.observe(0.8));   // epoch 2, improvement
    CHECK_FALSE(stopper.observe(0.9));
    CHECK_FALSE(stopper.should_stop());
    CHECK_FALSE(stopper.observe(0.85));
    CHECK_FALSE(stopper.should_stop());
    CHECK_FALSE(stopper.observe(0.81));  // third epoch without improvement
    CHECK(stopper.should_stop());
    CHECK(stopper.best_epoch() == 2);
    CHECK(stopper.best_loss() == doctest::Approx(0.8));
}

TEST_CASE("training fits separable toy problems") {
    // FC: class = quadrant of a 2d point
    Rng rng(21);
    DenseSource train_set, val;
    auto fill = [&](DenseSource& dst, int n) {
        dst.x = Mat(n, 2);
        for (int i = 0; i < n; ++i) {
            const double a = rng.uniform(-1.0, 1.0);
            const double b = rng.uniform(-1.0, 1.0);
            dst.x.at(i, 0) = a;
            dst.x.at(i, 1) = b;
            dst.labels.push_back((a > 0 ? 1 : 0) + (b > 0 ? 2 : 0));
            dst.targets.push_back(0.0);
        }
    };
    fill(train_set, 400);
    fill(val, 100);
    for (int i = 0; i < train_set.count(); ++i)
        train_set.groups.push_back(static_cast<std::uint64_t>(i));
    for (int i = 0; i < val.count(); ++i)
        val.groups.push_back(static_cast<std::uint64_t>(100000 + i));

    TrainConfig cfg;
    cfg.hidden1 = 16;
    cfg.hidden2 = 16;
    cfg.batch_size = 32;
    cfg.max_epochs = 60;
    cfg.patience = 60;
    cfg.learning_rate = 3e-3;
    cfg.seed = 5;

    TrainHistory history;
    const ModelParams params = train(train_set, val, cfg, Task::FC, &history);
    CHECK(history.best_epoch >= 1);
    CHECK(history.train_loss.size() == history.val_loss.size());

    const std::vector<int> preds = predict_classes(params, val);
    int correct = 0;
    for (int i = 0; i < val.count(); ++i)
        if (preds[static_cast<std::size_t>(i)] == val.labels[static_cast<std::size_t>(i)]) ++correct;
    CHECK(correct >= 90);
}

TEST_CASE("regression head recovers a linear target and clamps predictions") {
    Rng rng(33);
    DenseSource train_set, val;
    auto fill = [&](DenseSource& dst, int n) {
        dst.x = Mat(n, 3);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < 3; ++j) {
                dst.x.at(i, j) = rng.uniform(0.0, 1.0);
                s += dst.x.at(i, j);
            }
            dst.labels.push_back(0);
            dst.targets.push_back(s / 3.0);
        }
    };
    fill(train_set, 500);
    fill(val, 120);
    for (int i = 0; i < train_set.count(); ++i)
        train_set.groups.push_back(static_cast<std::uint64_t>(i));
    for (int i = 0; i < val.count(); ++i)
        val.groups.push_back(static_cast<std::uint64_t>(100000 + i));

    TrainConfig cfg;
    cfg.hidden1 = 16;
    cfg.hidden2 = 16;
    cfg.batch_size = 32;
    cfg.max_epochs = 80;
    cfg.patience = 80;
    cfg.learning_rate = 2e-3;
    cfg.seed = 6;

    const ModelParams params = train(train_set, val, cfg, Task::FL);
    const std::vector<double> preds = predict_fractions(params, val);
    double mae = 0.0;
    for (int i = 0; i < val.count(); ++i) {
        CHECK(preds[static_cast<std::size_t>(i)] >= 0.01);
        CHECK(preds[static_cast<std::size_t>(i)] <= 0.99);
        mae += std::fabs(preds[static_cast<std::size_t>(i)] -
                         val.targets[static_cast<std::size_t>(i)]);
    }
    mae /= val.count();
    CHECK(mae < 0.06);
}

TEST_CASE("diverging training raises a training error") {
    Rng rng(8);
    DenseSource train_set, val;
    auto fill = [&](DenseSource& dst, int n) {
        dst.x = Mat(n, 2);
        for (auto& v : dst.x.a) v = rng.uniform(-1.0, 1.0) * 1e60;
        dst.labels.assign(static_cast<std::size_t>(n), 0);
        dst.targets.assign(static_cast<std::size_t>(n), 0.5);
    };
    fill(train_set, 64);
    fill(val, 16);
    for (int i = 0; i < train_set.count(); ++i)
        train_set.groups.push_back(static_cast<std::uint64_t>(i));
    for (int i = 0; i < val.count(); ++i)
        val.groups.push_back(static_cast<std::uint64_t>(100000 + i));

    TrainConfig cfg;
    cfg.hidden1 = 16;
    cfg.hidden2 = 16;
    cfg.batch_size = 16;
    cfg.max_epochs = 5;
    cfg.learning_rate = 1e200;
    cfg.seed = 1;

    CHECK_THROWS_AS(train(train_set, val, cfg, Task::FL), TrainingError);
}

TEST_CASE("checkpoints round-trip parameters and metadata") {
    const std::array<int, 4> sizes = {6, 16, 16, 11};
    const ModelParams original = init_mlp(sizes, Task::FC, 77);

    const auto path = std::filesystem::temp_directory_path() / "gridprobe_ckpt_test.bin";
    save_checkpoint(path.string(), original, 4242, 987654321ULL);

    std::uint64_t seed = 0, config_hash = 0;
    const ModelParams loaded = load_checkpoint(path.string(), &seed, &config_hash);
    std::filesystem::remove(path);

    CHECK(seed == 4242);
    CHECK(config_hash == 987654321ULL);
    CHECK(loaded.task == original.task);
    CHECK(loaded.sizes == original.sizes);
    CHECK(loaded.w1.a == original.w1.a);
    CHECK(loaded.w2.a == original.w2.a);
    CHECK(loaded.w3.a == original.w3.a);
    CHECK(loaded.b1 == original.b1);
    CHECK(loaded.b2 == original.b2);
    CHECK(loaded.b3 == original.b3);

    // identical predictions on a random batch
    Mat batch(5, 6);
    Rng rng(3);
    for (auto& v : batch.a) v = rng.uniform(-1.0, 1.0);
    const Mat a = forward(original, batch);
    const Mat b = forward(loaded, batch);
    CHECK(a.a == b.a);
}

TEST_CASE("train config hash separates configs") {
    TrainConfig a, b;
    b.learning_rate = 2e-4;
    CHECK(train_config_hash(a) == train_config_hash(a));
    CHECK(train_config_hash(a) != train_config_hash(b));
    TrainConfig c;
    c.hidden1 = 128;
    CHECK(train_config_hash(a) != train_config_hash(c));
}
