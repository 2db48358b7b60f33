#include "gridprobe/eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "gridprobe/rng.hpp"

namespace gridprobe {

namespace {

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<WindowRef> select_refs(const std::vector<WindowRef>& all_refs,
                                   const std::vector<char>& member, bool faulted_only) {
    std::vector<WindowRef> out;
    for (const WindowRef& ref : all_refs) {
        if (!member[static_cast<std::size_t>(ref.episode_index)]) continue;
        if (faulted_only && ref.fc_label == FaultType::NoFault) continue;
        out.push_back(ref);
    }
    return out;
}

}  // namespace

FoldAssignment kfold_split(std::size_t n_episodes, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("kfold_split: k must be at least 2");
    if (n_episodes < static_cast<std::size_t>(k))
        throw std::invalid_argument("kfold_split: fewer episodes than folds");

    std::vector<int> order(n_episodes);
    for (std::size_t i = 0; i < n_episodes; ++i) order[i] = static_cast<int>(i);
    Rng rng(mix_seed(seed, 0xf01dULL));
    rng.shuffle(order);

    FoldAssignment folds;
    folds.k = k;
    folds.fold_of_episode.assign(n_episodes, 0);
    for (std::size_t pos = 0; pos < n_episodes; ++pos)
        folds.fold_of_episode[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos % k);
    return folds;
}

std::uint64_t scenario_seed(std::uint64_t master_seed, const DegradationSpec& spec, Task task) {
    return mix_seed(master_seed, fnv1a(spec_to_string(spec)), task == Task::FC ? 1 : 2);
}

std::uint64_t degradation_seed(std::uint64_t master_seed, const DegradationSpec& spec) {
    return mix_seed(master_seed, fnv1a(spec_to_string(spec)), 0xdeedULL);
}

WindowDataSource::WindowDataSource(const std::vector<Episode>& episodes,
                                   std::vector<WindowRef> refs, const DegradationSpec& spec,
                                   const ChannelStats& stats, std::uint64_t degrade_seed)
    : episodes_(&episodes),
      refs_(std::move(refs)),
      spec_(spec),
      stats_(stats),
      degrade_seed_(degrade_seed),
      layout_(ChannelLayout::standard()) {
    if (!stats_.from_training)
        throw std::logic_error("WindowDataSource: normalization stats lack training provenance");
}

void WindowDataSource::materialize(int i, double* dst) const {
    const WindowRef& ref = refs_[static_cast<std::size_t>(i)];
    const Episode& ep = (*episodes_)[static_cast<std::size_t>(ref.episode_index)];
    SignalMatrix w = window_tensor(ep, ref);
    apply_degradation(w, spec_, layout_,
                      mix_seed(degrade_seed_, ref.episode_id,
                               static_cast<std::uint64_t>(ref.start_sample)));
    normalize_window(w, stats_);
    for (std::size_t j = 0; j < w.data.size(); ++j) dst[j] = w.data[j];
}

int WindowDataSource::label(int i) const {
    return fault_class_index(refs_[static_cast<std::size_t>(i)].fc_label);
}

double WindowDataSource::target(int i) const {
    return refs_[static_cast<std::size_t>(i)].fl_target;
}

std::uint64_t WindowDataSource::group(int i) const {
    return refs_[static_cast<std::size_t>(i)].episode_id;
}

FoldSplit split_fold_episodes(const FoldAssignment& folds, int fold, double val_fraction,
                              std::uint64_t fold_seed) {
    const std::size_t n = folds.fold_of_episode.size();
    if (fold < 0 || fold >= folds.k)
        throw std::invalid_argument("split_fold_episodes: fold out of range");

    // episode-level split: test fold, then a validation carve-out from the rest
    std::vector<int> pool;
    FoldSplit split;
    split.in_test.assign(n, 0);
    split.in_val.assign(n, 0);
    split.in_train.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (folds.fold_of_episode[i] == fold)
            split.in_test[i] = 1;
        else
            pool.push_back(static_cast<int>(i));
    }
    Rng carve_rng(mix_seed(fold_seed, 0x5a11ULL));
    carve_rng.shuffle(pool);
    const std::size_t n_val = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(val_fraction * pool.size())));
    for (std::size_t p = 0; p < pool.size(); ++p)
        (p < n_val ? split.in_val : split.in_train)[static_cast<std::size_t>(pool[p])] = 1;
    return split;
}

double run_fold(const std::vector<Episode>& episodes, const std::vector<WindowRef>& all_refs,
                const FoldAssignment& folds, int fold, const DegradationSpec& spec,
                const TrainConfig& base_cfg, Task task, std::uint64_t master_seed,
                const EvalOptions& options) {
    const std::size_t n = episodes.size();
    if (folds.fold_of_episode.size() != n)
        throw std::invalid_argument("run_fold: fold assignment does not match the dataset");
    if (fold < 0 || fold >= folds.k) throw std::invalid_argument("run_fold: fold out of range");

    const std::uint64_t fold_seed =
        mix_seed(scenario_seed(master_seed, spec, task), static_cast<std::uint64_t>(fold));

    const FoldSplit split = split_fold_episodes(folds, fold, base_cfg.val_fraction, fold_seed);
    for (std::size_t i = 0; i < n; ++i)
        if (split.in_test[i] + split.in_val[i] + split.in_train[i] > 1)
            throw std::logic_error("run_fold: split sets overlap");

    const bool faulted_only = task == Task::FL;
    std::vector<WindowRef> train_refs = select_refs(all_refs, split.in_train, faulted_only);
    std::vector<WindowRef> val_refs = select_refs(all_refs, split.in_val, faulted_only);
    std::vector<WindowRef> test_refs = select_refs(all_refs, split.in_test, faulted_only);
    if (train_refs.empty() || val_refs.empty() || test_refs.empty())
        throw std::invalid_argument("run_fold: a split ended up empty; dataset too small");

    const DegradationSpec none{DegradationKind::None, 0};
    const DegradationSpec& train_spec = options.degrade_test_only ? none : spec;
    const std::uint64_t deg_seed = degradation_seed(master_seed, spec);
    const ChannelLayout layout = ChannelLayout::standard();

    // normalization statistics from the (degraded) training windows only
    StatsAccumulator acc;
    for (const WindowRef& ref : train_refs) {
        SignalMatrix w = window_tensor(episodes[static_cast<std::size_t>(ref.episode_index)], ref);
        apply_degradation(w, train_spec, layout,
                          mix_seed(deg_seed, ref.episode_id,
                                   static_cast<std::uint64_t>(ref.start_sample)));
        acc.add(w);
    }
    const ChannelStats stats = acc.finalize();

    WindowDataSource train_src(episodes, std::move(train_refs), train_spec, stats, deg_seed);
    WindowDataSource val_src(episodes, std::move(val_refs), train_spec, stats, deg_seed);
    WindowDataSource test_src(episodes, std::move(test_refs), spec, stats, deg_seed);

    TrainConfig cfg = base_cfg;
    cfg.seed = fold_seed;
    ModelParams params = train(train_src, val_src, cfg, task);

    if (task == Task::FC) {
        std::vector<int> labels(static_cast<std::size_t>(test_src.count()));
        for (int i = 0; i < test_src.count(); ++i)
            labels[static_cast<std::size_t>(i)] = test_src.label(i);
        const std::vector<int> preds = predict_classes(params, test_src);
        return f1_score(confusion_matrix(labels, preds, kNumFaultClasses), options.f1_average);
    }
    std::vector<double> targets(static_cast<std::size_t>(test_src.count()));
    for (int i = 0; i < test_src.count(); ++i)
        targets[static_cast<std::size_t>(i)] = test_src.target(i);
    const std::vector<double> preds = predict_fractions(params, test_src);
    return mae_percent(preds, targets);
}

ScenarioResult aggregate_scenario(const DegradationSpec& spec, Task task,
                                  const std::array<double, 5>& fold_values, double baseline_mean) {
    ScenarioResult result;
    result.spec = spec;
    result.task = task;
    result.fold_values = fold_values;

    double sum = 0.0;
    for (double v : fold_values) sum += v;
    result.mean = sum / 5.0;

    double ss = 0.0;
    for (double v : fold_values) ss += (v - result.mean) * (v - result.mean);
    result.stddev = std::sqrt(ss / 4.0);

    result.delta_vs_baseline_pct =
        std::isnan(baseline_mean) ? 0.0 : relative_change(result.mean, baseline_mean);
    return result;
}

ScenarioResult run_scenario(const std::vector<Episode>& episodes,
                            const std::vector<WindowRef>& all_refs, const FoldAssignment& folds,
                            const DegradationSpec& spec, const TrainConfig& base_cfg, Task task,
                            std::uint64_t master_seed, double baseline_mean,
                            const EvalOptions& options) {
    if (folds.k != 5) throw std::invalid_argument("run_scenario: expects 5-fold assignments");
    std::array<double, 5> values{};
    for (int fold = 0; fold < 5; ++fold) {
        try {
            values[static_cast<std::size_t>(fold)] =
                run_fold(episodes, all_refs, folds, fold, spec, base_cfg, task, master_seed, options);
        } catch (const TrainingError& err) {
            throw TrainingError(std::string(err.what()) + " [scenario " + spec_to_string(spec) +
                                ", fold " + std::to_string(fold) + "]");
        }
    }
    return aggregate_scenario(spec, task, values, baseline_mean);
}

}  // namespace gridprobe
