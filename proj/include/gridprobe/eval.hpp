#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gridprobe/degrade.hpp"
#include "gridprobe/episode.hpp"
#include "gridprobe/metrics.hpp"
#include "gridprobe/mlp.hpp"
#include "gridprobe/preprocess.hpp"

namespace gridprobe {

struct FoldAssignment {
    int k = 5;
    std::vector<int> fold_of_episode;  // indexed by episode position in the dataset
};

// deterministic shuffled partition; fold sizes differ by at most one episode
FoldAssignment kfold_split(std::size_t n_episodes, int k, std::uint64_t seed);

struct ScenarioResult {
    DegradationSpec spec;
    Task task = Task::FC;
    std::array<double, 5> fold_values{};
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation over the folds
    double delta_vs_baseline_pct = 0.0;
};

struct EvalOptions {
    bool degrade_test_only = false;  // ablation: leave training data intact
    F1Average f1_average = F1Average::Macro;
};

// seed shared by every fold of one (scenario, task) cell; derived from the
// canonical scenario string so it does not depend on config ordering
std::uint64_t scenario_seed(std::uint64_t master_seed, const DegradationSpec& spec, Task task);

// degradation seed for a scenario; fold-independent so a window is degraded
// identically no matter which side of a split it lands on
std::uint64_t degradation_seed(std::uint64_t master_seed, const DegradationSpec& spec);

// episode-level membership of one fold's split; exposed for hygiene tests
struct FoldSplit {
    std::vector<char> in_test;  // indexed by episode position
    std::vector<char> in_val;
    std::vector<char> in_train;
};

// test set is the fold itself; the validation set is a seeded carve-out of
// the remainder, never smaller than one episode
FoldSplit split_fold_episodes(const FoldAssignment& folds, int fold, double val_fraction,
                              std::uint64_t fold_seed);

// ExampleSource that crops, degrades, and normalizes windows on demand
class WindowDataSource : public ExampleSource {
public:
    WindowDataSource(const std::vector<Episode>& episodes, std::vector<WindowRef> refs,
                     const DegradationSpec& spec, const ChannelStats& stats,
                     std::uint64_t degrade_seed);

    int count() const override { return static_cast<int>(refs_.size()); }
    int feature_dim() const override { return 48 * kWindowLen; }
    void materialize(int i, double* dst) const override;
    int label(int i) const override;
    double target(int i) const override;
    std::uint64_t group(int i) const override;

private:
    const std::vector<Episode>* episodes_;
    std::vector<WindowRef> refs_;
    DegradationSpec spec_;
    ChannelStats stats_;
    std::uint64_t degrade_seed_;
    ChannelLayout layout_;
};

// trains and evaluates one (scenario, task, fold) cell; returns the fold's
// metric (macro F1 for FC, MAE in percent for FL)
double run_fold(const std::vector<Episode>& episodes, const std::vector<WindowRef>& all_refs,
                const FoldAssignment& folds, int fold, const DegradationSpec& spec,
                const TrainConfig& base_cfg, Task task, std::uint64_t master_seed,
                const EvalOptions& options = {});

// all five folds of one scenario; delta_vs_baseline_pct is filled only when a
// baseline mean is supplied (pass NaN while computing the baseline itself)
ScenarioResult run_scenario(const std::vector<Episode>& episodes,
                            const std::vector<WindowRef>& all_refs, const FoldAssignment& folds,
                            const DegradationSpec& spec, const TrainConfig& base_cfg, Task task,
                            std::uint64_t master_seed, double baseline_mean,
                            const EvalOptions& options = {});

// mean/std aggregation used by both run_scenario and the runner's resume path
ScenarioResult aggregate_scenario(const DegradationSpec& spec, Task task,
                                  const std::array<double, 5>& fold_values, double baseline_mean);

}  // namespace gridprobe
