#pragma once

#include <cstdint>
#include <vector>

namespace gridprobe {

// counts[label * n_classes + predicted]
struct ConfusionMatrix {
    int n_classes = 0;
    std::vector<std::int64_t> counts;

    std::int64_t at(int label, int predicted) const {
        return counts[static_cast<std::size_t>(label) * n_classes + predicted];
    }
};

ConfusionMatrix confusion_matrix(const std::vector<int>& labels, const std::vector<int>& predictions,
                                 int n_classes = 11);

enum class F1Average { Macro, Micro, Weighted };

// per-class F1 = 2PR/(P+R), taken as 0 whenever a denominator is 0
double f1_score(const ConfusionMatrix& cm, F1Average avg = F1Average::Macro);
inline double f1_macro(const ConfusionMatrix& cm) { return f1_score(cm, F1Average::Macro); }

// mean |predicted - target| * 100, in percent of line length
double mae_percent(const std::vector<double>& predicted, const std::vector<double>& targets);

// (value - baseline) / baseline * 100
double relative_change(double value, double baseline);

}  // namespace gridprobe
