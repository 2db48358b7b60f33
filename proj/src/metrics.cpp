#include "gridprobe/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace gridprobe {

ConfusionMatrix confusion_matrix(const std::vector<int>& labels,
                                 const std::vector<int>& predictions, int n_classes) {
    if (labels.size() != predictions.size())
        throw std::invalid_argument("confusion_matrix: length mismatch");
    if (n_classes < 1) throw std::invalid_argument("confusion_matrix: n_classes must be positive");

    ConfusionMatrix cm;
    cm.n_classes = n_classes;
    cm.counts.assign(static_cast<std::size_t>(n_classes) * n_classes, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int y = labels[i];
        const int p = predictions[i];
        if (y < 0 || y >= n_classes || p < 0 || p >= n_classes)
            throw std::invalid_argument("confusion_matrix: class index out of range");
        ++cm.counts[static_cast<std::size_t>(y) * n_classes + p];
    }
    return cm;
}

double f1_score(const ConfusionMatrix& cm, F1Average avg) {
    const int n = cm.n_classes;
    std::int64_t total = 0;
    for (std::int64_t c : cm.counts) total += c;

    if (avg == F1Average::Micro) {
        // with single-label predictions, micro F1 equals accuracy
        if (total == 0) return 0.0;
        std::int64_t correct = 0;
        for (int c = 0; c < n; ++c) correct += cm.at(c, c);
        return static_cast<double>(correct) / static_cast<double>(total);
    }

    double sum = 0.0;
    for (int c = 0; c < n; ++c) {
        std::int64_t tp = cm.at(c, c);
        std::int64_t fp = 0, fn = 0, support = 0;
        for (int o = 0; o < n; ++o) {
            if (o != c) {
                fp += cm.at(o, c);
                fn += cm.at(c, o);
            }
            support += cm.at(c, o);
        }
        const double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
        const double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
        const double f1 =
            precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
        if (avg == F1Average::Macro)
            sum += f1 / n;
        else  // weighted by class support
            sum += total == 0 ? 0.0 : f1 * static_cast<double>(support) / static_cast<double>(total);
    }
    return sum;
}

double mae_percent(const std::vector<double>& predicted, const std::vector<double>& targets) {
    if (predicted.empty()) throw std::invalid_argument("mae_percent: empty input");
    if (predicted.size() != targets.size())
        throw std::invalid_argument("mae_percent: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) sum += std::fabs(predicted[i] - targets[i]);
    return sum / static_cast<double>(predicted.size()) * 100.0;
}

double relative_change(double value, double baseline) {
    if (baseline == 0.0) throw std::invalid_argument("relative_change: zero baseline");
    return (value - baseline) / baseline * 100.0;
}

}  // namespace gridprobe
