#pragma once

#include <stdexcept>
#include <vector>

namespace mtskl {

/// Accuracy, recall of the positive ("close-to-onset") class, and the
/// positive-class F1 score. 0/0 ratios resolve to 0.
struct MetricTriple {
    double acc = 0.0;
    double rec = 0.0;
    double f1 = 0.0;
};

struct ConfusionCounts {
    long tp = 0, fn = 0, fp = 0, tn = 0;
};

inline MetricTriple metrics_from_confusion(const ConfusionCounts& c) {
    const long n = c.tp + c.fn + c.fp + c.tn;
    MetricTriple m;
    m.acc = n > 0 ? static_cast<double>(c.tp + c.tn) / static_cast<double>(n) : 0.0;
    m.rec = (c.tp + c.fn) > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    const long f1_den = 2 * c.tp + c.fp + c.fn;
    m.f1 = f1_den > 0 ? static_cast<double>(2 * c.tp) / static_cast<double>(f1_den) : 0.0;
    return m;
}

inline MetricTriple confusion_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("confusion_metrics: label vectors differ in length");
    ConfusionCounts c;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool t = y_true[i] > 0;
        const bool p = y_pred[i] > 0;
        if (t && p) ++c.tp;
        else if (t && !p) ++c.fn;
        else if (!t && p) ++c.fp;
        else ++c.tn;
    }
    return metrics_from_confusion(c);
}

} // namespace mtskl
