#pragma once

#include "mtskl/pipeline.hpp"
#include "mtskl/windows.hpp"

#include <string>
#include <vector>

namespace mtskl {

struct WindowExperimentOptions {
    KernelSpec kernel;
    ClassifierConfig classifier; // fixed in advance for every problem
    int count = 10;              // P
    bool standardize = false;
    int resample_base = 25;
    std::uint64_t seed = 0;
    int workers = 1;
};

struct WindowCurvePoint {
    WindowProblem problem;
    MetricTriple metrics;
};

struct EvalReport {
    std::string method;
    std::string classifier;
    ClassifierConfig config;
    std::vector<WindowCurvePoint> curve;
    std::vector<std::string> log_lines;
};

/// Beats-to-minutes annotation at 60-100 bpm: the window end lies between
/// ceil(h/100) and ceil(h/60) minutes before the event.
inline std::pair<int, int> minutes_before_range(int heartbeats) {
    if (heartbeats <= 0) return {0, 0};
    const int lo = (heartbeats + 99) / 100;
    const int hi = (heartbeats + 59) / 60;
    return {lo, hi};
}

/// The early-prediction study: P nested end-aligned window problems, each
/// treated as an independent classification task (kernel refit per problem
/// with the same seed, classifier configuration fixed throughout).
inline EvalReport run_window_experiment(const MtsDataset& train, const MtsDataset& test,
                                        const WindowExperimentOptions& opt) {
    if (!train.labels) throw std::invalid_argument("window experiment: training labels required");
    if (!test.labels) throw std::invalid_argument("window experiment: test labels required");
    int t_min = train.min_length();
    if (!test.empty()) t_min = std::min(t_min, test.min_length());

    const auto train_windows = slice_windows(train, opt.count, t_min);
    const auto test_windows = slice_windows(test, opt.count, t_min);

    EvalReport report;
    report.method = to_string(opt.kernel.method);
    report.classifier = to_string(opt.classifier.kind);
    report.config = opt.classifier;
    report.log_lines.push_back("windows=" + std::to_string(opt.count) +
                               " t_min=" + std::to_string(t_min) +
                               " seed=" + std::to_string(opt.seed));

    for (std::size_t i = 0; i < train_windows.size(); ++i) {
        const auto& [problem, train_slice] = train_windows[i];
        const auto& test_slice = test_windows[i].second;
        const ProblemOutcome outcome =
            classify_problem(train_slice, test_slice, opt.kernel, opt.standardize, opt.resample_base,
                             opt.classifier, opt.seed, opt.workers);
        report.curve.push_back({problem, outcome.metrics});
        report.log_lines.push_back(
            "c" + std::to_string(problem.index) + " window=" + std::to_string(problem.window_len) +
            " before_event=" + std::to_string(problem.steps_before_event) +
            " acc=" + std::to_string(outcome.metrics.acc) + " rec=" + std::to_string(outcome.metrics.rec));
    }
    return report;
}

} // namespace mtskl
