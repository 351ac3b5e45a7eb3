#pragma once

#include "mtskl/classify.hpp"
#include "mtskl/correlation.hpp"
#include "mtskl/cross_validation.hpp"
#include "mtskl/lps.hpp"
#include "mtskl/metrics.hpp"
#include "mtskl/preprocess.hpp"
#include "mtskl/tck.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mtskl {

enum class KernelMethod { lps, tck };

inline const char* to_string(KernelMethod m) { return m == KernelMethod::lps ? "lps" : "tck"; }

inline KernelMethod kernel_method_from_string(const std::string& s) {
    if (s == "lps") return KernelMethod::lps;
    if (s == "tck") return KernelMethod::tck;
    throw std::invalid_argument("unknown kernel method '" + s + "'");
}

struct KernelSpec {
    KernelMethod method = KernelMethod::lps;
    LpsParams lps;
    TckParams tck;
};

struct FittedKernels {
    KernelMatrix k_tr;
    KernelMatrix k_te; // empty when no test set was given
    std::optional<LpsModel> lps_model;
    std::optional<TckModel> tck_model;
};

/// Fit the chosen kernel on the training set and score the test set (which
/// may be empty). Inputs must already be resampled to a common length and,
/// for TCK, standardized.
inline FittedKernels compute_kernels(const MtsDataset& train, const MtsDataset& test,
                                     const KernelSpec& spec, std::uint64_t seed, int workers = 1) {
    FittedKernels out;
    if (spec.method == KernelMethod::lps) {
        out.lps_model = lps_fit(train, spec.lps, seed, workers);
        auto [ktr, kte] = lps_kernel_matrices(*out.lps_model, train, test, workers);
        out.k_tr = std::move(ktr);
        out.k_te = std::move(kte);
    } else {
        auto [model, ktr] = tck_fit(train, spec.tck, seed, workers);
        out.k_tr = std::move(ktr);
        if (!test.empty()) out.k_te = tck_test_kernel(model, test, workers);
        out.k_te.method = "tck";
        out.tck_model = std::move(model);
    }
    return out;
}

struct PrepareOptions {
    bool resample = true;
    int resample_base = 25;
    bool standardize = false;
    std::optional<double> theta_c; // feature selection runs only when set
};

struct PrepareResult {
    MtsDataset train;
    MtsDataset test; // empty when not supplied
    std::optional<CorrelationSummary> correlation;
    std::vector<int> selected; // indices into the original variable list
    std::optional<StandardizerStats> stats;
    int target_len = 0;
};

/// The preprocessing front of the pipeline: optional correlation-based
/// feature selection on the raw series, linear resampling to the common
/// target length, and optional per-variable standardization with training
/// statistics.
inline PrepareResult prepare_datasets(const MtsDataset& train_in, const MtsDataset& test_in,
                                      const PrepareOptions& opt) {
    if (train_in.empty()) throw std::invalid_argument("prepare: empty training set");
    PrepareResult res;
    MtsDataset train = train_in;
    MtsDataset test = test_in;

    if (opt.theta_c) {
        // Correlations are averaged over the whole dataset (train and test
        // pooled); selection is unsupervised so no label information leaks.
        MtsDataset pooled = train;
        pooled.labels.reset();
        for (const auto& s : test.samples) pooled.samples.push_back(s);
        auto summary = average_correlation_matrix(pooled);
        summary.binarize(*opt.theta_c);
        res.selected = select_features(summary);
        res.correlation = std::move(summary);
        train = project_variables(train, res.selected);
        if (!test.empty()) test = project_variables(test, res.selected);
    } else {
        for (int i = 0; i < train.n_variables(); ++i) res.selected.push_back(i);
    }

    if (opt.resample) {
        long long t_max = train.max_length();
        if (!test.empty()) t_max = std::max<long long>(t_max, test.max_length());
        res.target_len = target_length(t_max, opt.resample_base);
        train = resample_dataset(train, res.target_len);
        if (!test.empty()) test = resample_dataset(test, res.target_len);
    } else {
        res.target_len = 0;
    }

    if (opt.standardize) {
        res.stats = compute_variable_stats(train);
        train = standardize_dataset(train, *res.stats);
        if (!test.empty()) test = standardize_dataset(test, *res.stats);
    }

    res.train = std::move(train);
    res.test = std::move(test);
    return res;
}

struct ProblemOutcome {
    MetricTriple metrics;
    std::vector<int> predictions;
    std::vector<double> decision_values;
    std::vector<std::string> test_ids;
};

/// One complete classification problem on raw-length data: resample,
/// optionally standardize, fit the kernel, classify the test set. This is
/// the unit the window experiment repeats per window.
inline ProblemOutcome classify_problem(const MtsDataset& train_raw, const MtsDataset& test_raw,
                                       const KernelSpec& spec, bool standardize, int resample_base,
                                       const ClassifierConfig& classifier, std::uint64_t seed,
                                       int workers = 1) {
    if (!train_raw.labels) throw std::invalid_argument("classify_problem: training labels required");
    PrepareOptions prep;
    prep.resample = true;
    prep.resample_base = resample_base;
    prep.standardize = standardize;
    const PrepareResult prepared = prepare_datasets(train_raw, test_raw, prep);

    const FittedKernels kernels = compute_kernels(prepared.train, prepared.test, spec, seed, workers);
    const ClassifierOutput out =
        classify_kernel(kernels.k_tr.values, kernels.k_te.values, *train_raw.labels, classifier);

    ProblemOutcome res;
    res.predictions = out.labels;
    res.decision_values = out.decision_values;
    for (const auto& s : test_raw.samples) res.test_ids.push_back(s.id);
    if (test_raw.labels) res.metrics = confusion_metrics(*test_raw.labels, out.labels);
    return res;
}

} // namespace mtskl
