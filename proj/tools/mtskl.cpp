// Command-line front end of the MTS kernel-similarity toolkit.
//
// Subcommands: prepare, kernel, cv, classify, windows. A dataset root is
// either a single dataset directory (manifest.txt + per-sample CSVs) or a
// directory holding train/ and, optionally, test/ dataset directories.

#include <CLI11.hpp>

#include "mtskl/mtskl.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mtskl;

namespace {

struct DatasetRootData {
    MtsDataset train;
    MtsDataset test; // empty when the root has no test split
};

DatasetRootData load_root(const fs::path& root) {
    DatasetRootData data;
    if (fs::exists(root / "manifest.txt")) {
        data.train = load_dataset_dir(root);
        data.train.role = DatasetRole::train;
        return data;
    }
    if (!fs::exists(root / "train" / "manifest.txt"))
        throw std::runtime_error("no dataset at '" + root.string() +
                                 "': expected manifest.txt or a train/ subdirectory");
    data.train = load_dataset_dir(root / "train");
    data.train.role = DatasetRole::train;
    if (fs::exists(root / "test" / "manifest.txt")) {
        data.test = load_dataset_dir(root / "test");
        data.test.role = DatasetRole::test;
        if (data.test.variable_names != data.train.variable_names)
            throw std::runtime_error("train and test splits declare different variables");
    }
    return data;
}

void require_labels(const MtsDataset& ds, const char* what) {
    if (!ds.labels) throw std::runtime_error(std::string(what) + ": dataset has no labels.csv");
}

struct KernelFlags {
    std::string method = "lps";
    int n_trees = 200;
    int seg_len = 10;
    int q = 30;
    int c_mixtures = 40;

    void add_to(CLI::App* cmd, bool required_method = true) {
        auto* m = cmd->add_option("--method", method, "kernel similarity: lps or tck")
                      ->check(CLI::IsMember({"lps", "tck"}));
        if (required_method) m->required();
        cmd->add_option("--nT", n_trees, "LPS: number of regression trees");
        cmd->add_option("--L", seg_len, "LPS: segment length");
        cmd->add_option("--Q", q, "TCK: number of random initializations");
        cmd->add_option("--C-mixtures", c_mixtures, "TCK: maximum number of mixture components");
    }

    KernelSpec spec() const {
        KernelSpec s;
        s.method = kernel_method_from_string(method);
        s.lps.n_trees = n_trees;
        s.lps.seg_len = seg_len;
        s.tck.q = q;
        s.tck.c_max = c_mixtures;
        return s;
    }
};

struct ClassifierFlags {
    std::string classifier = "knn-i";
    int k = 1;
    std::string vector_sim = "euclidean";
    double c_margin = 1.0;
    double gamma = 1.0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--classifier", classifier, "knn-i, knn-e, svm-i or svm-e")
            ->check(CLI::IsMember({"knn-i", "knn-e", "svm-i", "svm-e"}))
            ->required();
        cmd->add_option("--k", k, "kNN: number of neighbors");
        cmd->add_option("--vector-sim", vector_sim,
                        "knn-e: euclidean, cosine, cityblock or pearson")
            ->check(CLI::IsMember({"euclidean", "cosine", "cityblock", "pearson"}));
        cmd->add_option("--C-margin", c_margin, "SVM: soft-margin parameter C");
        cmd->add_option("--gamma", gamma, "svm-e: rbf bandwidth");
    }

    ClassifierConfig config() const {
        ClassifierConfig c;
        c.kind = classifier_from_string(classifier);
        c.k = k;
        c.vector_sim = vector_similarity_from_string(vector_sim);
        c.c_margin = c_margin;
        c.gamma = gamma;
        return c;
    }
};

bool flag_on(const std::string& v, const char* flag) {
    if (v == "on") return true;
    if (v == "off") return false;
    throw std::runtime_error(std::string(flag) + " must be 'on' or 'off'");
}

void write_run_log(const fs::path& path, const std::vector<std::string>& lines) {
    std::ofstream out(path);
    out << "# mtskl_version=" << kVersion << "\n";
    for (const auto& l : lines) out << l << "\n";
}

// ---------------------------------------------------------------------------

int cmd_prepare(const fs::path& input, const fs::path& output, std::optional<double> theta_c,
                const std::string& standardize, const std::string& resample, int resample_base) {
    const DatasetRootData data = load_root(input);
    PrepareOptions opt;
    opt.resample = flag_on(resample, "--resample");
    opt.resample_base = resample_base;
    opt.standardize = flag_on(standardize, "--standardize");
    opt.theta_c = theta_c;

    const PrepareResult res = prepare_datasets(data.train, data.test, opt);

    fs::create_directories(output);
    std::vector<std::pair<std::string, std::string>> extra = {
        {"prepared", "true"},
        {"standardized", opt.standardize ? "true" : "false"},
    };
    if (res.target_len > 0) extra.emplace_back("resampled_to", std::to_string(res.target_len));
    write_dataset_dir(output / "train", res.train, extra);
    if (!res.test.empty()) write_dataset_dir(output / "test", res.test, extra);

    std::ofstream rep(output / "selection_report.txt");
    rep << "# mtskl_version=" << kVersion << "\n";
    rep << "input_variables=" << data.train.n_variables() << "\n";
    if (theta_c) {
        rep << "theta_c=" << *theta_c << "\n";
        rep << "selected_count=" << res.selected.size() << "\n";
        rep << "selected_indices=";
        for (std::size_t i = 0; i < res.selected.size(); ++i)
            rep << (i ? "," : "") << res.selected[i];
        rep << "\n";
        rep << "selected_names=";
        for (std::size_t i = 0; i < res.train.variable_names.size(); ++i)
            rep << (i ? "," : "") << res.train.variable_names[i];
        rep << "\n";
        if (res.correlation)
            for (const auto& w : res.correlation->warnings) rep << "warning=" << w << "\n";
    } else {
        rep << "theta_c=none (feature selection skipped)\n";
        rep << "selected_count=" << res.selected.size() << "\n";
    }
    if (res.target_len > 0) rep << "resampled_to=" << res.target_len << "\n";
    rep << "standardized=" << (opt.standardize ? "true" : "false") << "\n";

    std::cout << "prepared " << res.train.size() << " training";
    if (!res.test.empty()) std::cout << " and " << res.test.size() << " test";
    std::cout << " samples, " << res.train.n_variables() << " variables -> " << output << "\n";
    return 0;
}

int cmd_kernel(const fs::path& input, const fs::path& output, const KernelFlags& kf,
               std::uint64_t seed, int workers) {
    const DatasetRootData data = load_root(input);
    data.train.validate(true);
    const KernelSpec spec = kf.spec();
    const FittedKernels kernels = compute_kernels(data.train, data.test, spec, seed, workers);

    fs::create_directories(output);
    write_kernel_csv(output / "K_tr.csv", kernels.k_tr, seed);
    if (kernels.k_te.values.size() > 0) write_kernel_csv(output / "K_te.csv", kernels.k_te, seed);
    if (kernels.lps_model) save_lps_model(output / "model_lps.txt", *kernels.lps_model);
    if (kernels.tck_model) save_tck_model(output / "model_tck.txt", *kernels.tck_model);

    std::vector<std::string> log = {"command=kernel", "method=" + kf.method,
                                    "seed=" + std::to_string(seed)};
    if (kernels.tck_model)
        log.push_back("partitions=" + std::to_string(kernels.tck_model->partition_count()));
    for (const auto& w : kernels.tck_model ? kernels.tck_model->warnings : std::vector<std::string>{})
        log.push_back("warning=" + w);
    write_run_log(output / "kernel_log.txt", log);

    std::cout << "kernel " << kf.method << ": K_tr " << kernels.k_tr.rows() << "x"
              << kernels.k_tr.cols();
    if (kernels.k_te.values.size() > 0)
        std::cout << ", K_te " << kernels.k_te.rows() << "x" << kernels.k_te.cols();
    std::cout << " -> " << output << "\n";
    return 0;
}

int cmd_cv(const fs::path& input, const fs::path& output, const KernelFlags& kf,
           const std::string& classifier, int folds, std::uint64_t seed, int workers) {
    const DatasetRootData data = load_root(input);
    require_labels(data.train, "cv");
    data.train.validate(true);

    const KernelSpec spec = kf.spec();
    MtsDataset no_test;
    const FittedKernels kernels = compute_kernels(data.train, no_test, spec, seed, workers);

    const CvPlan plan = default_cv_plan(seed, folds);
    const ClassifierKind kind = classifier_from_string(classifier);
    const CvResult res = cross_validate(kernels.k_tr, *data.train.labels, plan, kind);

    fs::create_directories(output);
    {
        std::ofstream out(output / "chosen_config.txt");
        out << "# mtskl_version=" << kVersion << "\n";
        out << "# seed=" << seed << "\n";
        out << "classifier=" << classifier << "\n";
        switch (kind) {
            case ClassifierKind::knn_input:
                out << "k=" << res.best.k << "\n";
                break;
            case ClassifierKind::knn_embedding:
                out << "k=" << res.best.k << "\n";
                out << "vector-sim=" << to_string(res.best.vector_sim) << "\n";
                break;
            case ClassifierKind::svm_input:
                out << "C-margin=" << io_detail::format_double(res.best.c_margin) << "\n";
                break;
            case ClassifierKind::svm_embedding:
                out << "C-margin=" << io_detail::format_double(res.best.c_margin) << "\n";
                out << "gamma=" << io_detail::format_double(res.best.gamma) << "\n";
                break;
        }
        out << "validation_acc=" << io_detail::format_double(res.validation_acc) << "\n";
        out << "folds=" << folds << "\n";
    }
    std::vector<std::string> log = {"command=cv", "method=" + kf.method, "classifier=" + classifier,
                                    "seed=" + std::to_string(seed),
                                    "folds=" + std::to_string(folds)};
    if (kind == ClassifierKind::svm_embedding)
        log.push_back("rbf_convention=exp(-gamma*||ki-kj||^2)");
    std::string fold_line = "fold_assignment=";
    for (std::size_t i = 0; i < res.fold_assignment.size(); ++i)
        fold_line += (i ? "," : "") + std::to_string(res.fold_assignment[i]);
    log.push_back(fold_line);
    write_run_log(output / "cv_log.txt", log);

    std::cout << "cv " << classifier << " on " << kf.method << ": validation acc "
              << res.validation_acc << " -> " << output << "\n";
    return 0;
}

int cmd_classify(const fs::path& input, const fs::path& output, const KernelFlags& kf,
                 const ClassifierFlags& cf, std::uint64_t seed, int workers) {
    const DatasetRootData data = load_root(input);
    require_labels(data.train, "classify");
    if (data.test.empty()) throw std::runtime_error("classify: input root has no test/ split");
    data.train.validate(true);
    data.test.validate(true);

    const KernelSpec spec = kf.spec();
    const FittedKernels kernels = compute_kernels(data.train, data.test, spec, seed, workers);
    const ClassifierConfig cfg = cf.config();
    const ClassifierOutput out =
        classify_kernel(kernels.k_tr.values, kernels.k_te.values, *data.train.labels, cfg);

    fs::create_directories(output);
    std::vector<std::string> ids;
    for (const auto& s : data.test.samples) ids.push_back(s.id);
    write_predictions_csv(output / "predictions.csv", ids, out.labels, out.decision_values,
                          data.test, seed);

    std::vector<std::string> log = {"command=classify", "method=" + kf.method,
                                    "classifier=" + cf.classifier, "seed=" + std::to_string(seed)};
    if (cfg.kind == ClassifierKind::svm_embedding)
        log.push_back("rbf_convention=exp(-gamma*||ki-kj||^2)");
    if (data.test.labels) {
        const MetricTriple m = confusion_metrics(*data.test.labels, out.labels);
        std::ofstream mout(output / "metrics.csv");
        mout << "# mtskl_version=" << kVersion << "\n";
        mout << "# seed=" << seed << "\n";
        mout << "acc,rec,f1\n";
        mout << io_detail::format_double(m.acc) << ',' << io_detail::format_double(m.rec) << ','
             << io_detail::format_double(m.f1) << "\n";

        ResultRow row{cf.classifier, kf.method, m, cfg};
        write_results_table(output / "results_table.csv", {row}, seed);
        log.push_back("acc=" + io_detail::format_double(m.acc));
        log.push_back("rec=" + io_detail::format_double(m.rec));
        log.push_back("f1=" + io_detail::format_double(m.f1));
        std::cout << "classify " << cf.classifier << " on " << kf.method << ": acc " << m.acc
                  << " rec " << m.rec << " f1 " << m.f1 << " -> " << output << "\n";
    } else {
        std::cout << "classify " << cf.classifier << " on " << kf.method << ": predictions -> "
                  << output << " (test labels unavailable, no metrics)\n";
    }
    write_run_log(output / "classify_log.txt", log);
    return 0;
}

int cmd_windows(const fs::path& input, const fs::path& output, const KernelFlags& kf,
                const ClassifierFlags& cf, int count, const std::string& standardize,
                int resample_base, std::uint64_t seed, int workers) {
    const DatasetRootData data = load_root(input);
    require_labels(data.train, "windows");
    if (data.test.empty()) throw std::runtime_error("windows: input root has no test/ split");
    require_labels(data.test, "windows");

    WindowExperimentOptions opt;
    opt.kernel = kf.spec();
    opt.classifier = cf.config();
    opt.count = count;
    opt.resample_base = resample_base;
    opt.seed = seed;
    opt.workers = workers;
    if (standardize == "auto")
        opt.standardize = opt.kernel.method == KernelMethod::tck;
    else
        opt.standardize = flag_on(standardize, "--standardize");

    const EvalReport report = run_window_experiment(data.train, data.test, opt);

    fs::create_directories(output);
    write_window_table(output / "window_table.csv", report.curve, seed);
    write_window_curves(output / "window_curves.csv", report.curve, seed);
    write_window_chart_svg(output / "window_chart.svg", report.curve,
                           report.classifier + " / " + report.method);
    std::vector<std::string> log = {"command=windows", "method=" + kf.method,
                                    "classifier=" + cf.classifier, "seed=" + std::to_string(seed),
                                    "standardize=" + std::string(opt.standardize ? "on" : "off")};
    log.insert(log.end(), report.log_lines.begin(), report.log_lines.end());
    write_run_log(output / "windows_log.txt", log);

    std::cout << "windows " << cf.classifier << " on " << kf.method << ": " << report.curve.size()
              << " problems -> " << output << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MTS kernel-similarity toolkit (LPS / TCK)"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; command-line flags take precedence");

    std::string input, output;
    std::uint64_t seed = 0;
    int workers = 1;

    // prepare
    auto* prepare = app.add_subcommand("prepare", "resample, standardize and select features");
    std::string p_standardize = "off", p_resample = "on";
    int p_base = 25;
    double p_theta = -1.0;
    bool p_theta_set = false;
    prepare->add_option("--input", input)->required();
    prepare->add_option("--output", output)->required();
    auto* theta_opt = prepare->add_option("--theta-c", p_theta,
                                          "correlation threshold; enables feature selection")
                          ->check(CLI::Range(0.0, 1.0));
    prepare->add_option("--standardize", p_standardize)->check(CLI::IsMember({"on", "off"}));
    prepare->add_option("--resample", p_resample)->check(CLI::IsMember({"on", "off"}));
    prepare->add_option("--resample-base", p_base)->check(CLI::PositiveNumber);
    prepare->callback([&] { p_theta_set = theta_opt->count() > 0; });

    // kernel
    auto* kernel = app.add_subcommand("kernel", "fit a kernel and write K_tr / K_te");
    KernelFlags kernel_kf;
    kernel->add_option("--input", input)->required();
    kernel->add_option("--output", output)->required();
    kernel_kf.add_to(kernel);
    kernel->add_option("--seed", seed)->required();
    kernel->add_option("--workers", workers)->check(CLI::PositiveNumber);

    // cv
    auto* cv = app.add_subcommand("cv", "cross-validated hyperparameter search");
    KernelFlags cv_kf;
    std::string cv_classifier;
    int cv_folds = 5;
    cv->add_option("--input", input)->required();
    cv->add_option("--output", output)->required();
    cv_kf.add_to(cv);
    cv->add_option("--classifier", cv_classifier)
        ->check(CLI::IsMember({"knn-i", "knn-e", "svm-i", "svm-e"}))
        ->required();
    cv->add_option("--folds", cv_folds)->check(CLI::Range(2, 1000));
    cv->add_option("--seed", seed)->required();
    cv->add_option("--workers", workers)->check(CLI::PositiveNumber);

    // classify
    auto* classify = app.add_subcommand("classify", "classify the test split");
    KernelFlags classify_kf;
    ClassifierFlags classify_cf;
    classify->add_option("--input", input)->required();
    classify->add_option("--output", output)->required();
    classify_kf.add_to(classify);
    classify_cf.add_to(classify);
    classify->add_option("--seed", seed)->required();
    classify->add_option("--workers", workers)->check(CLI::PositiveNumber);

    // windows
    auto* windows = app.add_subcommand("windows", "windows-of-increasing-length experiment");
    KernelFlags windows_kf;
    ClassifierFlags windows_cf;
    int w_count = 10;
    std::string w_standardize = "auto";
    int w_base = 25;
    windows->add_option("--input", input)->required();
    windows->add_option("--output", output)->required();
    windows_kf.add_to(windows);
    windows_cf.add_to(windows);
    windows->add_option("--count", w_count, "number of window problems P")->check(CLI::PositiveNumber);
    windows->add_option("--standardize", w_standardize)->check(CLI::IsMember({"on", "off", "auto"}));
    windows->add_option("--resample-base", w_base)->check(CLI::PositiveNumber);
    windows->add_option("--seed", seed)->required();
    windows->add_option("--workers", workers)->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (prepare->parsed())
            return cmd_prepare(input, output,
                               p_theta_set ? std::optional<double>(p_theta) : std::nullopt,
                               p_standardize, p_resample, p_base);
        if (kernel->parsed()) return cmd_kernel(input, output, kernel_kf, seed, workers);
        if (cv->parsed()) return cmd_cv(input, output, cv_kf, cv_classifier, cv_folds, seed, workers);
        if (classify->parsed())
            return cmd_classify(input, output, classify_kf, classify_cf, seed, workers);
        if (windows->parsed())
            return cmd_windows(input, output, windows_kf, windows_cf, w_count, w_standardize, w_base,
                               seed, workers);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
