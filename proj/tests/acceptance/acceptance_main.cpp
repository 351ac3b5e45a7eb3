// Acceptance suite: one pass/fail line per criterion. Usage:
//   acceptance_tests [path-to-mtskl-cli]
// The CLI path is required by the determinism and integration criteria.

#include "mtskl/mtskl.hpp"

#include "../qp_oracle.hpp"
#include "../test_helpers.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mtskl;

namespace {

struct Check {
    bool ok = true;
    std::string reason;
    void require(bool cond, const std::string& why) {
        if (!cond && ok) {
            ok = false;
            reason = why;
        }
    }
};

struct Runner {
    int failed = 0;
    int passed = 0;

    void criterion(int number, const std::string& label, double budget_seconds,
                   const std::function<void(Check&)>& body) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            body(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (budget_seconds > 0 && elapsed > budget_seconds)
            check.require(false, "runtime " + std::to_string(elapsed) + "s exceeds budget of " +
                                     std::to_string(budget_seconds) + "s");
        std::ostringstream line;
        line << (check.ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << label << " ("
             << std::fixed << std::setprecision(2) << elapsed << "s)";
        if (!check.ok) line << " -- " << check.reason;
        std::cout << line.str() << std::endl;
        (check.ok ? passed : failed)++;
    }
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool trees_identical(const fs::path& a, const fs::path& b, std::string& mismatch) {
    std::vector<fs::path> rel;
    for (const auto& entry : fs::recursive_directory_iterator(a))
        if (entry.is_regular_file()) rel.push_back(fs::relative(entry.path(), a));
    std::sort(rel.begin(), rel.end());
    for (const auto& r : rel) {
        if (!fs::exists(b / r)) {
            mismatch = r.string() + " missing in second run";
            return false;
        }
        if (read_file(a / r) != read_file(b / r)) {
            mismatch = r.string() + " differs between runs";
            return false;
        }
    }
    return true;
}

int run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>/dev/null";
    return std::system(cmd.c_str());
}

// raw-length two-class dataset written as a train/ + test/ root
void write_root(const fs::path& root, const MtsDataset& train, const MtsDataset& test) {
    write_dataset_dir(root / "train", train);
    write_dataset_dir(root / "test", test);
}

MtsDataset equal_length_dataset(int n_per_class, int n_vars, int len, double sep, double missing,
                                std::uint64_t seed, const std::string& prefix) {
    return mtskl_test::make_two_class_dataset(n_per_class, n_vars, len, sep, missing, seed, 2,
                                              prefix);
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const fs::path work = fs::temp_directory_path() / "mtskl_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    Runner runner;

    // ------------------------------------------------------------------ 1
    runner.criterion(1, "metric arithmetic matches the published kNN-i/LPS row", 1.0, [](Check& c) {
        const MetricTriple m = metrics_from_confusion({26, 2, 14, 14});
        c.require(std::abs(m.acc - 0.714) < 1e-3, "ACC " + std::to_string(m.acc));
        c.require(std::abs(m.rec - 0.928) < 1e-3, "REC " + std::to_string(m.rec));
        c.require(std::abs(m.f1 - 0.764) < 2e-3, "F1 " + std::to_string(m.f1));
    });

    // ------------------------------------------------------------------ 2
    runner.criterion(2, "TCK kernels symmetric and PSD on 20 seeded datasets", 60.0, [](Check& c) {
        TckParams params;
        params.q = 5;
        params.c_max = 10;
        for (std::uint64_t run = 0; run < 20; ++run) {
            auto ds = mtskl_test::make_two_class_dataset(20, 3, 25, 1.5, 0.15, 9000 + run);
            const auto [model, ktr] = tck_fit(ds, params, run, 4);
            c.require((ktr.values - ktr.values.transpose()).cwiseAbs().maxCoeff() == 0.0,
                      "K_tr asymmetric on run " + std::to_string(run));
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ktr.values, Eigen::EigenvaluesOnly);
            const double min_ev = es.eigenvalues().minCoeff();
            const double max_ev = es.eigenvalues().maxCoeff();
            c.require(min_ev >= -1e-8 * max_ev,
                      "min eigenvalue " + std::to_string(min_ev) + " on run " + std::to_string(run));
            if (!c.ok) return;
        }
    });

    // ------------------------------------------------------------------ 3
    runner.criterion(3, "LPS self-similarity, symmetry, range, scale invariance", 30.0,
                     [](Check& c) {
        auto ds = mtskl_test::make_random_dataset(30, 4, 25, 0.1, 777);
        LpsParams params;
        params.n_trees = 50;
        params.seg_len = 5;
        const auto model = lps_fit(ds, params, 55);
        const auto [ktr, kte] = lps_kernel_matrices(model, ds, MtsDataset{});
        for (Eigen::Index i = 0; i < ktr.values.rows() && c.ok; ++i) {
            c.require(ktr.values(i, i) == 1.0, "diagonal not exactly 1");
            for (Eigen::Index j = 0; j < ktr.values.cols(); ++j) {
                c.require(ktr.values(i, j) == ktr.values(j, i), "symmetry not exact");
                c.require(ktr.values(i, j) >= 0.0 && ktr.values(i, j) <= 1.0, "range violated");
            }
        }
        MtsDataset scaled = ds;
        for (auto& s : scaled.samples) s.values *= 2.0;
        const auto model2 = lps_fit(scaled, params, 55);
        const auto [ktr2, kte2] = lps_kernel_matrices(model2, scaled, MtsDataset{});
        c.require(ktr.values == ktr2.values, "K not bit-identical under uniform rescaling");
    });

    // ------------------------------------------------------------------ 4
    runner.criterion(4, "missing-data robustness: kNN-i test ACC >= 0.90 for TCK and LPS", 120.0,
                     [](Check& c) {
        auto train = equal_length_dataset(30, 4, 25, 3.0, 0.20, 4100, "s");
        auto test = equal_length_dataset(30, 4, 25, 3.0, 0.20, 4200, "t");

        // LPS on the raw series
        {
            LpsParams params;
            params.n_trees = 60;
            params.seg_len = 8;
            const auto model = lps_fit(train, params, 11, 4);
            const auto [ktr, kte] = lps_kernel_matrices(model, train, test, 4);
            const auto cv = cross_validate(ktr, *train.labels, default_cv_plan(11), ClassifierKind::knn_input);
            const auto pred = knn_predict_input(kte, *train.labels, cv.best.k);
            const double acc = confusion_metrics(*test.labels, pred.labels).acc;
            c.require(acc >= 0.90, "LPS kNN-i accuracy " + std::to_string(acc));
        }
        // TCK on standardized series
        {
            const auto stats = compute_variable_stats(train);
            const auto tr = standardize_dataset(train, stats);
            const auto te = standardize_dataset(test, stats);
            TckParams params;
            params.q = 6;
            params.c_max = 8;
            const auto [model, ktr] = tck_fit(tr, params, 12, 4);
            const auto kte = tck_test_kernel(model, te, 4);
            const auto cv = cross_validate(ktr, *train.labels, default_cv_plan(12), ClassifierKind::knn_input);
            const auto pred = knn_predict_input(kte, *train.labels, cv.best.k);
            const double acc = confusion_metrics(*test.labels, pred.labels).acc;
            c.require(acc >= 0.90, "TCK kNN-i accuracy " + std::to_string(acc));
        }
    });

    // ------------------------------------------------------------------ 5
    runner.criterion(5, "SVM dual matches the projected-gradient oracle on 50 problems", 60.0,
                     [](Check& c) {
        Rng rng(derive_seed(5150, "acceptance.svm"));
        for (int trial = 0; trial < 50 && c.ok; ++trial) {
            const int n = 3 + static_cast<int>(rng.uniform_int(0, 5));
            Eigen::MatrixXd a(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rng.normal();
            const Eigen::MatrixXd gram = a * a.transpose();
            std::vector<int> labels;
            for (int i = 0; i < n; ++i) labels.push_back(i % 2 == 0 ? +1 : -1);
            const double c_margin = std::exp(rng.uniform_real(-1.5, 2.0));

            KernelMatrix k;
            k.values = gram;
            k.symmetric = true;
            for (int i = 0; i < n; ++i) k.row_ids.push_back(std::to_string(i));
            k.col_ids = k.row_ids;

            const auto model = svm_fit_precomputed(k, labels, c_margin, 1e-8, 2000000);
            const auto oracle = mtskl_test::qp_oracle(gram, labels, c_margin);
            const double gap = std::abs(model.dual_objective(gram) - oracle.objective);
            c.require(gap < 1e-4, "dual objective gap " + std::to_string(gap) + " on trial " +
                                      std::to_string(trial));

            const auto pred = svm_predict(model, k);
            for (Eigen::Index i = 0; i < n; ++i) {
                double f = oracle.bias;
                for (Eigen::Index j = 0; j < n; ++j)
                    f += oracle.alphas(j) * labels[static_cast<std::size_t>(j)] * gram(i, j);
                const int expect = f > 0.0 ? +1 : -1;
                c.require(pred[static_cast<std::size_t>(i)] == expect,
                          "prediction mismatch on trial " + std::to_string(trial));
            }
        }
    });

    // ------------------------------------------------------------------ 6
    runner.criterion(6, "resampling formula: T_M=3364 -> 25 and identity below 25", 1.0,
                     [](Check& c) {
        c.require(target_length(3364) == 25, "target_length(3364) != 25");
        for (int t = 1; t <= 25; ++t)
            c.require(target_length(t) == t, "target_length(" + std::to_string(t) + ") != identity");
    });

    // ------------------------------------------------------------------ 7
    runner.criterion(7, "window protocol reproduces the published catalogue; c10 == direct run",
                     120.0, [&](Check& c) {
        auto train = equal_length_dataset(6, 3, 960, 2.5, 0.05, 7100, "s");
        auto test = equal_length_dataset(4, 3, 960, 2.5, 0.05, 7200, "t");

        WindowExperimentOptions opt;
        opt.kernel.method = KernelMethod::lps;
        opt.kernel.lps.n_trees = 12;
        opt.kernel.lps.seg_len = 5;
        opt.classifier.kind = ClassifierKind::knn_input;
        opt.classifier.k = 3;
        opt.count = 10;
        opt.seed = 4242;
        opt.workers = 4;

        const EvalReport report = run_window_experiment(train, test, opt);
        c.require(report.curve.size() == 10, "expected 10 problems");
        for (int i = 0; i < 10 && c.ok; ++i) {
            const auto& p = report.curve[static_cast<std::size_t>(i)].problem;
            c.require(p.window_len == 96 * (i + 1),
                      "window size " + std::to_string(p.window_len) + " at c" + std::to_string(i + 1));
            c.require(p.steps_before_event == 960 - 96 * (i + 1),
                      "offset " + std::to_string(p.steps_before_event) + " at c" + std::to_string(i + 1));
        }
        const auto [lo, hi] = minutes_before_range(864);
        c.require(lo == 9 && hi == 15, "c1 minute annotation");

        const fs::path table = work / "window_table.csv";
        write_window_table(table, report.curve, opt.seed);
        const std::string contents = read_file(table);
        c.require(contents.find("c1,96,864,~9-15") != std::string::npos, "table row c1 missing");
        c.require(contents.find("c10,960,0,0") != std::string::npos, "table row c10 missing");

        const ProblemOutcome direct =
            classify_problem(train, test, opt.kernel, false, opt.resample_base, opt.classifier,
                             opt.seed, 4);
        const auto& last = report.curve.back().metrics;
        c.require(last.acc == direct.metrics.acc && last.rec == direct.metrics.rec,
                  "c10 metrics differ from the direct run");
    });

    // ------------------------------------------------------------------ 8
    runner.criterion(8, "CLI determinism: kernel, cv, windows byte-identical on rerun", 120.0,
                     [&](Check& c) {
        if (cli.empty()) {
            c.require(false, "CLI path not supplied (argv[1])");
            return;
        }
        const fs::path root = work / "det_data";
        write_root(root, equal_length_dataset(8, 3, 60, 2.5, 0.1, 8100, "s"),
                   equal_length_dataset(6, 3, 60, 2.5, 0.1, 8200, "t"));

        const std::string base = "--input \"" + root.string() + "\" --seed 99 ";
        struct Cmd {
            std::string name;
            std::string args;
        };
        const std::vector<Cmd> cmds = {
            {"kernel-lps", "kernel " + base + "--method lps --nT 10 --L 5"},
            {"kernel-tck", "kernel " + base + "--method tck --Q 2 --C-mixtures 4"},
            {"cv", "cv " + base + "--method lps --nT 10 --L 5 --classifier knn-i --folds 4"},
            {"windows",
             "windows " + base + "--method lps --nT 10 --L 5 --classifier knn-i --k 3 --count 5"},
        };
        for (const auto& cmd : cmds) {
            const fs::path out1 = work / ("det_" + cmd.name + "_1");
            const fs::path out2 = work / ("det_" + cmd.name + "_2");
            for (const auto& out : {out1, out2}) {
                const int rc = run_cli(cli, cmd.args + " --output \"" + out.string() + "\"");
                c.require(rc == 0, cmd.name + " exited with " + std::to_string(rc));
                if (!c.ok) return;
            }
            std::string mismatch;
            c.require(trees_identical(out1, out2, mismatch), cmd.name + ": " + mismatch);
            if (!c.ok) return;
        }
    });

    // ------------------------------------------------------------------ 9
    runner.criterion(9, "k=2 vote ties resolve to the negative class on 100 random rows", 5.0,
                     [](Check& c) {
        Rng rng(derive_seed(99, "acceptance.ties"));
        const int n_tr = 20;
        std::vector<int> labels;
        for (int j = 0; j < n_tr; ++j) labels.push_back(j < n_tr / 2 ? +1 : -1);
        Eigen::MatrixXd sims(100, n_tr);
        for (int i = 0; i < 100; ++i) {
            for (int j = 0; j < n_tr; ++j) sims(i, j) = 0.5 * rng.uniform01();
            // plant the two nearest neighbors: one positive, one negative
            const int pos = static_cast<int>(rng.uniform_int(0, n_tr / 2 - 1));
            const int neg = static_cast<int>(rng.uniform_int(n_tr / 2, n_tr - 1));
            sims(i, pos) = 0.9 + 0.05 * rng.uniform01();
            sims(i, neg) = 0.8 + 0.05 * rng.uniform01();
        }
        const auto pred = knn_predict_rows(sims, labels, 2);
        for (int i = 0; i < 100; ++i)
            c.require(pred.labels[static_cast<std::size_t>(i)] == -1,
                      "row " + std::to_string(i) + " not negative");
    });

    // ------------------------------------------------------------------ 10
    runner.criterion(10, "integration pathway: 95-variable prepare/kernel/classify end-to-end",
                     120.0, [&](Check& c) {
        if (cli.empty()) {
            c.require(false, "CLI path not supplied (argv[1])");
            return;
        }
        // synthetic stand-in for user-supplied feature series: 95 variables in
        // correlated blocks, ragged lengths, sporadic missing entries
        const int n_vars = 95;
        Rng rng(derive_seed(10101, "acceptance.integration"));
        MtsDataset train, test;
        for (int v = 0; v < n_vars; ++v) {
            train.variable_names.push_back("feat" + std::to_string(v));
        }
        test.variable_names = train.variable_names;
        const auto make_sample = [&](const std::string& id, int len, int y) {
            Eigen::MatrixXd vals(n_vars, len);
            BoolMatrix mask(n_vars, len);
            std::vector<double> base(static_cast<std::size_t>(len));
            for (int v = 0; v < n_vars; ++v) {
                if (v % 5 == 0)
                    for (int t = 0; t < len; ++t)
                        base[static_cast<std::size_t>(t)] = rng.normal() + (v < 10 ? 0.8 * y : 0.0);
                for (int t = 0; t < len; ++t) {
                    const bool obs = rng.uniform01() >= 0.05;
                    mask(v, t) = obs;
                    // variables within a block are affine copies plus small noise
                    vals(v, t) = obs ? base[static_cast<std::size_t>(t)] * (1.0 + 0.01 * (v % 5)) +
                                           0.05 * rng.normal()
                                     : missing_value();
                }
            }
            return Mts(id, std::move(vals), std::move(mask));
        };
        std::vector<int> train_labels, test_labels;
        for (int i = 0; i < 12; ++i) {
            const int y = i < 6 ? +1 : -1;
            char buf[8];
            std::snprintf(buf, sizeof(buf), "s%02d", i);
            train.samples.push_back(make_sample(buf, 80 + 4 * i, y));
            train_labels.push_back(y);
        }
        for (int i = 0; i < 8; ++i) {
            const int y = i < 4 ? +1 : -1;
            char buf[8];
            std::snprintf(buf, sizeof(buf), "t%02d", i);
            test.samples.push_back(make_sample(buf, 90 + 3 * i, y));
            test_labels.push_back(y);
        }
        train.labels = train_labels;
        test.labels = test_labels;

        const fs::path raw = work / "integration_raw";
        write_root(raw, train, test);

        const fs::path prepared = work / "integration_prepared";
        int rc = run_cli(cli, "prepare --input \"" + raw.string() + "\" --output \"" +
                                  prepared.string() + "\" --theta-c 0.4");
        c.require(rc == 0, "prepare exited with " + std::to_string(rc));
        c.require(fs::exists(prepared / "selection_report.txt"), "selection report missing");
        c.require(fs::exists(prepared / "train" / "manifest.txt"), "prepared train split missing");
        if (!c.ok) return;

        const fs::path out = work / "integration_out";
        rc = run_cli(cli, "classify --input \"" + prepared.string() + "\" --output \"" +
                              out.string() +
                              "\" --method lps --nT 20 --L 5 --classifier knn-i --k 3 --seed 1");
        c.require(rc == 0, "classify exited with " + std::to_string(rc));
        c.require(fs::exists(out / "results_table.csv"), "Table-II-shaped results file missing");
        c.require(fs::exists(out / "predictions.csv"), "predictions missing");
        if (!c.ok) return;

        const std::string report = read_file(prepared / "selection_report.txt");
        std::cout << "       note: with the original challenge features this pathway is expected"
                  << " to retain 22 of 95 variables and reach ~0.714 accuracy (kNN-i/LPS);"
                  << " recorded, not asserted, on synthetic stand-in data." << std::endl;
        c.require(report.find("selected_count=") != std::string::npos,
                  "selection report lacks a selected_count entry");
    });

    std::cout << runner.passed << " passed, " << runner.failed << " failed" << std::endl;
    return runner.failed == 0 ? 0 : 1;
}
