#pragma once

#include "mtskl/classify.hpp"
#include "mtskl/kernel_matrix.hpp"
#include "mtskl/metrics.hpp"
#include "mtskl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mtskl {

struct CvPlan {
    int folds = 5;
    std::vector<int> knn_k_grid;
    std::vector<double> svm_c_grid;
    std::vector<double> svm_gamma_grid;
    std::vector<VectorSimilarity> similarity_grid;
    std::uint64_t seed = 0;
};

/// Paper grids: k in [1,49], C log2-spaced in [2^-20, 2^10] (16 points),
/// gamma log2-spaced in [2^-5, 2^5] (11 points), all four vector similarities.
inline CvPlan default_cv_plan(std::uint64_t seed, int folds = 5) {
    CvPlan plan;
    plan.folds = folds;
    plan.seed = seed;
    for (int k = 1; k <= 49; ++k) plan.knn_k_grid.push_back(k);
    for (int e = -20; e <= 10; e += 2) plan.svm_c_grid.push_back(std::ldexp(1.0, e));
    for (int e = -5; e <= 5; ++e) plan.svm_gamma_grid.push_back(std::ldexp(1.0, e));
    plan.similarity_grid = {VectorSimilarity::euclidean, VectorSimilarity::cosine,
                            VectorSimilarity::cityblock, VectorSimilarity::pearson};
    return plan;
}

/// Seeded stratified fold assignment: within each class, indices are
/// shuffled and dealt round-robin, so fold class counts differ by at most 1.
inline std::vector<int> stratified_fold_assignment(const std::vector<int>& labels, int folds,
                                                   std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("stratified folds: need at least 2 folds");
    std::vector<int> assign(labels.size(), -1);
    Rng rng(derive_seed(seed, "cv.folds"));
    for (int cls : {+1, -1}) {
        std::vector<int> idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if ((labels[i] > 0) == (cls > 0)) idx.push_back(static_cast<int>(i));
        if (static_cast<int>(idx.size()) < folds)
            throw std::runtime_error("stratified folds: a class has fewer members than folds");
        rng.shuffle(idx);
        for (std::size_t p = 0; p < idx.size(); ++p)
            assign[static_cast<std::size_t>(idx[p])] = static_cast<int>(p) % folds;
    }
    return assign;
}

/// Mean validation accuracy of one configuration over the given folds.
inline double cv_mean_accuracy(const KernelMatrix& k_tr, const std::vector<int>& labels,
                               const std::vector<int>& fold_assign, int folds,
                               const ClassifierConfig& cfg) {
    double total = 0.0;
    for (int f = 0; f < folds; ++f) {
        std::vector<Eigen::Index> tr, val;
        for (std::size_t i = 0; i < fold_assign.size(); ++i) {
            if (fold_assign[i] == f)
                val.push_back(static_cast<Eigen::Index>(i));
            else
                tr.push_back(static_cast<Eigen::Index>(i));
        }
        Eigen::MatrixXd sub_tr(static_cast<Eigen::Index>(tr.size()),
                               static_cast<Eigen::Index>(tr.size()));
        Eigen::MatrixXd sub_val(static_cast<Eigen::Index>(val.size()),
                                static_cast<Eigen::Index>(tr.size()));
        for (std::size_t a = 0; a < tr.size(); ++a)
            for (std::size_t b = 0; b < tr.size(); ++b)
                sub_tr(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    k_tr.values(tr[a], tr[b]);
        for (std::size_t a = 0; a < val.size(); ++a)
            for (std::size_t b = 0; b < tr.size(); ++b)
                sub_val(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    k_tr.values(val[a], tr[b]);
        std::vector<int> tr_labels, val_labels;
        for (auto i : tr) tr_labels.push_back(labels[static_cast<std::size_t>(i)]);
        for (auto i : val) val_labels.push_back(labels[static_cast<std::size_t>(i)]);

        const ClassifierOutput pred = classify_kernel(sub_tr, sub_val, tr_labels, cfg);
        total += confusion_metrics(val_labels, pred.labels).acc;
    }
    return total / static_cast<double>(folds);
}

struct CvResult {
    ClassifierConfig best;
    double validation_acc = 0.0;
    std::vector<int> fold_assignment;
};

/// Grid search over the plan for one classifier kind. Score ties resolve to
/// the smaller k (then similarity declaration order) for kNN and to the
/// smaller C (then smaller gamma) for SVM.
inline CvResult cross_validate(const KernelMatrix& k_tr, const std::vector<int>& labels,
                               const CvPlan& plan, ClassifierKind kind) {
    k_tr.validate();
    if (!k_tr.symmetric) throw std::invalid_argument("cross_validate: K_tr must be symmetric");
    if (static_cast<Eigen::Index>(labels.size()) != k_tr.values.rows())
        throw std::invalid_argument("cross_validate: label count mismatch");

    CvResult res;
    res.fold_assignment = stratified_fold_assignment(labels, plan.folds, plan.seed);

    // k may not exceed the smallest fold-training size
    int min_fold_train = static_cast<int>(labels.size());
    for (int f = 0; f < plan.folds; ++f) {
        int in_fold = 0;
        for (int a : res.fold_assignment)
            if (a == f) ++in_fold;
        min_fold_train = std::min(min_fold_train, static_cast<int>(labels.size()) - in_fold);
    }

    struct Candidate {
        ClassifierConfig cfg;
        double acc;
        int kind_index; // declaration order of the vector similarity
    };
    std::vector<Candidate> cands;

    const auto eval = [&](const ClassifierConfig& cfg, int kind_index) {
        cands.push_back({cfg, cv_mean_accuracy(k_tr, labels, res.fold_assignment, plan.folds, cfg),
                         kind_index});
    };

    switch (kind) {
        case ClassifierKind::knn_input:
            for (int k : plan.knn_k_grid) {
                if (k > min_fold_train) continue;
                ClassifierConfig cfg;
                cfg.kind = kind;
                cfg.k = k;
                eval(cfg, 0);
            }
            break;
        case ClassifierKind::knn_embedding:
            for (std::size_t s = 0; s < plan.similarity_grid.size(); ++s)
                for (int k : plan.knn_k_grid) {
                    if (k > min_fold_train) continue;
                    ClassifierConfig cfg;
                    cfg.kind = kind;
                    cfg.k = k;
                    cfg.vector_sim = plan.similarity_grid[s];
                    eval(cfg, static_cast<int>(s));
                }
            break;
        case ClassifierKind::svm_input:
            for (double c : plan.svm_c_grid) {
                ClassifierConfig cfg;
                cfg.kind = kind;
                cfg.c_margin = c;
                eval(cfg, 0);
            }
            break;
        case ClassifierKind::svm_embedding:
            for (double c : plan.svm_c_grid)
                for (double g : plan.svm_gamma_grid) {
                    ClassifierConfig cfg;
                    cfg.kind = kind;
                    cfg.c_margin = c;
                    cfg.gamma = g;
                    eval(cfg, 0);
                }
            break;
    }
    if (cands.empty()) throw std::runtime_error("cross_validate: empty hyperparameter grid");

    const auto better = [](const Candidate& a, const Candidate& b) {
        if (a.acc != b.acc) return a.acc > b.acc;
        if (a.cfg.k != b.cfg.k) return a.cfg.k < b.cfg.k;
        if (a.kind_index != b.kind_index) return a.kind_index < b.kind_index;
        if (a.cfg.c_margin != b.cfg.c_margin) return a.cfg.c_margin < b.cfg.c_margin;
        return a.cfg.gamma < b.cfg.gamma;
    };
    const Candidate* best = &cands.front();
    for (const auto& c : cands)
        if (better(c, *best)) best = &c;
    res.best = best->cfg;
    res.validation_acc = best->acc;
    return res;
}

} // namespace mtskl
