#pragma once

#include "mtskl/kernel_matrix.hpp"
#include "mtskl/kernel_repair.hpp"
#include "mtskl/knn.hpp"
#include "mtskl/svm.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace mtskl {

enum class ClassifierKind { knn_input, knn_embedding, svm_input, svm_embedding };

inline const char* to_string(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::knn_input: return "knn-i";
        case ClassifierKind::knn_embedding: return "knn-e";
        case ClassifierKind::svm_input: return "svm-i";
        case ClassifierKind::svm_embedding: return "svm-e";
    }
    return "?";
}

inline ClassifierKind classifier_from_string(const std::string& s) {
    if (s == "knn-i") return ClassifierKind::knn_input;
    if (s == "knn-e") return ClassifierKind::knn_embedding;
    if (s == "svm-i") return ClassifierKind::svm_input;
    if (s == "svm-e") return ClassifierKind::svm_embedding;
    throw std::invalid_argument("unknown classifier '" + s + "'");
}

struct ClassifierConfig {
    ClassifierKind kind = ClassifierKind::knn_input;
    int k = 1;                                                // kNN
    VectorSimilarity vector_sim = VectorSimilarity::euclidean; // knn-e
    double c_margin = 1.0;                                     // SVM
    double gamma = 1.0;                                        // svm-e
};

struct ClassifierOutput {
    std::vector<int> labels;
    std::vector<double> decision_values; // vote margin for kNN, decision value for SVM
};

/// Run one classifier on kernel blocks: k_tr is the train x train similarity
/// matrix and k_rows holds the evaluation rows (one per sample to classify,
/// columns aligned with k_tr). Embedding-space variants treat rows of these
/// blocks as vectors; input-space SVM spectrally repairs a non-PSD k_tr.
inline ClassifierOutput classify_kernel(const Eigen::MatrixXd& k_tr, const Eigen::MatrixXd& k_rows,
                                        const std::vector<int>& train_labels,
                                        const ClassifierConfig& cfg) {
    if (k_tr.rows() != k_tr.cols())
        throw std::invalid_argument("classify_kernel: train kernel must be square");
    if (k_rows.cols() != k_tr.cols())
        throw std::invalid_argument("classify_kernel: row block misaligned with train kernel");
    if (static_cast<Eigen::Index>(train_labels.size()) != k_tr.rows())
        throw std::invalid_argument("classify_kernel: label count mismatch");

    ClassifierOutput out;
    switch (cfg.kind) {
        case ClassifierKind::knn_input: {
            const auto pred = knn_predict_rows(k_rows, train_labels, cfg.k);
            out.labels = pred.labels;
            out.decision_values = pred.vote_margin;
            break;
        }
        case ClassifierKind::knn_embedding: {
            std::vector<Eigen::VectorXd> train_vecs, test_vecs;
            for (Eigen::Index i = 0; i < k_tr.rows(); ++i)
                train_vecs.push_back(k_tr.row(i).transpose());
            for (Eigen::Index i = 0; i < k_rows.rows(); ++i)
                test_vecs.push_back(k_rows.row(i).transpose());
            const auto pred =
                knn_predict_embedding(test_vecs, train_vecs, train_labels, cfg.k, cfg.vector_sim);
            out.labels = pred.labels;
            out.decision_values = pred.vote_margin;
            break;
        }
        case ClassifierKind::svm_input: {
            KernelMatrix tr;
            tr.values = k_tr;
            tr.symmetric = true;
            KernelMatrix te;
            te.values = k_rows;
            for (Eigen::Index i = 0; i < k_tr.rows(); ++i) {
                tr.row_ids.push_back(std::to_string(i));
                te.col_ids.push_back(std::to_string(i));
            }
            tr.col_ids = tr.row_ids;
            for (Eigen::Index i = 0; i < k_rows.rows(); ++i) te.row_ids.push_back("t" + std::to_string(i));
            auto [rep_tr, rep_te] = repair_indefinite_kernel(tr, te);
            const SvmModel model = svm_fit_precomputed(rep_tr, train_labels, cfg.c_margin);
            for (Eigen::Index i = 0; i < rep_te.values.rows(); ++i) {
                const double f = svm_decision_value(model, rep_te.values.row(i).transpose());
                out.labels.push_back(f > 0.0 ? +1 : -1);
                out.decision_values.push_back(f);
            }
            break;
        }
        case ClassifierKind::svm_embedding: {
            std::vector<Eigen::VectorXd> train_vecs, test_vecs;
            for (Eigen::Index i = 0; i < k_tr.rows(); ++i)
                train_vecs.push_back(k_tr.row(i).transpose());
            for (Eigen::Index i = 0; i < k_rows.rows(); ++i)
                test_vecs.push_back(k_rows.row(i).transpose());
            KernelMatrix tr;
            tr.values = rbf_gram(train_vecs, train_vecs, cfg.gamma);
            tr.symmetric = true;
            for (Eigen::Index i = 0; i < k_tr.rows(); ++i) tr.row_ids.push_back(std::to_string(i));
            tr.col_ids = tr.row_ids;
            const SvmModel model = svm_fit_precomputed(tr, train_labels, cfg.c_margin);
            const Eigen::MatrixXd gram_te = rbf_gram(test_vecs, train_vecs, cfg.gamma);
            for (Eigen::Index i = 0; i < gram_te.rows(); ++i) {
                const double f = svm_decision_value(model, gram_te.row(i).transpose());
                out.labels.push_back(f > 0.0 ? +1 : -1);
                out.decision_values.push_back(f);
            }
            break;
        }
    }
    return out;
}

} // namespace mtskl
