#pragma once

#include "mtskl/kernel_matrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtskl {

/// Soft-margin SVM trained on a precomputed kernel. alphas are the dual
/// variables; decision value of a test row k is sum_j alpha_j y_j k_j + bias.
struct SvmModel {
    Eigen::VectorXd alphas;
    double bias = 0.0;
    std::vector<int> labels_pm; // +1 / -1 per training sample
    std::vector<std::string> train_ids;
    double c_margin = 1.0;
    double kkt_tol = 1e-4;
    int iterations = 0;
    bool converged = false;

    double dual_objective(const Eigen::MatrixXd& k) const {
        const auto n = alphas.size();
        double lin = alphas.sum();
        double quad = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                quad += alphas(i) * alphas(j) * labels_pm[static_cast<std::size_t>(i)] *
                        labels_pm[static_cast<std::size_t>(j)] * k(i, j);
        return lin - 0.5 * quad;
    }
};

/// Two-variable coordinate ascent on the SVM dual (maximal-violating-pair
/// working set, as in SMO). The kernel must be PSD for guaranteed
/// convergence; repair indefinite similarity matrices first.
inline SvmModel svm_fit_precomputed(const KernelMatrix& k_tr, const std::vector<int>& labels,
                                    double c_margin, double kkt_tol = 1e-4,
                                    long max_iter = 100000) {
    k_tr.validate();
    if (k_tr.values.rows() != k_tr.values.cols())
        throw std::invalid_argument("svm_fit_precomputed: kernel must be square");
    const auto n = k_tr.values.rows();
    if (static_cast<Eigen::Index>(labels.size()) != n)
        throw std::invalid_argument("svm_fit_precomputed: label count mismatch");
    if (c_margin <= 0.0) throw std::invalid_argument("svm_fit_precomputed: C must be > 0");
    bool has_pos = false, has_neg = false;
    for (int y : labels) {
        if (y > 0) has_pos = true;
        else has_neg = true;
    }
    if (!has_pos || !has_neg)
        throw std::runtime_error("svm_fit_precomputed: both classes must be present");

    const Eigen::MatrixXd& k = k_tr.values;
    SvmModel model;
    model.labels_pm = labels;
    model.train_ids = k_tr.row_ids;
    model.c_margin = c_margin;
    model.kkt_tol = kkt_tol;
    model.alphas = Eigen::VectorXd::Zero(n);

    // gradient of (1/2) a'Qa - e'a  with Q_ij = y_i y_j K_ij; starts at -e
    Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);
    const auto y = [&](Eigen::Index i) { return static_cast<double>(labels[static_cast<std::size_t>(i)]); };

    long it = 0;
    for (; it < max_iter; ++it) {
        // maximal violating pair
        double up_best = -std::numeric_limits<double>::infinity();
        double low_best = std::numeric_limits<double>::infinity();
        Eigen::Index i_up = -1, j_low = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double yg = -y(i) * grad(i);
            const bool in_up = (y(i) > 0 && model.alphas(i) < c_margin) ||
                               (y(i) < 0 && model.alphas(i) > 0);
            const bool in_low = (y(i) > 0 && model.alphas(i) > 0) ||
                                (y(i) < 0 && model.alphas(i) < c_margin);
            if (in_up && yg > up_best) {
                up_best = yg;
                i_up = i;
            }
            if (in_low && yg < low_best) {
                low_best = yg;
                j_low = i;
            }
        }
        if (i_up < 0 || j_low < 0 || up_best - low_best < kkt_tol) {
            model.converged = true;
            break;
        }
        const Eigen::Index i = i_up, j = j_low;

        // curvature along the feasible direction (da_i, da_j) = (y_i, -y_j) t
        double quad = k(i, i) + k(j, j) - 2.0 * k(i, j);
        if (quad <= 0.0) quad = 1e-12;
        const double delta = (up_best - low_best) / quad;

        // step along the feasible direction, clipped to the box
        const double old_ai = model.alphas(i);
        const double old_aj = model.alphas(j);
        double step = delta;
        if (y(i) > 0)
            step = std::min(step, c_margin - old_ai);
        else
            step = std::min(step, old_ai);
        if (y(j) > 0)
            step = std::min(step, old_aj);
        else
            step = std::min(step, c_margin - old_aj);
        model.alphas(i) = old_ai + y(i) * step;
        model.alphas(j) = old_aj - y(j) * step;

        const double dai = model.alphas(i) - old_ai;
        const double daj = model.alphas(j) - old_aj;
        for (Eigen::Index t = 0; t < n; ++t)
            grad(t) += y(t) * (y(i) * k(t, i) * dai + y(j) * k(t, j) * daj);
    }
    model.iterations = static_cast<int>(it);

    // bias from free support vectors; fall back to the violation midpoint
    double sum = 0.0;
    int free_count = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (model.alphas(i) > 0.0 && model.alphas(i) < c_margin) {
            sum += -y(i) * grad(i);
            ++free_count;
        }
    }
    if (free_count > 0) {
        model.bias = sum / free_count;
    } else {
        double up_best = -std::numeric_limits<double>::infinity();
        double low_best = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i) {
            const double yg = -y(i) * grad(i);
            const bool in_up = (y(i) > 0 && model.alphas(i) < c_margin) ||
                               (y(i) < 0 && model.alphas(i) > 0);
            const bool in_low = (y(i) > 0 && model.alphas(i) > 0) ||
                                (y(i) < 0 && model.alphas(i) < c_margin);
            if (in_up) up_best = std::max(up_best, yg);
            if (in_low) low_best = std::min(low_best, yg);
        }
        model.bias = 0.5 * (up_best + low_best);
    }
    return model;
}

inline double svm_decision_value(const SvmModel& model, const Eigen::VectorXd& k_row) {
    if (k_row.size() != model.alphas.size())
        throw std::invalid_argument("svm_decision_value: kernel row length mismatch");
    double f = model.bias;
    for (Eigen::Index j = 0; j < model.alphas.size(); ++j)
        f += model.alphas(j) * model.labels_pm[static_cast<std::size_t>(j)] * k_row(j);
    return f;
}

/// Predicted labels for each test row of K_te; a decision value of exactly 0
/// resolves to the negative class.
inline std::vector<int> svm_predict(const SvmModel& model, const KernelMatrix& k_te) {
    k_te.validate();
    if (k_te.col_ids != model.train_ids)
        throw std::invalid_argument("svm_predict: K_te columns do not align with training ids");
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(k_te.values.rows()));
    for (Eigen::Index i = 0; i < k_te.values.rows(); ++i) {
        const double f = svm_decision_value(model, k_te.values.row(i).transpose());
        out.push_back(f > 0.0 ? +1 : -1);
    }
    return out;
}

/// Gaussian kernel between two row collections: exp(-gamma * ||a_i - b_j||^2).
inline Eigen::MatrixXd rbf_gram(const std::vector<Eigen::VectorXd>& rows_a,
                                const std::vector<Eigen::VectorXd>& rows_b, double gamma) {
    if (gamma <= 0.0) throw std::invalid_argument("rbf_gram: gamma must be > 0");
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows_a.size()),
                        static_cast<Eigen::Index>(rows_b.size()));
    for (std::size_t i = 0; i < rows_a.size(); ++i)
        for (std::size_t j = 0; j < rows_b.size(); ++j) {
            if (rows_a[i].size() != rows_b[j].size())
                throw std::invalid_argument("rbf_gram: vector length mismatch");
            const double d2 = (rows_a[i] - rows_b[j]).squaredNorm();
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::exp(-gamma * d2);
        }
    return out;
}

} // namespace mtskl
