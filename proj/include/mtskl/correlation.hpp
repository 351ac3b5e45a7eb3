#pragma once

#include "mtskl/mts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtskl {

/// Averaged per-sample Pearson correlations between variable pairs together
/// with the thresholded version used for feature selection.
struct CorrelationSummary {
    Eigen::MatrixXd avg_corr;        // V x V, symmetric, unit diagonal
    BoolMatrix binarized;            // |avg_corr| >= theta_c
    double theta_c = -1.0;           // < 0 until binarize() is called
    std::vector<std::string> warnings;

    void binarize(double theta) {
        if (theta < 0.0 || theta > 1.0)
            throw std::invalid_argument("CorrelationSummary: theta_c must be in [0,1]");
        theta_c = theta;
        const auto v = avg_corr.rows();
        binarized.resize(v, v);
        for (Eigen::Index i = 0; i < v; ++i)
            for (Eigen::Index j = 0; j < v; ++j)
                binarized(i, j) = std::abs(avg_corr(i, j)) >= theta;
    }
};

namespace detail {

// Pearson correlation of two variables within one sample over jointly
// observed steps. Returns false when the support is < 2 points or either
// variable is constant there (correlation undefined).
inline bool pairwise_pearson(const Mts& m, int i, int j, double& out) {
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    int n = 0;
    for (int t = 0; t < m.length(); ++t) {
        if (!m.mask(i, t) || !m.mask(j, t)) continue;
        const double x = m.values(i, t);
        const double y = m.values(j, t);
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return false;
    const double dn = static_cast<double>(n);
    const double vx = sxx - sx * sx / dn;
    const double vy = syy - sy * sy / dn;
    if (vx <= 0.0 || vy <= 0.0) return false;
    const double cov = sxy - sx * sy / dn;
    out = std::clamp(cov / std::sqrt(vx * vy), -1.0, 1.0);
    return true;
}

} // namespace detail

/// Average of the per-sample correlation matrices. Samples where a pair is
/// undefined (joint support < 2 or a constant variable) are skipped for that
/// pair; a pair no sample can score gets 0 and a recorded warning. The
/// diagonal is forced to 1.
inline CorrelationSummary average_correlation_matrix(const MtsDataset& ds) {
    if (ds.empty()) throw std::invalid_argument("average_correlation_matrix: empty dataset");
    ds.validate();
    const int v = ds.samples.front().n_variables();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(v, v);
    Eigen::MatrixXd contrib = Eigen::MatrixXd::Zero(v, v);
    for (const auto& m : ds.samples) {
        for (int i = 0; i < v; ++i) {
            for (int j = i + 1; j < v; ++j) {
                double r;
                if (detail::pairwise_pearson(m, i, j, r)) {
                    acc(i, j) += r;
                    contrib(i, j) += 1.0;
                }
            }
        }
    }
    CorrelationSummary out;
    out.avg_corr.resize(v, v);
    for (int i = 0; i < v; ++i) {
        out.avg_corr(i, i) = 1.0;
        for (int j = i + 1; j < v; ++j) {
            double r = 0.0;
            if (contrib(i, j) > 0.0) {
                r = acc(i, j) / contrib(i, j);
            } else {
                const auto ni = i < static_cast<int>(ds.variable_names.size())
                                    ? ds.variable_names[static_cast<std::size_t>(i)]
                                    : std::to_string(i);
                const auto nj = j < static_cast<int>(ds.variable_names.size())
                                    ? ds.variable_names[static_cast<std::size_t>(j)]
                                    : std::to_string(j);
                out.warnings.push_back("correlation of (" + ni + ", " + nj +
                                       ") undefined in every sample; set to 0");
            }
            out.avg_corr(i, j) = r;
            out.avg_corr(j, i) = r;
        }
    }
    return out;
}

/// Greedy maximal independent set in ascending variable order: variable i is
/// kept iff it is not flagged as correlated with any already-kept variable.
inline std::vector<int> select_features(const CorrelationSummary& summary) {
    if (summary.theta_c < 0.0 || summary.binarized.rows() != summary.avg_corr.rows())
        throw std::invalid_argument("select_features: binarized matrix not computed");
    const int v = static_cast<int>(summary.avg_corr.rows());
    std::vector<int> kept;
    for (int i = 0; i < v; ++i) {
        bool ok = true;
        for (int j : kept) {
            if (summary.binarized(i, j)) {
                ok = false;
                break;
            }
        }
        if (ok) kept.push_back(i);
    }
    return kept;
}

/// Restrict a dataset to the given variable indices (in the given order).
inline MtsDataset project_variables(const MtsDataset& ds, const std::vector<int>& keep) {
    MtsDataset out = ds;
    out.variable_names.clear();
    for (int idx : keep) {
        if (idx < 0 || idx >= ds.n_variables())
            throw std::invalid_argument("project_variables: index out of range");
        out.variable_names.push_back(ds.variable_names[static_cast<std::size_t>(idx)]);
    }
    for (auto& s : out.samples) {
        Eigen::MatrixXd vals(static_cast<Eigen::Index>(keep.size()), s.length());
        BoolMatrix mask(static_cast<Eigen::Index>(keep.size()), s.length());
        for (std::size_t r = 0; r < keep.size(); ++r) {
            vals.row(static_cast<Eigen::Index>(r)) = s.values.row(keep[r]);
            mask.row(static_cast<Eigen::Index>(r)) = s.mask.row(keep[r]);
        }
        s.values = std::move(vals);
        s.mask = std::move(mask);
    }
    return out;
}

} // namespace mtskl
