#pragma once

#include "mtskl/kernel_matrix.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>

namespace mtskl {

inline bool is_psd_within_tolerance(const Eigen::MatrixXd& k, double rel_tol = 1e-8) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
    const double max_ev = es.eigenvalues().maxCoeff();
    const double min_ev = es.eigenvalues().minCoeff();
    return min_ev >= -rel_tol * std::max(max_ev, 0.0);
}

/// Spectral clipping for similarity matrices that are not valid kernels
/// (LPS gives no PSD guarantee). Negative eigenvalues of K_tr are clipped to
/// zero and K_te is projected onto the retained eigenspace. Matrices already
/// PSD within tolerance pass through unchanged.
inline std::pair<KernelMatrix, KernelMatrix> repair_indefinite_kernel(const KernelMatrix& k_tr,
                                                                       const KernelMatrix& k_te,
                                                                       double rel_tol = 1e-8) {
    if (k_tr.values.rows() != k_tr.values.cols())
        throw std::invalid_argument("repair_indefinite_kernel: K_tr must be square");
    const double asym = (k_tr.values - k_tr.values.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, k_tr.values.cwiseAbs().maxCoeff());
    if (asym > 1e-10 * scale)
        throw std::invalid_argument("repair_indefinite_kernel: K_tr is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k_tr.values);
    const Eigen::VectorXd& evals = es.eigenvalues();
    const double max_ev = evals.maxCoeff();
    if (evals.minCoeff() >= -rel_tol * std::max(max_ev, 0.0)) return {k_tr, k_te};

    Eigen::VectorXd clipped = evals.cwiseMax(0.0);
    Eigen::VectorXd retain(evals.size());
    for (Eigen::Index i = 0; i < evals.size(); ++i) retain(i) = evals(i) > 0.0 ? 1.0 : 0.0;

    KernelMatrix tr_out = k_tr;
    tr_out.values = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
    tr_out.values = ((tr_out.values + tr_out.values.transpose()) * 0.5).eval();

    KernelMatrix te_out = k_te;
    if (k_te.values.size() > 0) {
        const Eigen::MatrixXd projector =
            es.eigenvectors() * retain.asDiagonal() * es.eigenvectors().transpose();
        te_out.values = k_te.values * projector;
    }
    return {std::move(tr_out), std::move(te_out)};
}

} // namespace mtskl
