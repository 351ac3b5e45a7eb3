#pragma once

// Test-side brute-force QP oracle for the SVM dual: projected gradient
// ascent with an exact projection onto {0 <= a <= C, y'a = 0} via bisection
// over the equality multiplier. Kept independent of the SMO solver it checks.

#include <Eigen/Dense>

#include <algorithm>
#include <vector>

namespace mtskl_test {

struct QpOracleResult {
    Eigen::VectorXd alphas;
    double objective = 0.0;
    double bias = 0.0;
};

inline QpOracleResult qp_oracle(const Eigen::MatrixXd& k, const std::vector<int>& labels,
                                double c_margin, int iters = 20000) {
    const auto n = k.rows();
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = labels[static_cast<std::size_t>(i)];
    Eigen::MatrixXd q(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) q(i, j) = y(i) * y(j) * k(i, j);

    const auto project = [&](Eigen::VectorXd a) {
        double lo = -1e6, hi = 1e6;
        for (int it = 0; it < 200; ++it) {
            const double nu = 0.5 * (lo + hi);
            double dot = 0;
            for (Eigen::Index i = 0; i < n; ++i)
                dot += y(i) * std::clamp(a(i) - nu * y(i), 0.0, c_margin);
            if (dot > 0) lo = nu;
            else hi = nu;
        }
        const double nu = 0.5 * (lo + hi);
        for (Eigen::Index i = 0; i < n; ++i) a(i) = std::clamp(a(i) - nu * y(i), 0.0, c_margin);
        return a;
    };

    const double lip = q.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
    const double step = 1.0 / lip;
    Eigen::VectorXd a = project(Eigen::VectorXd::Zero(n));
    for (int it = 0; it < iters; ++it) {
        const Eigen::VectorXd grad = Eigen::VectorXd::Ones(n) - q * a;
        a = project(a + step * grad);
    }

    QpOracleResult res;
    res.alphas = a;
    res.objective = a.sum() - 0.5 * a.dot(q * a);

    const Eigen::VectorXd g = q * a - Eigen::VectorXd::Ones(n);
    double sum = 0;
    int free_count = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (a(i) > 1e-8 && a(i) < c_margin - 1e-8) {
            sum += -y(i) * g(i);
            ++free_count;
        }
    if (free_count > 0) {
        res.bias = sum / free_count;
    } else {
        double up = -1e300, low = 1e300;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double v = -y(i) * g(i);
            const bool in_up = (y(i) > 0 && a(i) < c_margin - 1e-8) || (y(i) < 0 && a(i) > 1e-8);
            const bool in_low = (y(i) > 0 && a(i) > 1e-8) || (y(i) < 0 && a(i) < c_margin - 1e-8);
            if (in_up) up = std::max(up, v);
            if (in_low) low = std::min(low, v);
        }
        res.bias = 0.5 * (up + low);
    }
    return res;
}

} // namespace mtskl_test
