#pragma once

#include "mtskl/mts.hpp"
#include "mtskl/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mtskl {

/// Prior strengths of the MAP-EM mixture fit. The mean prior is
/// N(m_d, sigma^2/kappa0) around the view's empirical mean; the variance
/// prior is inverse-gamma with shape a0 and mode b0_d (the view's empirical
/// per-dimension variance).
struct GmmHyper {
    double kappa0 = 1.0;
    double a0 = 2.0;
};

struct GmmControl {
    int max_iter = 50;
    double tol = 1e-6;              // mean absolute posterior change
    double variance_floor_rel = 1e-4; // x empirical per-dimension variance
    double weight_floor = 1e-6;
};

/// Diagonal-covariance mixture over the kept dimensions of a data view.
struct GmmComponents {
    Eigen::VectorXd weights;   // length c, sums to 1
    Eigen::MatrixXd means;     // c x d
    Eigen::MatrixXd variances; // c x d, floored away from zero
    double kappa0 = 1.0;
    double a0 = 2.0;
    Eigen::VectorXd b0; // per-dimension prior variance scale
};

struct GmmFitReport {
    int iterations = 0;
    bool converged = false;
    std::vector<double> ll_trace; // penalized log-likelihood per iteration
    std::vector<int> dropped_dims;
};

namespace gmm_detail {

inline double log_normal(double x, double mean, double var) {
    static const double kLog2Pi = 1.8378770664093454836;
    const double diff = x - mean;
    return -0.5 * (kLog2Pi + std::log(var)) - diff * diff / (2.0 * var);
}

inline double log_inv_gamma(double v, double shape, double scale) {
    return shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(v) - scale / v;
}

} // namespace gmm_detail

/// One E-step: responsibilities of every row of (x, obs) under the mixture.
/// Missing dimensions are marginalized (they simply drop out of the
/// per-component log-density). Rows observing nothing fall back on the
/// component weights.
inline Eigen::MatrixXd gmm_posteriors(const GmmComponents& g, const Eigen::MatrixXd& x,
                                      const BoolMatrix& obs) {
    const auto n = x.rows();
    const auto d = x.cols();
    const auto c = g.weights.size();
    if (g.means.cols() != d)
        throw std::invalid_argument("gmm_posteriors: dimension mismatch with fitted mixture");
    Eigen::MatrixXd post(n, c);
    Eigen::VectorXd logp(c);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < c; ++k) {
            double ll = std::log(g.weights(k));
            for (Eigen::Index j = 0; j < d; ++j)
                if (obs(i, j)) ll += gmm_detail::log_normal(x(i, j), g.means(k, j), g.variances(k, j));
            logp(k) = ll;
        }
        const double mx = logp.maxCoeff();
        double sum = 0.0;
        for (Eigen::Index k = 0; k < c; ++k) {
            logp(k) = std::exp(logp(k) - mx);
            sum += logp(k);
        }
        post.row(i) = logp.transpose() / sum;
    }
    return post;
}

/// Data log-likelihood plus the log prior density of the parameters; the
/// quantity MAP-EM ascends.
inline double gmm_penalized_loglik(const GmmComponents& g, const Eigen::MatrixXd& x,
                                   const BoolMatrix& obs, const Eigen::VectorXd& emp_mean) {
    const auto n = x.rows();
    const auto d = x.cols();
    const auto c = g.weights.size();
    double total = 0.0;
    Eigen::VectorXd logp(c);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < c; ++k) {
            double ll = std::log(g.weights(k));
            for (Eigen::Index j = 0; j < d; ++j)
                if (obs(i, j)) ll += gmm_detail::log_normal(x(i, j), g.means(k, j), g.variances(k, j));
            logp(k) = ll;
        }
        const double mx = logp.maxCoeff();
        double sum = 0.0;
        for (Eigen::Index k = 0; k < c; ++k) sum += std::exp(logp(k) - mx);
        total += mx + std::log(sum);
    }
    for (Eigen::Index k = 0; k < c; ++k) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const double var = g.variances(k, j);
            const double beta0 = g.b0(j) * (g.a0 + 1.0); // prior mode at b0
            total += gmm_detail::log_normal(g.means(k, j), emp_mean(j), var / g.kappa0);
            total += gmm_detail::log_inv_gamma(var, g.a0, beta0);
        }
    }
    return total;
}

struct GmmFitResult {
    GmmComponents components;
    GmmFitReport report;
    std::vector<int> kept_dims; // view dimensions with at least one observation
};

/// MAP-EM on a masked view. Dimensions nobody observes are dropped (reported
/// in kept_dims / dropped_dims). The M-step maximizes the penalized expected
/// complete-data log-likelihood exactly, so the penalized log-likelihood is
/// non-decreasing until a floor engages. Deterministic under seed.
inline GmmFitResult fit_map_gmm(const Eigen::MatrixXd& x_in, const BoolMatrix& obs_in, int c,
                                const GmmHyper& hyper, std::uint64_t seed,
                                const GmmControl& ctrl = {}) {
    if (c < 2) throw std::invalid_argument("fit_map_gmm: need at least 2 components");
    if (x_in.rows() < c)
        throw std::invalid_argument("fit_map_gmm: fewer rows than components");
    if (x_in.rows() != obs_in.rows() || x_in.cols() != obs_in.cols())
        throw std::invalid_argument("fit_map_gmm: view and mask dimensions differ");

    GmmFitResult res;

    // Drop dimensions with zero observed entries.
    std::vector<int> kept;
    for (Eigen::Index j = 0; j < x_in.cols(); ++j) {
        bool any = false;
        for (Eigen::Index i = 0; i < x_in.rows(); ++i)
            if (obs_in(i, j)) {
                any = true;
                break;
            }
        if (any)
            kept.push_back(static_cast<int>(j));
        else
            res.report.dropped_dims.push_back(static_cast<int>(j));
    }
    if (kept.empty()) throw std::runtime_error("fit_map_gmm: every dimension is unobserved");
    res.kept_dims = kept;

    const auto n = x_in.rows();
    const auto d = static_cast<Eigen::Index>(kept.size());
    Eigen::MatrixXd x(n, d);
    BoolMatrix obs(n, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        x.col(j) = x_in.col(kept[static_cast<std::size_t>(j)]);
        obs.col(j) = obs_in.col(kept[static_cast<std::size_t>(j)]);
    }

    // Empirical anchors per dimension.
    Eigen::VectorXd emp_mean(d), emp_var(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        double s = 0, sq = 0;
        double cnt = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (obs(i, j)) {
                s += x(i, j);
                sq += x(i, j) * x(i, j);
                cnt += 1.0;
            }
        const double mean = s / cnt;
        emp_mean(j) = mean;
        emp_var(j) = std::max(sq / cnt - mean * mean, 1e-12);
    }
    const Eigen::VectorXd var_floor = ctrl.variance_floor_rel * emp_var;

    GmmComponents g;
    g.kappa0 = hyper.kappa0;
    g.a0 = hyper.a0;
    g.b0 = emp_var;
    g.weights = Eigen::VectorXd::Constant(c, 1.0 / c);
    g.means.resize(c, d);
    g.variances.resize(c, d);
    Rng rng(seed);
    const auto pick = rng.sample_without_replacement(static_cast<int>(n), c);
    for (int k = 0; k < c; ++k) {
        const auto row = static_cast<Eigen::Index>(pick[static_cast<std::size_t>(k)]);
        for (Eigen::Index j = 0; j < d; ++j)
            g.means(k, j) = obs(row, j) ? x(row, j) : emp_mean(j);
    }
    g.variances = emp_var.transpose().replicate(c, 1);

    Eigen::MatrixXd post;
    Eigen::MatrixXd prev;
    const double beta_shift = g.a0 + 1.0;
    for (int iter = 0; iter < ctrl.max_iter; ++iter) {
        post = gmm_posteriors(g, x, obs);
        res.report.ll_trace.push_back(gmm_penalized_loglik(g, x, obs, emp_mean));
        res.report.iterations = iter + 1;
        if (prev.size() > 0) {
            const double change = (post - prev).cwiseAbs().mean();
            if (change < ctrl.tol) {
                res.report.converged = true;
                break;
            }
        }
        prev = post;

        // M-step
        for (int k = 0; k < c; ++k) {
            const double nk = post.col(k).sum();
            g.weights(k) = nk / static_cast<double>(n);
            for (Eigen::Index j = 0; j < d; ++j) {
                double rw = 0, rx = 0;
                for (Eigen::Index i = 0; i < n; ++i)
                    if (obs(i, j)) {
                        rw += post(i, k);
                        rx += post(i, k) * x(i, j);
                    }
                const double mu = (rx + g.kappa0 * emp_mean(j)) / (rw + g.kappa0);
                double ss = 0.0;
                for (Eigen::Index i = 0; i < n; ++i)
                    if (obs(i, j)) {
                        const double diff = x(i, j) - mu;
                        ss += post(i, k) * diff * diff;
                    }
                const double dm = mu - emp_mean(j);
                const double beta0 = g.b0(j) * beta_shift;
                const double var =
                    (beta0 + 0.5 * g.kappa0 * dm * dm + 0.5 * ss) / (g.a0 + 1.5 + 0.5 * rw);
                g.means(k, j) = mu;
                g.variances(k, j) = std::max(var, var_floor(j));
            }
        }
        // weight floor with renormalization
        for (int k = 0; k < c; ++k) g.weights(k) = std::max(g.weights(k), ctrl.weight_floor);
        g.weights /= g.weights.sum();
    }

    res.components = std::move(g);
    return res;
}

} // namespace mtskl
