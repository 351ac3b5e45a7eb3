#pragma once

#include "mtskl/mts.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtskl {

/// Common length all series are interpolated to: ceil(T_M / ceil(T_M / base)).
/// The result never exceeds base (default 25).
inline int target_length(long long t_max, int base = 25) {
    if (t_max < 1) throw std::invalid_argument("target_length: T_M must be >= 1");
    if (base < 1) throw std::invalid_argument("target_length: base must be >= 1");
    const long long chunks = (t_max + base - 1) / base; // ceil(T_M / base)
    return static_cast<int>((t_max + chunks - 1) / chunks);
}

/// Linear interpolation onto the grid t'_j = 1 + (j-1)(T-1)/(T_target-1).
/// A resampled point is observed iff both bracketing source points are
/// observed; interpolation never imputes through missing entries.
inline Mts resample_linear(const Mts& m, int t_target) {
    if (t_target < 2) throw std::invalid_argument("resample_linear: T_target must be >= 2");
    const int t_src = m.length();
    if (t_src < 2) throw std::invalid_argument("resample_linear: sample '" + m.id + "' has T < 2");
    const int v = m.n_variables();

    Eigen::MatrixXd out(v, t_target);
    BoolMatrix omask(v, t_target);
    const double scale = static_cast<double>(t_src - 1) / static_cast<double>(t_target - 1);
    for (int j = 0; j < t_target; ++j) {
        const double pos = static_cast<double>(j) * scale;
        int lo = static_cast<int>(std::floor(pos));
        if (lo > t_src - 1) lo = t_src - 1;
        int hi = static_cast<int>(std::ceil(pos));
        if (hi > t_src - 1) hi = t_src - 1;
        const double frac = pos - static_cast<double>(lo);
        for (int r = 0; r < v; ++r) {
            bool obs;
            double val;
            if (lo == hi) {
                obs = m.mask(r, lo);
                val = obs ? m.values(r, lo) : missing_value();
            } else {
                obs = m.mask(r, lo) && m.mask(r, hi);
                val = obs ? (1.0 - frac) * m.values(r, lo) + frac * m.values(r, hi)
                          : missing_value();
            }
            out(r, j) = val;
            omask(r, j) = obs;
        }
    }
    return Mts(m.id, std::move(out), std::move(omask));
}

inline MtsDataset resample_dataset(const MtsDataset& ds, int t_target) {
    MtsDataset out = ds;
    out.samples.clear();
    out.samples.reserve(ds.samples.size());
    for (const auto& s : ds.samples) out.samples.push_back(resample_linear(s, t_target));
    return out;
}

/// Per-variable mean and population standard deviation, training set only.
struct StandardizerStats {
    Eigen::VectorXd means;
    Eigen::VectorXd stds; // population (1/n), >= 0
};

/// Pooled over all observed entries of all training samples. A variable with
/// zero observed entries is an error (it cannot be standardized).
inline StandardizerStats compute_variable_stats(const MtsDataset& train) {
    if (train.empty()) throw std::invalid_argument("compute_variable_stats: empty training set");
    train.validate();
    const int v = train.samples.front().n_variables();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(v);
    Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(v);
    Eigen::VectorXd count = Eigen::VectorXd::Zero(v);
    for (const auto& s : train.samples) {
        for (int r = 0; r < v; ++r)
            for (int t = 0; t < s.length(); ++t)
                if (s.mask(r, t)) {
                    const double x = s.values(r, t);
                    sum(r) += x;
                    sumsq(r) += x * x;
                    count(r) += 1.0;
                }
    }
    StandardizerStats st;
    st.means.resize(v);
    st.stds.resize(v);
    for (int r = 0; r < v; ++r) {
        if (count(r) == 0.0) {
            const std::string name = r < static_cast<int>(train.variable_names.size())
                                         ? train.variable_names[static_cast<std::size_t>(r)]
                                         : ("#" + std::to_string(r));
            throw std::runtime_error("compute_variable_stats: variable '" + name +
                                     "' has no observed entries");
        }
        const double mean = sum(r) / count(r);
        const double var = std::max(0.0, sumsq(r) / count(r) - mean * mean);
        st.means(r) = mean;
        st.stds(r) = std::sqrt(var);
    }
    return st;
}

/// (x - mean) / std per observed entry; a zero std uses divisor 1, so a
/// constant variable maps to all zeros. Missing entries stay missing.
inline Mts apply_standardization(const Mts& m, const StandardizerStats& s) {
    if (m.n_variables() != static_cast<int>(s.means.size()))
        throw std::invalid_argument("apply_standardization: sample '" + m.id +
                                    "' variable count does not match stats");
    Mts out = m;
    for (int r = 0; r < m.n_variables(); ++r) {
        const double div = s.stds(r) > 0.0 ? s.stds(r) : 1.0;
        for (int t = 0; t < m.length(); ++t) {
            if (m.mask(r, t))
                out.values(r, t) = (m.values(r, t) - s.means(r)) / div;
            else
                out.values(r, t) = missing_value();
        }
    }
    return out;
}

inline MtsDataset standardize_dataset(const MtsDataset& ds, const StandardizerStats& s) {
    MtsDataset out = ds;
    out.samples.clear();
    out.samples.reserve(ds.samples.size());
    for (const auto& m : ds.samples) out.samples.push_back(apply_standardization(m, s));
    return out;
}

} // namespace mtskl
