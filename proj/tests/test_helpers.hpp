#pragma once

#include "mtskl/mts.hpp"
#include "mtskl/rng.hpp"

#include <string>
#include <vector>

namespace mtskl_test {

// Two-class synthetic data: class +1 is shifted by `separation` (in units of
// the unit noise sigma) in the first `informative` variables. Entries are
// masked out independently with probability missing_frac.
inline mtskl::MtsDataset make_two_class_dataset(int n_per_class, int n_vars, int len,
                                                double separation, double missing_frac,
                                                std::uint64_t seed, int informative = 2,
                                                const std::string& prefix = "s") {
    mtskl::MtsDataset ds;
    for (int v = 0; v < n_vars; ++v) ds.variable_names.push_back("var" + std::to_string(v));
    mtskl::Rng rng(mtskl::derive_seed(seed, "test.twoclass"));
    std::vector<int> labels;
    for (int i = 0; i < 2 * n_per_class; ++i) {
        const int y = i < n_per_class ? +1 : -1;
        Eigen::MatrixXd vals(n_vars, len);
        mtskl::BoolMatrix mask(n_vars, len);
        for (int v = 0; v < n_vars; ++v) {
            const double shift = (y > 0 && v < informative) ? separation : 0.0;
            for (int t = 0; t < len; ++t) {
                const bool obs = rng.uniform01() >= missing_frac;
                mask(v, t) = obs;
                vals(v, t) = obs ? shift + rng.normal() : mtskl::missing_value();
            }
        }
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%s%03d", prefix.c_str(), i);
        ds.samples.emplace_back(buf, std::move(vals), std::move(mask));
        labels.push_back(y);
    }
    ds.labels = labels;
    return ds;
}

// Unlabeled random walks, optionally with missing entries.
inline mtskl::MtsDataset make_random_dataset(int n, int n_vars, int len, double missing_frac,
                                             std::uint64_t seed, const std::string& prefix = "r") {
    mtskl::MtsDataset ds;
    for (int v = 0; v < n_vars; ++v) ds.variable_names.push_back("var" + std::to_string(v));
    mtskl::Rng rng(mtskl::derive_seed(seed, "test.random"));
    for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd vals(n_vars, len);
        mtskl::BoolMatrix mask(n_vars, len);
        for (int v = 0; v < n_vars; ++v) {
            double level = rng.normal();
            for (int t = 0; t < len; ++t) {
                level += 0.3 * rng.normal();
                const bool obs = rng.uniform01() >= missing_frac;
                mask(v, t) = obs;
                vals(v, t) = obs ? level : mtskl::missing_value();
            }
        }
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%s%03d", prefix.c_str(), i);
        ds.samples.emplace_back(buf, std::move(vals), std::move(mask));
    }
    return ds;
}

inline mtskl::Mts make_mts(const std::string& id, const std::vector<std::vector<double>>& rows,
                           const std::vector<std::vector<bool>>& observed = {}) {
    const auto v = static_cast<Eigen::Index>(rows.size());
    const auto t = static_cast<Eigen::Index>(rows.front().size());
    Eigen::MatrixXd vals(v, t);
    mtskl::BoolMatrix mask(v, t);
    for (Eigen::Index i = 0; i < v; ++i)
        for (Eigen::Index j = 0; j < t; ++j) {
            const bool obs = observed.empty() ? true : observed[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            mask(i, j) = obs;
            vals(i, j) = obs ? rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                             : mtskl::missing_value();
        }
    return mtskl::Mts(id, std::move(vals), std::move(mask));
}

} // namespace mtskl_test
