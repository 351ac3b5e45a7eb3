#pragma once

#include "mtskl/gmm.hpp"
#include "mtskl/kernel_matrix.hpp"
#include "mtskl/log.hpp"
#include "mtskl/mts.hpp"
#include "mtskl/parallel.hpp"
#include "mtskl/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtskl {

struct TckParams {
    int q = 30;  // random initializations
    int c_max = 40; // partitions use c = 2..c_max components
    double sample_fraction = 0.8;
    int min_window = 6;
    double kappa0_min = 0.1;
    double kappa0_max = 10.0;
    double a0 = 2.0;
    GmmControl em;
};

/// One ensemble member: a mixture fitted on a random view (variable subset x
/// contiguous time window x sample subset) of the training data.
struct GmmPartition {
    int q_index = 0;
    int n_components = 0;
    std::vector<int> variable_subset;
    int t_begin = 0; // inclusive
    int t_end = 0;   // inclusive
    std::vector<int> sample_subset;
    std::vector<int> kept_dims; // flat offsets into the (vars x window) block
    GmmComponents mixture;
};

struct TckModel {
    TckParams params;
    std::uint64_t seed = 0;
    int n_variables = 0;
    int train_len = 0;
    std::vector<std::string> train_ids;
    std::vector<GmmPartition> partitions;            // successfully fitted ones
    std::vector<Eigen::MatrixXd> train_posteriors;   // per partition, N_tr x c
    std::vector<std::string> warnings;

    int partition_count() const { return static_cast<int>(partitions.size()); }
};

namespace tck_detail {

// Extract the flattened (variables x window) view of every sample, restricted
// to kept_dims when given. Flat dim order: variable-major, time within.
inline void extract_view(const MtsDataset& ds, const std::vector<int>& vars, int t_begin, int t_end,
                         const std::vector<int>* kept_dims, Eigen::MatrixXd& x, BoolMatrix& obs) {
    const int wlen = t_end - t_begin + 1;
    const int full_d = static_cast<int>(vars.size()) * wlen;
    std::vector<int> dims;
    if (kept_dims == nullptr) {
        dims.resize(static_cast<std::size_t>(full_d));
        for (int j = 0; j < full_d; ++j) dims[static_cast<std::size_t>(j)] = j;
    } else {
        dims = *kept_dims;
    }
    const auto n = static_cast<Eigen::Index>(ds.size());
    x.resize(n, static_cast<Eigen::Index>(dims.size()));
    obs.resize(n, static_cast<Eigen::Index>(dims.size()));
    for (Eigen::Index i = 0; i < n; ++i) {
        const Mts& m = ds.samples[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < dims.size(); ++j) {
            const int flat = dims[j];
            const int v = vars[static_cast<std::size_t>(flat / wlen)];
            const int t = t_begin + flat % wlen;
            const bool o = m.mask(v, t);
            obs(i, static_cast<Eigen::Index>(j)) = o;
            x(i, static_cast<Eigen::Index>(j)) = o ? m.values(v, t) : 0.0;
        }
    }
}

inline MtsDataset subset_samples(const MtsDataset& ds, const std::vector<int>& rows) {
    MtsDataset out = ds;
    out.samples.clear();
    out.labels.reset();
    for (int r : rows) out.samples.push_back(ds.samples[static_cast<std::size_t>(r)]);
    return out;
}

// Entrywise Kahan-compensated accumulator; keeps the reduction associative
// enough that partition order does not matter beyond ~1e-16 per entry.
struct KahanMatrix {
    Eigen::MatrixXd sum;
    Eigen::MatrixXd comp;
    KahanMatrix(Eigen::Index r, Eigen::Index c)
        : sum(Eigen::MatrixXd::Zero(r, c)), comp(Eigen::MatrixXd::Zero(r, c)) {}
    void add(const Eigen::MatrixXd& term) {
        for (Eigen::Index j = 0; j < sum.cols(); ++j)
            for (Eigen::Index i = 0; i < sum.rows(); ++i) {
                const double y = term(i, j) - comp(i, j);
                const double t = sum(i, j) + y;
                comp(i, j) = (t - sum(i, j)) - y;
                sum(i, j) = t;
            }
    }
};

} // namespace tck_detail

/// Fit the TCK ensemble on resampled, standardized training data and return
/// the model together with the averaged posterior-inner-product kernel K_tr.
/// Partitions enumerate q = 1..Q crossed with c = 2..C; a partition that
/// fails to fit is skipped and the normalizer B shrinks accordingly.
inline std::pair<TckModel, KernelMatrix> tck_fit(const MtsDataset& train, const TckParams& params,
                                                 std::uint64_t seed, int workers = 1) {
    if (train.empty()) throw std::invalid_argument("tck_fit: empty training set");
    if (params.q < 1) throw std::invalid_argument("tck_fit: Q must be >= 1");
    if (params.c_max < 2) throw std::invalid_argument("tck_fit: C must be >= 2");
    train.validate(true);
    const auto n = static_cast<int>(train.size());
    if (n < params.c_max)
        throw std::invalid_argument("tck_fit: training set smaller than the maximum mixture size C");
    const int t = train.common_length();
    const int v = train.samples.front().n_variables();

    TckModel model;
    model.params = params;
    model.seed = seed;
    model.n_variables = v;
    model.train_len = t;
    for (const auto& s : train.samples) model.train_ids.push_back(s.id);

    struct Slot {
        std::optional<GmmPartition> part;
        Eigen::MatrixXd posteriors;
        std::string warning;
    };
    const int b_planned = params.q * (params.c_max - 1);
    std::vector<Slot> slots(static_cast<std::size_t>(b_planned));

    parallel_for(static_cast<std::size_t>(b_planned), workers, [&](std::size_t slot_idx) {
        const int q = static_cast<int>(slot_idx) / (params.c_max - 1) + 1;
        const int c = static_cast<int>(slot_idx) % (params.c_max - 1) + 2;
        Slot& slot = slots[slot_idx];
        Rng rng(derive_seed(seed, "tck.partition", static_cast<std::uint64_t>(q),
                            static_cast<std::uint64_t>(c)));
        GmmPartition part;
        part.q_index = q;
        part.n_components = c;

        const int lo_vars = std::min(v, std::max(2, (v + 3) / 4));
        const int n_vars = static_cast<int>(rng.uniform_int(lo_vars, v));
        part.variable_subset = rng.sample_without_replacement(v, n_vars);
        std::sort(part.variable_subset.begin(), part.variable_subset.end());

        const int min_w = std::min(params.min_window, t);
        const int wlen = static_cast<int>(rng.uniform_int(min_w, t));
        part.t_begin = static_cast<int>(rng.uniform_int(0, t - wlen));
        part.t_end = part.t_begin + wlen - 1;

        const int n_fit = std::max(
            1, static_cast<int>(std::llround(params.sample_fraction * static_cast<double>(n))));
        part.sample_subset = rng.sample_without_replacement(n, n_fit);
        std::sort(part.sample_subset.begin(), part.sample_subset.end());

        GmmHyper hyper;
        hyper.kappa0 = rng.log_uniform(params.kappa0_min, params.kappa0_max);
        hyper.a0 = params.a0;

        try {
            Eigen::MatrixXd x;
            BoolMatrix obs;
            const MtsDataset fit_ds = tck_detail::subset_samples(train, part.sample_subset);
            tck_detail::extract_view(fit_ds, part.variable_subset, part.t_begin, part.t_end, nullptr,
                                     x, obs);
            auto fitted = fit_map_gmm(x, obs, c, hyper,
                                      derive_seed(seed, "tck.gmm", static_cast<std::uint64_t>(q),
                                                  static_cast<std::uint64_t>(c)),
                                      params.em);
            part.kept_dims = fitted.kept_dims;
            part.mixture = std::move(fitted.components);

            Eigen::MatrixXd ax;
            BoolMatrix aobs;
            tck_detail::extract_view(train, part.variable_subset, part.t_begin, part.t_end,
                                     &part.kept_dims, ax, aobs);
            slot.posteriors = gmm_posteriors(part.mixture, ax, aobs);
            slot.part = std::move(part);
        } catch (const std::exception& e) {
            slot.warning = "partition (q=" + std::to_string(q) + ", c=" + std::to_string(c) +
                           ") skipped: " + e.what();
        }
    });

    tck_detail::KahanMatrix acc(n, n);
    for (auto& slot : slots) {
        if (!slot.part) {
            model.warnings.push_back(slot.warning);
            log_msg(LogLevel::warn, "%s", slot.warning.c_str());
            continue;
        }
        acc.add(slot.posteriors * slot.posteriors.transpose());
        model.partitions.push_back(std::move(*slot.part));
        model.train_posteriors.push_back(std::move(slot.posteriors));
    }
    const int b = model.partition_count();
    if (b == 0) throw std::runtime_error("tck_fit: every partition failed to fit");

    KernelMatrix ktr;
    ktr.method = "tck";
    ktr.symmetric = true;
    ktr.row_ids = model.train_ids;
    ktr.col_ids = model.train_ids;
    ktr.values = acc.sum / static_cast<double>(b);
    // enforce exact symmetry against accumulation round-off
    ktr.values = ((ktr.values + ktr.values.transpose()) * 0.5).eval();
    return {std::move(model), std::move(ktr)};
}

/// Score a test set: one E-step per partition, then averaged inner products
/// of test posteriors against the stored training posteriors.
inline KernelMatrix tck_test_kernel(const TckModel& model, const MtsDataset& test, int workers = 1) {
    if (test.empty()) throw std::invalid_argument("tck_test_kernel: empty test set");
    test.validate(true);
    if (test.samples.front().n_variables() != model.n_variables)
        throw std::invalid_argument("tck_test_kernel: variable count differs from training data");
    if (test.common_length() != model.train_len)
        throw std::invalid_argument("tck_test_kernel: length differs from training data");

    const auto n_te = static_cast<Eigen::Index>(test.size());
    const auto n_tr = static_cast<Eigen::Index>(model.train_ids.size());
    const auto b = static_cast<std::size_t>(model.partition_count());

    std::vector<Eigen::MatrixXd> terms(b);
    parallel_for(b, workers, [&](std::size_t p) {
        const GmmPartition& part = model.partitions[p];
        Eigen::MatrixXd x;
        BoolMatrix obs;
        tck_detail::extract_view(test, part.variable_subset, part.t_begin, part.t_end,
                                 &part.kept_dims, x, obs);
        const Eigen::MatrixXd post = gmm_posteriors(part.mixture, x, obs);
        terms[p] = post * model.train_posteriors[p].transpose();
    });

    tck_detail::KahanMatrix acc(n_te, n_tr);
    for (const auto& term : terms) acc.add(term);

    KernelMatrix kte;
    kte.method = "tck";
    kte.symmetric = false;
    for (const auto& s : test.samples) kte.row_ids.push_back(s.id);
    kte.col_ids = model.train_ids;
    kte.values = acc.sum / static_cast<double>(model.partition_count());
    return kte;
}

/// Averaged squared posterior norm of each test sample under the model's
/// partitions; the "self-similarity" that bounds K_te rows via Cauchy-Schwarz.
inline Eigen::VectorXd tck_self_similarity(const TckModel& model, const MtsDataset& test) {
    Eigen::VectorXd self = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(test.size()));
    for (const auto& part : model.partitions) {
        Eigen::MatrixXd x;
        BoolMatrix obs;
        tck_detail::extract_view(test, part.variable_subset, part.t_begin, part.t_end,
                                 &part.kept_dims, x, obs);
        const Eigen::MatrixXd post = gmm_posteriors(part.mixture, x, obs);
        self += post.rowwise().squaredNorm();
    }
    return self / static_cast<double>(model.partition_count());
}

} // namespace mtskl
