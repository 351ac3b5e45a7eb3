#pragma once

#include "mtskl/kernel_matrix.hpp"
#include "mtskl/mts.hpp"
#include "mtskl/parallel.hpp"
#include "mtskl/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtskl {

struct LpsParams {
    int n_trees = 200;
    int seg_len = 10;
    int max_depth = 6;
    int min_leaf = 5;
    int threshold_candidates = 10;
};

struct TreeNode {
    int split_pos = -1; // segment column tested here; -1 marks a leaf
    double threshold = 0.0;
    bool missing_right = false; // side taken when the split value is missing
    int left = -1;
    int right = -1;
    int leaf_id = -1;
};

struct RegressionTree {
    int target_pos = 0; // regression target column, never used as a split
    std::vector<TreeNode> nodes;
    int n_leaves = 0;

    int route(const double* seg, const std::uint8_t* seg_mask) const {
        int cur = 0;
        for (;;) {
            const TreeNode& n = nodes[static_cast<std::size_t>(cur)];
            if (n.split_pos < 0) return n.leaf_id;
            if (seg_mask[n.split_pos])
                cur = seg[n.split_pos] <= n.threshold ? n.left : n.right;
            else
                cur = n.missing_right ? n.right : n.left;
        }
    }
};

struct LpsModel {
    LpsParams params;
    std::uint64_t seed = 0;
    int n_variables = 0; // V of the training data
    int train_len = 0;   // T of the training data
    std::vector<RegressionTree> trees;
    std::vector<int> leaf_offsets; // global leaf index base per tree
    int total_leaves = 0;
};

/// Bag-of-leaves representation: counts over all trees' leaves. Per tree the
/// counts sum to n_segments = V * (T - L + 1).
struct LeafHistogram {
    std::vector<std::int32_t> counts;
    int n_segments = 0;
};

namespace lps_detail {

// Flat pool of length-L segments with per-entry observation flags.
struct SegmentPool {
    int seg_len = 0;
    std::vector<double> values;       // n * L
    std::vector<std::uint8_t> mask;   // n * L
    std::size_t size() const { return mask.size() / static_cast<std::size_t>(seg_len); }
    const double* seg(std::size_t i) const { return values.data() + i * static_cast<std::size_t>(seg_len); }
    const std::uint8_t* msk(std::size_t i) const { return mask.data() + i * static_cast<std::size_t>(seg_len); }
};

inline void append_segments(SegmentPool& pool, const Mts& m) {
    const int len = pool.seg_len;
    for (int v = 0; v < m.n_variables(); ++v) {
        for (int t = 0; t + len <= m.length(); ++t) {
            for (int o = 0; o < len; ++o) {
                const bool obs = m.mask(v, t + o);
                pool.values.push_back(obs ? m.values(v, t + o) : 0.0);
                pool.mask.push_back(obs ? 1 : 0);
            }
        }
    }
}

struct TreeBuilder {
    const SegmentPool& pool;
    const LpsParams& params;
    RegressionTree& tree;
    Rng& rng;

    int make_leaf() {
        TreeNode n;
        n.leaf_id = tree.n_leaves++;
        tree.nodes.push_back(n);
        return static_cast<int>(tree.nodes.size()) - 1;
    }

    // Variance-reduction split on a random non-target column; threshold is the
    // best of a few uniformly drawn cut points. Segments missing the split
    // column do not enter the scoring and are routed with the majority
    // afterwards.
    int grow(std::vector<std::uint32_t>& idx, std::size_t begin, std::size_t end, int depth) {
        const int L = params.seg_len;
        const int target = tree.target_pos;
        const std::size_t count = end - begin;

        double t_sum = 0.0, t_sumsq = 0.0;
        std::size_t t_n = 0;
        for (std::size_t k = begin; k < end; ++k) {
            const std::size_t s = idx[k];
            if (pool.msk(s)[target]) {
                const double y = pool.seg(s)[target];
                t_sum += y;
                t_sumsq += y * y;
                ++t_n;
            }
        }
        const double t_sse = t_n > 0 ? std::max(0.0, t_sumsq - t_sum * t_sum / static_cast<double>(t_n)) : 0.0;

        if (depth >= params.max_depth || count < 2 * static_cast<std::size_t>(params.min_leaf) ||
            t_n < 2 || t_sse <= 1e-12 * t_sumsq || L < 2)
            return make_leaf();

        // one column draw per node, skipping the target position
        int col = static_cast<int>(rng.uniform_int(0, L - 2));
        if (col >= target) ++col;

        double cmin = 0.0, cmax = 0.0;
        bool seen = false;
        for (std::size_t k = begin; k < end; ++k) {
            const std::size_t s = idx[k];
            if (!pool.msk(s)[col]) continue;
            const double x = pool.seg(s)[col];
            if (!seen) {
                cmin = cmax = x;
                seen = true;
            } else {
                cmin = std::min(cmin, x);
                cmax = std::max(cmax, x);
            }
        }
        std::vector<double> cand(static_cast<std::size_t>(params.threshold_candidates));
        for (auto& c : cand) c = cmin + rng.uniform01() * (cmax - cmin);
        if (!seen || cmin == cmax) return make_leaf();

        double best_sse = 0.0;
        double best_thr = 0.0;
        bool have_best = false;
        for (const double thr : cand) {
            double ls = 0, lq = 0, rs = 0, rq = 0;
            std::size_t ln = 0, rn = 0, routed_l = 0, routed_r = 0;
            for (std::size_t k = begin; k < end; ++k) {
                const std::size_t s = idx[k];
                if (!pool.msk(s)[col]) continue;
                const bool go_left = pool.seg(s)[col] <= thr;
                (go_left ? routed_l : routed_r)++;
                if (!pool.msk(s)[target]) continue;
                const double y = pool.seg(s)[target];
                if (go_left) {
                    ls += y;
                    lq += y * y;
                    ++ln;
                } else {
                    rs += y;
                    rq += y * y;
                    ++rn;
                }
            }
            if (routed_l == 0 || routed_r == 0) continue;
            const double sse_l = ln > 0 ? std::max(0.0, lq - ls * ls / static_cast<double>(ln)) : 0.0;
            const double sse_r = rn > 0 ? std::max(0.0, rq - rs * rs / static_cast<double>(rn)) : 0.0;
            const double sse = sse_l + sse_r;
            if (!have_best || sse < best_sse) {
                best_sse = sse;
                best_thr = thr;
                have_best = true;
            }
        }
        if (!have_best) return make_leaf();

        // partition: observed by comparison, missing with the larger side
        std::vector<std::uint32_t> lbuf, rbuf, mbuf;
        for (std::size_t k = begin; k < end; ++k) {
            const std::size_t s = idx[k];
            if (!pool.msk(s)[col])
                mbuf.push_back(idx[k]);
            else if (pool.seg(s)[col] <= best_thr)
                lbuf.push_back(idx[k]);
            else
                rbuf.push_back(idx[k]);
        }
        const bool missing_right = rbuf.size() > lbuf.size();
        auto& maj = missing_right ? rbuf : lbuf;
        maj.insert(maj.end(), mbuf.begin(), mbuf.end());
        if (lbuf.size() < static_cast<std::size_t>(params.min_leaf) ||
            rbuf.size() < static_cast<std::size_t>(params.min_leaf))
            return make_leaf();

        std::copy(lbuf.begin(), lbuf.end(), idx.begin() + static_cast<std::ptrdiff_t>(begin));
        std::copy(rbuf.begin(), rbuf.end(),
                  idx.begin() + static_cast<std::ptrdiff_t>(begin + lbuf.size()));
        const std::size_t mid = begin + lbuf.size();

        TreeNode node;
        node.split_pos = col;
        node.threshold = best_thr;
        node.missing_right = missing_right;
        tree.nodes.push_back(node);
        const int self = static_cast<int>(tree.nodes.size()) - 1;
        const int lchild = grow(idx, begin, mid, depth + 1);
        const int rchild = grow(idx, mid, end, depth + 1);
        tree.nodes[static_cast<std::size_t>(self)].left = lchild;
        tree.nodes[static_cast<std::size_t>(self)].right = rchild;
        return self;
    }
};

} // namespace lps_detail

/// Fit the LPS ensemble: pool every length-L segment of every training
/// variable and grow n_trees randomized regression trees over the pool.
/// Deterministic for a given seed; trees are independent given per-tree seeds.
inline LpsModel lps_fit(const MtsDataset& train, const LpsParams& params, std::uint64_t seed,
                        int workers = 1) {
    if (train.empty()) throw std::invalid_argument("lps_fit: empty training set");
    if (params.n_trees < 1) throw std::invalid_argument("lps_fit: nT must be >= 1");
    train.validate(true);
    const int t = train.common_length();
    if (params.seg_len >= t) throw std::invalid_argument("lps_fit: L must be < T");
    if (params.seg_len < 1) throw std::invalid_argument("lps_fit: L must be >= 1");

    lps_detail::SegmentPool pool;
    pool.seg_len = params.seg_len;
    for (const auto& m : train.samples) lps_detail::append_segments(pool, m);

    LpsModel model;
    model.params = params;
    model.seed = seed;
    model.n_variables = train.samples.front().n_variables();
    model.train_len = t;
    model.trees.resize(static_cast<std::size_t>(params.n_trees));

    parallel_for(static_cast<std::size_t>(params.n_trees), workers, [&](std::size_t k) {
        Rng rng(derive_seed(seed, "lps.tree", k));
        RegressionTree& tree = model.trees[k];
        tree.target_pos = static_cast<int>(rng.uniform_int(0, params.seg_len - 1));
        std::vector<std::uint32_t> idx(pool.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
        lps_detail::TreeBuilder builder{pool, params, tree, rng};
        builder.grow(idx, 0, idx.size(), 0);
    });

    model.leaf_offsets.resize(model.trees.size());
    int off = 0;
    for (std::size_t k = 0; k < model.trees.size(); ++k) {
        model.leaf_offsets[k] = off;
        off += model.trees[k].n_leaves;
    }
    model.total_leaves = off;
    return model;
}

/// Route every segment of a sample down every tree and count leaf arrivals.
inline LeafHistogram lps_represent(const LpsModel& model, const Mts& m) {
    if (m.n_variables() != model.n_variables)
        throw std::invalid_argument("lps_represent: sample '" + m.id + "' has " +
                                    std::to_string(m.n_variables()) + " variables, model expects " +
                                    std::to_string(model.n_variables));
    const int len = model.params.seg_len;
    if (m.length() < len)
        throw std::invalid_argument("lps_represent: sample '" + m.id + "' shorter than L");

    LeafHistogram h;
    h.counts.assign(static_cast<std::size_t>(model.total_leaves), 0);
    h.n_segments = m.n_variables() * (m.length() - len + 1);

    std::vector<double> seg(static_cast<std::size_t>(len));
    std::vector<std::uint8_t> segmask(static_cast<std::size_t>(len));
    for (int v = 0; v < m.n_variables(); ++v) {
        for (int t = 0; t + len <= m.length(); ++t) {
            for (int o = 0; o < len; ++o) {
                const bool obs = m.mask(v, t + o);
                segmask[static_cast<std::size_t>(o)] = obs ? 1 : 0;
                seg[static_cast<std::size_t>(o)] = obs ? m.values(v, t + o) : 0.0;
            }
            for (std::size_t k = 0; k < model.trees.size(); ++k) {
                const int leaf = model.trees[k].route(seg.data(), segmask.data());
                ++h.counts[static_cast<std::size_t>(model.leaf_offsets[k] + leaf)];
            }
        }
    }
    return h;
}

/// Normalized histogram intersection: sum of per-leaf minima over
/// nT * n_segments. Symmetric, in [0,1], and exactly 1 for identical bags.
inline double lps_similarity(const LpsModel& model, const LeafHistogram& hx, const LeafHistogram& hy) {
    if (hx.counts.size() != hy.counts.size())
        throw std::invalid_argument("lps_similarity: histogram lengths differ");
    std::int64_t overlap = 0;
    for (std::size_t i = 0; i < hx.counts.size(); ++i)
        overlap += std::min(hx.counts[i], hy.counts[i]);
    const std::int64_t denom = static_cast<std::int64_t>(model.params.n_trees) *
                               std::max(hx.n_segments, hy.n_segments);
    return static_cast<double>(overlap) / static_cast<double>(denom);
}

inline std::vector<LeafHistogram> lps_represent_all(const LpsModel& model, const MtsDataset& ds,
                                                    int workers = 1) {
    std::vector<LeafHistogram> hs(ds.size());
    parallel_for(ds.size(), workers, [&](std::size_t i) { hs[i] = lps_represent(model, ds.samples[i]); });
    return hs;
}

/// K_tr over training pairs (symmetric, unit diagonal) and, when a test set
/// is given, K_te of test-vs-train similarities.
inline std::pair<KernelMatrix, KernelMatrix> lps_kernel_matrices(const LpsModel& model,
                                                                 const MtsDataset& train,
                                                                 const MtsDataset& test,
                                                                 int workers = 1) {
    const auto htr = lps_represent_all(model, train, workers);
    KernelMatrix ktr;
    ktr.method = "lps";
    ktr.symmetric = true;
    for (const auto& s : train.samples) ktr.row_ids.push_back(s.id);
    ktr.col_ids = ktr.row_ids;
    const auto n = static_cast<Eigen::Index>(train.size());
    ktr.values.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double s = lps_similarity(model, htr[static_cast<std::size_t>(i)],
                                            htr[static_cast<std::size_t>(j)]);
            ktr.values(i, j) = s;
            ktr.values(j, i) = s;
        }
    }

    KernelMatrix kte;
    kte.method = "lps";
    kte.symmetric = false;
    if (!test.empty()) {
        const auto hte = lps_represent_all(model, test, workers);
        for (const auto& s : test.samples) kte.row_ids.push_back(s.id);
        kte.col_ids = ktr.col_ids;
        kte.values.resize(static_cast<Eigen::Index>(test.size()), n);
        for (Eigen::Index i = 0; i < kte.values.rows(); ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                kte.values(i, j) = lps_similarity(model, hte[static_cast<std::size_t>(i)],
                                                  htr[static_cast<std::size_t>(j)]);
    }
    return {std::move(ktr), std::move(kte)};
}

} // namespace mtskl
