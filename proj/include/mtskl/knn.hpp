#pragma once

#include "mtskl/kernel_matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtskl {

enum class VectorSimilarity { euclidean, cosine, cityblock, pearson };

inline const char* to_string(VectorSimilarity s) {
    switch (s) {
        case VectorSimilarity::euclidean: return "euclidean";
        case VectorSimilarity::cosine: return "cosine";
        case VectorSimilarity::cityblock: return "cityblock";
        case VectorSimilarity::pearson: return "pearson";
    }
    return "?";
}

inline VectorSimilarity vector_similarity_from_string(const std::string& s) {
    if (s == "euclidean") return VectorSimilarity::euclidean;
    if (s == "cosine") return VectorSimilarity::cosine;
    if (s == "cityblock") return VectorSimilarity::cityblock;
    if (s == "pearson") return VectorSimilarity::pearson;
    throw std::invalid_argument("unknown vector similarity '" + s + "'");
}

/// Similarity between two embedding vectors, oriented so that larger always
/// means more similar (distances are negated).
inline double vector_similarity(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                VectorSimilarity kind) {
    if (u.size() != v.size()) throw std::invalid_argument("vector_similarity: length mismatch");
    switch (kind) {
        case VectorSimilarity::euclidean:
            return -(u - v).norm();
        case VectorSimilarity::cityblock:
            return -(u - v).lpNorm<1>();
        case VectorSimilarity::cosine: {
            const double nu = u.norm();
            const double nv = v.norm();
            if (nu == 0.0 || nv == 0.0)
                throw std::runtime_error("vector_similarity: cosine undefined for a zero vector");
            return u.dot(v) / (nu * nv);
        }
        case VectorSimilarity::pearson: {
            const Eigen::VectorXd du = u.array() - u.mean();
            const Eigen::VectorXd dv = v.array() - v.mean();
            const double su = du.norm();
            const double sv = dv.norm();
            if (su == 0.0 || sv == 0.0)
                throw std::runtime_error("vector_similarity: pearson undefined for a constant vector");
            return du.dot(dv) / (su * sv);
        }
    }
    throw std::invalid_argument("vector_similarity: unknown kind");
}

/// Each row of a kernel matrix is the embedding of its sample: the vector of
/// similarities to the N_tr training samples.
inline std::vector<Eigen::VectorXd> embed_rows(const KernelMatrix& k) {
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(static_cast<std::size_t>(k.values.rows()));
    for (Eigen::Index i = 0; i < k.values.rows(); ++i) rows.push_back(k.values.row(i).transpose());
    return rows;
}

namespace knn_detail {

// indices of the k largest entries; ties at the cut resolve to the smaller
// training index
inline std::vector<int> top_k_indices(const Eigen::VectorXd& sims, int k) {
    std::vector<int> order(static_cast<std::size_t>(sims.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (sims(a) != sims(b)) return sims(a) > sims(b);
        return a < b;
    });
    order.resize(static_cast<std::size_t>(k));
    return order;
}

} // namespace knn_detail

struct KnnPrediction {
    std::vector<int> labels;        // +1 / -1
    std::vector<double> vote_margin; // (votes_pos - votes_neg) / k
};

/// Majority vote over the k most similar training samples, row by row.
/// A tied vote resolves to the negative ("far-from-onset") class.
inline KnnPrediction knn_predict_rows(const Eigen::MatrixXd& sims, const std::vector<int>& train_labels,
                                      int k) {
    if (sims.cols() != static_cast<Eigen::Index>(train_labels.size()))
        throw std::invalid_argument("knn_predict: similarity columns do not match label count");
    if (k < 1 || k > static_cast<int>(train_labels.size()))
        throw std::invalid_argument("knn_predict: k out of range [1, N_tr]");
    KnnPrediction out;
    out.labels.reserve(static_cast<std::size_t>(sims.rows()));
    out.vote_margin.reserve(static_cast<std::size_t>(sims.rows()));
    for (Eigen::Index i = 0; i < sims.rows(); ++i) {
        const auto idx = knn_detail::top_k_indices(sims.row(i).transpose(), k);
        int votes = 0;
        for (int j : idx) votes += train_labels[static_cast<std::size_t>(j)];
        out.labels.push_back(votes > 0 ? +1 : -1);
        out.vote_margin.push_back(static_cast<double>(votes) / static_cast<double>(k));
    }
    return out;
}

/// Input-space kNN: the similarity rows are the rows of K_te.
inline KnnPrediction knn_predict_input(const KernelMatrix& k_te, const std::vector<int>& train_labels,
                                       int k) {
    k_te.validate();
    return knn_predict_rows(k_te.values, train_labels, k);
}

/// Embedding-space kNN: pairwise vector similarity between test embeddings
/// and training embeddings, then the same top-k vote.
inline KnnPrediction knn_predict_embedding(const std::vector<Eigen::VectorXd>& test_vecs,
                                           const std::vector<Eigen::VectorXd>& train_vecs,
                                           const std::vector<int>& train_labels, int k,
                                           VectorSimilarity kind) {
    Eigen::MatrixXd sims(static_cast<Eigen::Index>(test_vecs.size()),
                         static_cast<Eigen::Index>(train_vecs.size()));
    for (std::size_t i = 0; i < test_vecs.size(); ++i)
        for (std::size_t j = 0; j < train_vecs.size(); ++j)
            sims(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                vector_similarity(test_vecs[i], train_vecs[j], kind);
    return knn_predict_rows(sims, train_labels, k);
}

} // namespace mtskl
