#pragma once

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mtskl {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// One multivariate time series sample: a V x T value matrix plus an
/// observation mask of the same shape. Entries with mask=false are missing;
/// their stored value is never read (we keep NaN there as a canary).
struct Mts {
    std::string id;
    Eigen::MatrixXd values; // V x T
    BoolMatrix mask;        // V x T, true = observed

    Mts() = default;
    Mts(std::string sample_id, Eigen::MatrixXd vals, BoolMatrix obs)
        : id(std::move(sample_id)), values(std::move(vals)), mask(std::move(obs)) {
        if (values.rows() != mask.rows() || values.cols() != mask.cols())
            throw std::invalid_argument("Mts '" + id + "': values and mask dimensions differ");
    }

    static Mts fully_observed(std::string sample_id, Eigen::MatrixXd vals) {
        BoolMatrix m = BoolMatrix::Constant(vals.rows(), vals.cols(), true);
        return Mts(std::move(sample_id), std::move(vals), std::move(m));
    }

    int n_variables() const { return static_cast<int>(values.rows()); }
    int length() const { return static_cast<int>(values.cols()); }
};

enum class DatasetRole { train, test };

/// A collection of Mts samples with optional binary labels (+1 positive,
/// -1 negative) and shared variable names.
struct MtsDataset {
    std::vector<Mts> samples;
    std::optional<std::vector<int>> labels; // +1 / -1, aligned with samples
    std::vector<std::string> variable_names;
    DatasetRole role = DatasetRole::train;
    std::string label_positive = "close-to-onset";
    std::string label_negative = "far-from-onset";

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    int n_variables() const { return static_cast<int>(variable_names.size()); }

    /// Throws unless all samples share V (and, when require_common_length,
    /// also T) and labels, if present, align with samples.
    void validate(bool require_common_length = false) const {
        const int v = n_variables();
        for (const auto& s : samples) {
            if (s.n_variables() != v)
                throw std::invalid_argument("dataset: sample '" + s.id + "' has " +
                                            std::to_string(s.n_variables()) + " variables, expected " +
                                            std::to_string(v));
        }
        if (require_common_length && !samples.empty()) {
            const int t = samples.front().length();
            for (const auto& s : samples)
                if (s.length() != t)
                    throw std::invalid_argument("dataset: sample '" + s.id +
                                                "' length differs; resample to a common length first");
        }
        if (labels && labels->size() != samples.size())
            throw std::invalid_argument("dataset: labels count does not match sample count");
    }

    int min_length() const {
        if (samples.empty()) throw std::invalid_argument("dataset: empty");
        int t = samples.front().length();
        for (const auto& s : samples) t = std::min(t, s.length());
        return t;
    }

    int max_length() const {
        if (samples.empty()) throw std::invalid_argument("dataset: empty");
        int t = samples.front().length();
        for (const auto& s : samples) t = std::max(t, s.length());
        return t;
    }

    int common_length() const {
        validate(true);
        if (samples.empty()) throw std::invalid_argument("dataset: empty");
        return samples.front().length();
    }

    std::string label_name(int y) const { return y > 0 ? label_positive : label_negative; }
};

inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }

} // namespace mtskl
