#pragma once

#include "mtskl/mts.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace mtskl {

/// One problem of the early-prediction study: the classifier sees only the
/// first window_len steps of the end-aligned shortest segment, leaving
/// steps_before_event steps between the window end and the recording end.
struct WindowProblem {
    int index = 0;             // 1..P
    int window_len = 0;        // index * floor(T_min / P)
    int steps_before_event = 0; // T_min - window_len
};

/// Align every sample at its final time step, keep the last t_min steps, and
/// build P nested prefix problems of lengths i * floor(t_min / P).
inline std::vector<std::pair<WindowProblem, MtsDataset>> slice_windows(const MtsDataset& ds, int p,
                                                                       int t_min_override = -1) {
    if (p < 1) throw std::invalid_argument("slice_windows: P must be >= 1");
    if (ds.empty()) throw std::invalid_argument("slice_windows: empty dataset");
    ds.validate();
    const int t_min = t_min_override > 0 ? t_min_override : ds.min_length();
    if (t_min_override > 0 && ds.min_length() < t_min_override)
        throw std::invalid_argument("slice_windows: a sample is shorter than T_min");
    if (p > t_min) throw std::invalid_argument("slice_windows: P exceeds the shortest length");

    const int step = t_min / p;
    std::vector<std::pair<WindowProblem, MtsDataset>> out;
    out.reserve(static_cast<std::size_t>(p));
    for (int i = 1; i <= p; ++i) {
        WindowProblem prob;
        prob.index = i;
        prob.window_len = i * step;
        prob.steps_before_event = t_min - prob.window_len;

        MtsDataset sliced = ds;
        sliced.samples.clear();
        sliced.samples.reserve(ds.samples.size());
        for (const auto& s : ds.samples) {
            const int start = s.length() - t_min; // end alignment
            Eigen::MatrixXd vals = s.values.middleCols(start, prob.window_len);
            BoolMatrix mask = s.mask.middleCols(start, prob.window_len);
            sliced.samples.emplace_back(s.id, std::move(vals), std::move(mask));
        }
        out.emplace_back(prob, std::move(sliced));
    }
    return out;
}

} // namespace mtskl
