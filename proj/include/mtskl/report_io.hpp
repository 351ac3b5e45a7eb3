#pragma once

#include "mtskl/classify.hpp"
#include "mtskl/dataset_io.hpp"
#include "mtskl/metrics.hpp"
#include "mtskl/version.hpp"
#include "mtskl/window_experiment.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace mtskl {

/// One row of the classification results table: method, the time series
/// similarity it ran on, metrics, and the hyperparameters that produced them.
struct ResultRow {
    std::string method;     // knn-i | knn-e | svm-i | svm-e
    std::string similarity; // lps | tck
    MetricTriple metrics;
    ClassifierConfig config;
};

namespace report_detail {

inline std::string round3(double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(3) << v;
    return ss.str();
}

} // namespace report_detail

inline void write_results_table(const std::filesystem::path& path, const std::vector<ResultRow>& rows,
                                std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "# mtskl_version=" << kVersion << "\n";
    out << "# seed=" << seed << "\n";
    out << "method,similarity,acc,rec,f1,k,diss,C,gamma\n";
    for (const auto& r : rows) {
        out << r.method << ',' << r.similarity << ',' << report_detail::round3(r.metrics.acc) << ','
            << report_detail::round3(r.metrics.rec) << ',' << report_detail::round3(r.metrics.f1)
            << ',';
        const bool is_knn =
            r.config.kind == ClassifierKind::knn_input || r.config.kind == ClassifierKind::knn_embedding;
        if (is_knn) out << r.config.k;
        out << ',';
        if (r.config.kind == ClassifierKind::knn_embedding) out << to_string(r.config.vector_sim);
        out << ',';
        if (!is_knn) out << io_detail::format_double(r.config.c_margin);
        out << ',';
        if (r.config.kind == ClassifierKind::svm_embedding) out << io_detail::format_double(r.config.gamma);
        out << "\n";
    }
}

/// The window catalogue (problem index, window size, heartbeats and
/// approximate minutes left before the event).
inline void write_window_table(const std::filesystem::path& path,
                               const std::vector<WindowCurvePoint>& curve, std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "# mtskl_version=" << kVersion << "\n";
    out << "# seed=" << seed << "\n";
    out << "problem,win_size,hbs_before_paf,mins_before_paf\n";
    for (const auto& p : curve) {
        const auto [lo, hi] = minutes_before_range(p.problem.steps_before_event);
        out << 'c' << p.problem.index << ',' << p.problem.window_len << ','
            << p.problem.steps_before_event << ',';
        if (p.problem.steps_before_event == 0) out << '0';
        else out << '~' << lo << '-' << hi;
        out << "\n";
    }
}

inline void write_window_curves(const std::filesystem::path& path,
                                const std::vector<WindowCurvePoint>& curve, std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "# mtskl_version=" << kVersion << "\n";
    out << "# seed=" << seed << "\n";
    out << "problem,acc,rec\n";
    for (const auto& p : curve)
        out << p.problem.index << ',' << io_detail::format_double(p.metrics.acc) << ','
            << io_detail::format_double(p.metrics.rec) << "\n";
}

/// Standalone SVG line chart with the per-window ACC and REC series.
inline void write_window_chart_svg(const std::filesystem::path& path,
                                   const std::vector<WindowCurvePoint>& curve,
                                   const std::string& title) {
    const double width = 640, height = 420;
    const double left = 60, right = 24, top = 48, bottom = 52;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    const std::size_t n = curve.size();

    const auto x_of = [&](std::size_t i) {
        if (n <= 1) return left + plot_w / 2;
        return left + plot_w * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    const auto y_of = [&](double v) { return top + plot_h * (1.0 - v); };
    const auto poly = [&](auto metric) {
        std::ostringstream ss;
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) ss << ' ';
            ss << x_of(i) << ',' << y_of(metric(curve[i]));
        }
        return ss.str();
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "  <text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"15\">" << title << "</text>\n";
    for (int g = 0; g <= 10; g += 2) {
        const double y = y_of(g / 10.0);
        out << "  <line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + plot_w << "\" y2=\""
            << y << "\" stroke=\"#dddddd\"/>\n";
        out << "  <text x=\"" << left - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << g / 10.0
            << "</text>\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
        out << "  <text x=\"" << x_of(i) << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">c"
            << curve[i].problem.index << "</text>\n";
    }
    out << "  <rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"#333333\"/>\n";
    if (n > 0) {
        out << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\""
            << poly([](const WindowCurvePoint& p) { return p.metrics.acc; }) << "\"/>\n";
        out << "  <polyline fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"2\" points=\""
            << poly([](const WindowCurvePoint& p) { return p.metrics.rec; }) << "\"/>\n";
    }
    out << "  <line x1=\"" << left + 10 << "\" y1=\"" << top + 10 << "\" x2=\"" << left + 40
        << "\" y2=\"" << top + 10 << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
    out << "  <text x=\"" << left + 46 << "\" y=\"" << top + 14
        << "\" font-family=\"sans-serif\" font-size=\"12\">ACC</text>\n";
    out << "  <line x1=\"" << left + 100 << "\" y1=\"" << top + 10 << "\" x2=\"" << left + 130
        << "\" y2=\"" << top + 10 << "\" stroke=\"#ff7f0e\" stroke-width=\"2\"/>\n";
    out << "  <text x=\"" << left + 136 << "\" y=\"" << top + 14
        << "\" font-family=\"sans-serif\" font-size=\"12\">REC</text>\n";
    out << "</svg>\n";
}

/// Predictions CSV: id,label,decision_value (vote margin for kNN, signed
/// decision value for SVM).
inline void write_predictions_csv(const std::filesystem::path& path,
                                  const std::vector<std::string>& ids,
                                  const std::vector<int>& labels,
                                  const std::vector<double>& decision_values,
                                  const MtsDataset& label_names, std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "# mtskl_version=" << kVersion << "\n";
    out << "# seed=" << seed << "\n";
    out << "id,label,decision_value\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out << ids[i] << ',' << label_names.label_name(labels[i]) << ','
            << io_detail::format_double(decision_values[i]) << "\n";
    }
}

} // namespace mtskl
