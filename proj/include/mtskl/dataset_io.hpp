#pragma once

#include "mtskl/mts.hpp"
#include "mtskl/version.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtskl {

namespace io_detail {

inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

inline bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    return cells;
}

inline std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out.push_back(sep);
        out += parts[i];
    }
    return out;
}

inline std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected key=value");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

} // namespace io_detail

/// Load one dataset directory: manifest.txt, one <id>.csv per sample (header
/// row = variable names, one row per time step, missing entries as `NaN` or
/// an empty cell) and an optional labels.csv with columns id,label.
inline MtsDataset load_dataset_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    const fs::path manifest_path = dir / "manifest.txt";
    if (!fs::exists(manifest_path))
        throw std::runtime_error("missing manifest: " + manifest_path.string());
    const auto manifest = io_detail::read_key_value_file(manifest_path);

    MtsDataset ds;
    const auto vars_it = manifest.find("variables");
    if (vars_it == manifest.end())
        throw std::runtime_error(manifest_path.string() + ": missing 'variables' key");
    for (auto& name : io_detail::split_csv_line(vars_it->second))
        if (!name.empty()) ds.variable_names.push_back(name);
    if (auto it = manifest.find("label_positive"); it != manifest.end()) ds.label_positive = it->second;
    if (auto it = manifest.find("label_negative"); it != manifest.end()) ds.label_negative = it->second;

    std::size_t expected = 0;
    if (auto it = manifest.find("n_samples"); it != manifest.end()) expected = std::stoul(it->second);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto& p = entry.path();
        if (p.extension() != ".csv" || p.filename() == "labels.csv") continue;
        files.push_back(p);
    }
    std::sort(files.begin(), files.end());
    // an explicit sample order in the manifest overrides the lexicographic one
    if (auto it = manifest.find("samples"); it != manifest.end()) {
        std::vector<fs::path> ordered;
        for (const auto& id : io_detail::split_csv_line(it->second)) {
            if (id.empty()) continue;
            const fs::path p = dir / (id + ".csv");
            if (std::find(files.begin(), files.end(), p) == files.end())
                throw std::runtime_error(manifest_path.string() + ": listed sample '" + id +
                                         "' has no CSV file");
            ordered.push_back(p);
        }
        if (ordered.size() != files.size())
            throw std::runtime_error(manifest_path.string() +
                                     ": 'samples' does not list every CSV file");
        files = std::move(ordered);
    }
    if (expected > 0 && files.size() != expected)
        throw std::runtime_error(dir.string() + ": manifest declares " + std::to_string(expected) +
                                 " samples but found " + std::to_string(files.size()) + " CSV files");

    for (const auto& file : files) {
        std::ifstream in(file);
        if (!in) throw std::runtime_error("cannot open " + file.string());
        std::string line;
        if (!std::getline(in, line))
            throw std::runtime_error(file.string() + ":1: empty sample file");
        const auto header = io_detail::split_csv_line(line);
        if (header != ds.variable_names)
            throw std::runtime_error(file.string() + ":1: header does not match manifest variables");

        std::vector<std::vector<double>> cols(ds.variable_names.size());
        std::vector<std::vector<bool>> obs(ds.variable_names.size());
        int line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const auto cells = io_detail::split_csv_line(line);
            if (cells.size() != ds.variable_names.size())
                throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                                         ": expected " + std::to_string(ds.variable_names.size()) +
                                         " cells, found " + std::to_string(cells.size()));
            for (std::size_t v = 0; v < cells.size(); ++v) {
                if (cells[v].empty() || cells[v] == "NaN") {
                    cols[v].push_back(missing_value());
                    obs[v].push_back(false);
                } else {
                    double x;
                    if (!io_detail::parse_double(cells[v], x))
                        throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                                                 ": non-numeric cell '" + cells[v] + "'");
                    cols[v].push_back(x);
                    obs[v].push_back(true);
                }
            }
        }
        const auto t = cols.empty() ? 0 : cols.front().size();
        if (t == 0) throw std::runtime_error(file.string() + ": sample has no time steps");
        Eigen::MatrixXd values(static_cast<Eigen::Index>(cols.size()), static_cast<Eigen::Index>(t));
        BoolMatrix mask(static_cast<Eigen::Index>(cols.size()), static_cast<Eigen::Index>(t));
        for (std::size_t v = 0; v < cols.size(); ++v)
            for (std::size_t j = 0; j < t; ++j) {
                values(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(j)) = cols[v][j];
                mask(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(j)) = obs[v][j];
            }
        ds.samples.emplace_back(file.stem().string(), std::move(values), std::move(mask));
    }

    const fs::path labels_path = dir / "labels.csv";
    if (fs::exists(labels_path)) {
        std::ifstream in(labels_path);
        if (!in) throw std::runtime_error("cannot open " + labels_path.string());
        std::map<std::string, std::string> by_id;
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            if (line_no == 1 && line == "id,label") continue;
            const auto cells = io_detail::split_csv_line(line);
            if (cells.size() != 2)
                throw std::runtime_error(labels_path.string() + ":" + std::to_string(line_no) +
                                         ": expected id,label");
            by_id[cells[0]] = cells[1];
        }
        std::vector<int> labels;
        for (const auto& s : ds.samples) {
            const auto it = by_id.find(s.id);
            if (it == by_id.end())
                throw std::runtime_error(labels_path.string() + ": no label for sample '" + s.id + "'");
            if (it->second == ds.label_positive)
                labels.push_back(+1);
            else if (it->second == ds.label_negative)
                labels.push_back(-1);
            else
                throw std::runtime_error(labels_path.string() + ": unknown label '" + it->second +
                                         "' for sample '" + s.id + "'");
        }
        ds.labels = std::move(labels);
    }
    ds.validate();
    return ds;
}

/// Write a dataset directory in the interchange format. Values are printed
/// with shortest round-trip precision so parse(write(ds)) is exact.
inline void write_dataset_dir(const std::filesystem::path& dir, const MtsDataset& ds,
                              const std::vector<std::pair<std::string, std::string>>& extra_manifest = {}) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "manifest.txt");
        out << "n_samples=" << ds.samples.size() << "\n";
        out << "variables=" << io_detail::join(ds.variable_names, ',') << "\n";
        std::vector<std::string> ids;
        for (const auto& s : ds.samples) ids.push_back(s.id);
        out << "samples=" << io_detail::join(ids, ',') << "\n";
        out << "label_positive=" << ds.label_positive << "\n";
        out << "label_negative=" << ds.label_negative << "\n";
        out << "toolkit_version=" << kVersion << "\n";
        for (const auto& [k, v] : extra_manifest) out << k << "=" << v << "\n";
    }
    for (const auto& s : ds.samples) {
        std::ofstream out(dir / (s.id + ".csv"));
        out << io_detail::join(ds.variable_names, ',') << "\n";
        for (int t = 0; t < s.length(); ++t) {
            for (int v = 0; v < s.n_variables(); ++v) {
                if (v > 0) out << ',';
                if (s.mask(v, t)) out << io_detail::format_double(s.values(v, t));
                else out << "NaN";
            }
            out << "\n";
        }
    }
    if (ds.labels) {
        std::ofstream out(dir / "labels.csv");
        out << "id,label\n";
        for (std::size_t i = 0; i < ds.samples.size(); ++i)
            out << ds.samples[i].id << ',' << ds.label_name((*ds.labels)[i]) << "\n";
    }
}

} // namespace mtskl
