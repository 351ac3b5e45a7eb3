#pragma once

#include "mtskl/dataset_io.hpp"
#include "mtskl/kernel_matrix.hpp"
#include "mtskl/lps.hpp"
#include "mtskl/tck.hpp"
#include "mtskl/version.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtskl {

namespace io_detail {

inline std::vector<std::string> tokens(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

inline double to_double(const std::string& s) {
    double v;
    if (!parse_double(s, v)) throw std::runtime_error("expected a number, got '" + s + "'");
    return v;
}

inline std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out.push_back(',');
        out += std::to_string(v[i]);
    }
    return out;
}

inline std::vector<int> split_ints(const std::string& s) {
    std::vector<int> out;
    for (const auto& c : split_csv_line(s))
        if (!c.empty()) out.push_back(std::stoi(c));
    return out;
}

} // namespace io_detail

// ---------------------------------------------------------------------------
// Kernel matrix CSV: comment lines carry provenance, then a header row of
// column sample ids and a leading column of row sample ids.
// ---------------------------------------------------------------------------

inline void write_kernel_csv(const std::filesystem::path& path, const KernelMatrix& k,
                             std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "# mtskl_version=" << kVersion << "\n";
    out << "# seed=" << seed << "\n";
    out << "# method=" << k.method << "\n";
    out << "id";
    for (const auto& c : k.col_ids) out << ',' << c;
    out << "\n";
    for (Eigen::Index i = 0; i < k.values.rows(); ++i) {
        out << k.row_ids[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < k.values.cols(); ++j)
            out << ',' << io_detail::format_double(k.values(i, j));
        out << "\n";
    }
}

inline KernelMatrix read_kernel_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    KernelMatrix k;
    std::string line;
    std::vector<std::vector<double>> rows;
    bool header_seen = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find("method=");
            if (eq != std::string::npos) k.method = line.substr(eq + 7);
            continue;
        }
        const auto cells = io_detail::split_csv_line(line);
        if (!header_seen) {
            for (std::size_t i = 1; i < cells.size(); ++i) k.col_ids.push_back(cells[i]);
            header_seen = true;
            continue;
        }
        if (cells.size() != k.col_ids.size() + 1)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": wrong cell count");
        k.row_ids.push_back(cells[0]);
        std::vector<double> row;
        for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(io_detail::to_double(cells[i]));
        rows.push_back(std::move(row));
    }
    k.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(k.col_ids.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            k.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    k.symmetric = k.row_ids == k.col_ids;
    return k;
}

// ---------------------------------------------------------------------------
// LPS model file: header key=value block, then one `tree` line per tree
// followed by its node list (split nodes and leaves in storage order).
// ---------------------------------------------------------------------------

inline void save_lps_model(const std::filesystem::path& path, const LpsModel& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "mtskl_lps_model v1\n";
    out << "version=" << kVersion << "\n";
    out << "seed=" << m.seed << "\n";
    out << "n_trees=" << m.params.n_trees << "\n";
    out << "seg_len=" << m.params.seg_len << "\n";
    out << "max_depth=" << m.params.max_depth << "\n";
    out << "min_leaf=" << m.params.min_leaf << "\n";
    out << "threshold_candidates=" << m.params.threshold_candidates << "\n";
    out << "n_variables=" << m.n_variables << "\n";
    out << "train_len=" << m.train_len << "\n";
    for (const auto& tree : m.trees) {
        out << "tree target=" << tree.target_pos << " nodes=" << tree.nodes.size()
            << " leaves=" << tree.n_leaves << "\n";
        for (const auto& n : tree.nodes) {
            if (n.split_pos < 0) {
                out << "leaf " << n.leaf_id << "\n";
            } else {
                out << "split " << n.split_pos << ' ' << io_detail::format_double(n.threshold) << ' '
                    << (n.missing_right ? 'R' : 'L') << ' ' << n.left << ' ' << n.right << "\n";
            }
        }
    }
}

inline LpsModel load_lps_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("mtskl_lps_model", 0) != 0)
        throw std::runtime_error(path.string() + ": not an LPS model file");
    LpsModel m;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("tree ", 0) == 0) break;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error(path.string() + ": bad header line");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "seed") m.seed = std::stoull(val);
        else if (key == "n_trees") m.params.n_trees = std::stoi(val);
        else if (key == "seg_len") m.params.seg_len = std::stoi(val);
        else if (key == "max_depth") m.params.max_depth = std::stoi(val);
        else if (key == "min_leaf") m.params.min_leaf = std::stoi(val);
        else if (key == "threshold_candidates") m.params.threshold_candidates = std::stoi(val);
        else if (key == "n_variables") m.n_variables = std::stoi(val);
        else if (key == "train_len") m.train_len = std::stoi(val);
    }
    // `line` now holds the first tree header
    while (!line.empty() && line.rfind("tree ", 0) == 0) {
        RegressionTree tree;
        std::size_t n_nodes = 0;
        for (const auto& tok : io_detail::tokens(line)) {
            if (tok.rfind("target=", 0) == 0) tree.target_pos = std::stoi(tok.substr(7));
            if (tok.rfind("nodes=", 0) == 0) n_nodes = std::stoul(tok.substr(6));
            if (tok.rfind("leaves=", 0) == 0) tree.n_leaves = std::stoi(tok.substr(7));
        }
        for (std::size_t i = 0; i < n_nodes; ++i) {
            if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": truncated tree");
            const auto tok = io_detail::tokens(line);
            TreeNode node;
            if (tok.at(0) == "leaf") {
                node.leaf_id = std::stoi(tok.at(1));
            } else if (tok.at(0) == "split") {
                node.split_pos = std::stoi(tok.at(1));
                node.threshold = io_detail::to_double(tok.at(2));
                node.missing_right = tok.at(3) == "R";
                node.left = std::stoi(tok.at(4));
                node.right = std::stoi(tok.at(5));
            } else {
                throw std::runtime_error(path.string() + ": unknown node kind '" + tok.at(0) + "'");
            }
            tree.nodes.push_back(node);
        }
        m.trees.push_back(std::move(tree));
        if (!std::getline(in, line)) line.clear();
    }
    m.leaf_offsets.resize(m.trees.size());
    int off = 0;
    for (std::size_t k = 0; k < m.trees.size(); ++k) {
        m.leaf_offsets[k] = off;
        off += m.trees[k].n_leaves;
    }
    m.total_leaves = off;
    return m;
}

// ---------------------------------------------------------------------------
// TCK model file: header block, train ids, then per-partition view indices,
// hyperparameters, mixture parameters and stored training posteriors.
// ---------------------------------------------------------------------------

namespace io_detail {

inline void write_matrix(std::ofstream& out, const char* tag, const Eigen::MatrixXd& m) {
    out << tag << ' ' << m.rows() << ' ' << m.cols() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ' ';
            out << format_double(m(i, j));
        }
        out << "\n";
    }
}

inline Eigen::MatrixXd read_matrix(std::ifstream& in, const std::string& expect_tag) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("truncated model file");
    const auto tok = tokens(line);
    if (tok.size() != 3 || tok[0] != expect_tag)
        throw std::runtime_error("expected '" + expect_tag + "' block, got '" + line + "'");
    const auto rows = std::stol(tok[1]);
    const auto cols = std::stol(tok[2]);
    Eigen::MatrixXd m(rows, cols);
    for (long i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated matrix block");
        const auto cells = tokens(line);
        if (static_cast<long>(cells.size()) != cols)
            throw std::runtime_error("matrix row has wrong arity");
        for (long j = 0; j < cols; ++j) m(i, j) = to_double(cells[static_cast<std::size_t>(j)]);
    }
    return m;
}

} // namespace io_detail

inline void save_tck_model(const std::filesystem::path& path, const TckModel& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "mtskl_tck_model v1\n";
    out << "version=" << kVersion << "\n";
    out << "seed=" << m.seed << "\n";
    out << "q=" << m.params.q << "\n";
    out << "c_max=" << m.params.c_max << "\n";
    out << "n_variables=" << m.n_variables << "\n";
    out << "train_len=" << m.train_len << "\n";
    out << "train_ids=" << [&] {
        std::vector<std::string> ids = m.train_ids;
        return io_detail::join(ids, ',');
    }() << "\n";
    out << "partitions=" << m.partitions.size() << "\n";
    for (std::size_t p = 0; p < m.partitions.size(); ++p) {
        const GmmPartition& part = m.partitions[p];
        out << "partition q=" << part.q_index << " c=" << part.n_components << "\n";
        out << "vars=" << io_detail::join_ints(part.variable_subset) << "\n";
        out << "window=" << part.t_begin << ',' << part.t_end << "\n";
        out << "samples=" << io_detail::join_ints(part.sample_subset) << "\n";
        out << "kept_dims=" << io_detail::join_ints(part.kept_dims) << "\n";
        out << "kappa0=" << io_detail::format_double(part.mixture.kappa0) << "\n";
        out << "a0=" << io_detail::format_double(part.mixture.a0) << "\n";
        io_detail::write_matrix(out, "b0", part.mixture.b0.transpose());
        io_detail::write_matrix(out, "weights", part.mixture.weights.transpose());
        io_detail::write_matrix(out, "means", part.mixture.means);
        io_detail::write_matrix(out, "variances", part.mixture.variances);
        io_detail::write_matrix(out, "posteriors", m.train_posteriors[p]);
    }
}

inline TckModel load_tck_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("mtskl_tck_model", 0) != 0)
        throw std::runtime_error(path.string() + ": not a TCK model file");
    TckModel m;
    std::size_t n_parts = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("partition ", 0) == 0) break;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error(path.string() + ": bad header line");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "seed") m.seed = std::stoull(val);
        else if (key == "q") m.params.q = std::stoi(val);
        else if (key == "c_max") m.params.c_max = std::stoi(val);
        else if (key == "n_variables") m.n_variables = std::stoi(val);
        else if (key == "train_len") m.train_len = std::stoi(val);
        else if (key == "train_ids") {
            for (auto& id : io_detail::split_csv_line(val))
                if (!id.empty()) m.train_ids.push_back(id);
        } else if (key == "partitions") {
            n_parts = std::stoul(val);
        }
    }
    for (std::size_t p = 0; p < n_parts; ++p) {
        if (p > 0 && !std::getline(in, line)) throw std::runtime_error(path.string() + ": truncated");
        if (line.rfind("partition ", 0) != 0)
            throw std::runtime_error(path.string() + ": expected partition header");
        GmmPartition part;
        for (const auto& tok : io_detail::tokens(line)) {
            if (tok.rfind("q=", 0) == 0) part.q_index = std::stoi(tok.substr(2));
            if (tok.rfind("c=", 0) == 0) part.n_components = std::stoi(tok.substr(2));
        }
        const auto read_kv = [&](const char* key) {
            if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": truncated");
            const auto eq = line.find('=');
            if (eq == std::string::npos || line.substr(0, eq) != key)
                throw std::runtime_error(path.string() + ": expected '" + key + "'");
            return line.substr(eq + 1);
        };
        part.variable_subset = io_detail::split_ints(read_kv("vars"));
        const auto win = io_detail::split_ints(read_kv("window"));
        part.t_begin = win.at(0);
        part.t_end = win.at(1);
        part.sample_subset = io_detail::split_ints(read_kv("samples"));
        part.kept_dims = io_detail::split_ints(read_kv("kept_dims"));
        part.mixture.kappa0 = io_detail::to_double(read_kv("kappa0"));
        part.mixture.a0 = io_detail::to_double(read_kv("a0"));
        part.mixture.b0 = io_detail::read_matrix(in, "b0").row(0).transpose();
        part.mixture.weights = io_detail::read_matrix(in, "weights").row(0).transpose();
        part.mixture.means = io_detail::read_matrix(in, "means");
        part.mixture.variances = io_detail::read_matrix(in, "variances");
        m.train_posteriors.push_back(io_detail::read_matrix(in, "posteriors"));
        m.partitions.push_back(std::move(part));
    }
    return m;
}

} // namespace mtskl
