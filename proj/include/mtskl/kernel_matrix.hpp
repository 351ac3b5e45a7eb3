#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace mtskl {

/// Similarity matrix between samples. Symmetric train x train matrices have
/// row_ids == col_ids; test x train matrices are rectangular.
struct KernelMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> row_ids;
    std::vector<std::string> col_ids;
    std::string method; // "lps" | "tck"
    bool symmetric = false;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    void validate() const {
        if (values.rows() != static_cast<Eigen::Index>(row_ids.size()) ||
            values.cols() != static_cast<Eigen::Index>(col_ids.size()))
            throw std::invalid_argument("KernelMatrix: id lists do not match matrix shape");
        if (symmetric) {
            if (values.rows() != values.cols())
                throw std::invalid_argument("KernelMatrix: symmetric matrix must be square");
            if (row_ids != col_ids)
                throw std::invalid_argument("KernelMatrix: symmetric matrix must have row_ids == col_ids");
        }
    }
};

} // namespace mtskl
