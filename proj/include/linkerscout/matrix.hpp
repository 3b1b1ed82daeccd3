#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace linkerscout {

/// Dense row-major matrix with row identifiers and column labels. Row order
/// is the canonical tetrapeptide-registry order everywhere in the pipeline.
struct FeatureMatrix {
    std::vector<std::string> row_ids;
    std::vector<std::string> col_labels;
    std::vector<double> data;

    FeatureMatrix() = default;
    FeatureMatrix(std::vector<std::string> rows, std::vector<std::string> cols)
        : row_ids(std::move(rows)), col_labels(std::move(cols)),
          data(row_ids.size() * col_labels.size(), 0.0) {}

    std::size_t rows() const { return row_ids.size(); }
    std::size_t cols() const { return col_labels.size(); }

    double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data.data() + r * cols(), cols()};
    }
};

}  // namespace linkerscout
