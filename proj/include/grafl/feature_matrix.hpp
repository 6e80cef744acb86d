#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "grafl/function.hpp"

namespace grafl {

using Bin = std::uint16_t;
using BinVector = Eigen::Matrix<Bin, Eigen::Dynamic, 1>;

/// Binned per-element feature columns with their definitions, one column per
/// function. Rows are nodes or edges depending on `kind()`.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(ElementKind kind, std::size_t rows) : kind_(kind), rows_(rows) {}

    ElementKind kind() const { return kind_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }

    void add_column(RelationalFunction def, BinVector values, int layer);
    void remove_columns(const std::vector<bool>& drop);

    const BinVector& column(std::size_t j) const { return columns_[j]; }
    const RelationalFunction& definition(std::size_t j) const { return defs_[j]; }
    int layer(std::size_t j) const { return layers_[j]; }
    const std::vector<RelationalFunction>& definitions() const { return defs_; }

    /// Number of nonzero entries.
    std::size_t nonzeros() const;
    Eigen::MatrixXd to_dense() const;

    friend bool operator==(const FeatureMatrix& a, const FeatureMatrix& b);

private:
    ElementKind kind_ = ElementKind::node;
    std::size_t rows_ = 0;
    std::vector<RelationalFunction> defs_;
    std::vector<BinVector> columns_;
    std::vector<int> layers_;
};

}  // namespace grafl
