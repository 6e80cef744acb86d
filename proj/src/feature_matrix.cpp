#include "grafl/feature_matrix.hpp"

#include "grafl/error.hpp"

namespace grafl {

void FeatureMatrix::add_column(RelationalFunction def, BinVector values, int layer) {
    if (std::size_t(values.size()) != rows_)
        throw Error("feature column has " + std::to_string(values.size()) + " rows, expected " +
                    std::to_string(rows_));
    defs_.push_back(std::move(def));
    columns_.push_back(std::move(values));
    layers_.push_back(layer);
}

void FeatureMatrix::remove_columns(const std::vector<bool>& drop) {
    if (drop.size() != columns_.size()) throw Error("remove_columns: mask size mismatch");
    std::size_t w = 0;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (drop[j]) continue;
        if (w != j) {
            defs_[w] = std::move(defs_[j]);
            columns_[w] = std::move(columns_[j]);
            layers_[w] = layers_[j];
        }
        ++w;
    }
    defs_.resize(w);
    columns_.resize(w);
    layers_.resize(w);
}

std::size_t FeatureMatrix::nonzeros() const {
    std::size_t nnz = 0;
    for (const auto& c : columns_)
        for (Eigen::Index i = 0; i < c.size(); ++i) nnz += c[i] != 0;
    return nnz;
}

Eigen::MatrixXd FeatureMatrix::to_dense() const {
    Eigen::MatrixXd m(Eigen::Index(rows_), Eigen::Index(columns_.size()));
    for (std::size_t j = 0; j < columns_.size(); ++j) m.col(Eigen::Index(j)) = columns_[j].cast<double>();
    return m;
}

bool operator==(const FeatureMatrix& a, const FeatureMatrix& b) {
    return a.kind_ == b.kind_ && a.rows_ == b.rows_ && a.defs_ == b.defs_ && a.columns_ == b.columns_ &&
           a.layers_ == b.layers_;
}

}  // namespace grafl
