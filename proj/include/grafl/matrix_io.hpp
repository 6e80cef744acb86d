#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "grafl/feature_matrix.hpp"
#include "grafl/graph.hpp"

namespace grafl {

/// Writes through a temporary sibling file and renames it over `path`, so a
/// failed writer never leaves a partial file behind.
void write_atomic(const std::string& path, const std::function<void(std::ostream&)>& writer);

/// Display id of an element: the node's original token, or "src:dst" for edges.
std::string element_label(const Graph& g, ElementKind kind, std::uint32_t index);

enum class MatrixFormat { csv, triplet };
MatrixFormat parse_matrix_format(const std::string& s);

/// `element_id,f0,f1,...` with one row per element.
void write_matrix_csv(std::ostream& os, const Graph& g, const FeatureMatrix& x);
/// `element feature bin` lines for the nonzero entries.
void write_matrix_triplets(std::ostream& os, const Graph& g, const FeatureMatrix& x);
void save_matrix(const std::string& path, const Graph& g, const FeatureMatrix& x, MatrixFormat format);

/// Real-valued table as written by write_values_csv or write_matrix_csv.
struct ValueTable {
    std::vector<std::string> ids;
    std::vector<std::string> columns;
    Eigen::MatrixXd values;
};

ValueTable read_values_csv(std::istream& in);
ValueTable load_values_csv(const std::string& path);
void write_values_csv(std::ostream& os, const ValueTable& t);

}  // namespace grafl
