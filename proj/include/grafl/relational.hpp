#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "grafl/base_features.hpp"
#include "grafl/feature_matrix.hpp"
#include "grafl/function.hpp"
#include "grafl/graph.hpp"

namespace grafl {

/// phi<S, x> for one element. `self` is x_i, used by weighted-Lp and RBF.
/// An empty set yields 0, except RBF which yields exp(0) = 1. Hadamard is
/// the product over S and short-circuits to 0 on any zero factor.
double apply_operator(const RelationalOperator& op, std::span<const std::uint32_t> set,
                      const Eigen::VectorXd& x, double self);

/// Rank-based logarithmic binning: ascending order, the first ceil(alpha*r)
/// of the r remaining elements go to the next bin, and ties with the last
/// element of a bin join it. Throws ConfigError unless 0 < alpha < 1, and
/// Error on NaN input or more bins than a Bin can hold.
BinVector log_bin_transform(const Eigen::VectorXd& x, double alpha);

/// Number of distinct bins (max + 1, 0 for an empty vector).
std::uint32_t bin_count(const BinVector& bins);

/// Evaluates relational functions on one graph, sharing base columns,
/// neighborhood indexes and intermediate results between functions with a
/// common prefix.
class FeatureEvaluator {
public:
    FeatureEvaluator(const Graph& g, ElementKind kind, int workers = 1);

    const Graph& graph() const { return g_; }
    ElementKind kind() const { return kind_; }
    int workers() const { return workers_; }

    const NeighborhoodIndex& neighborhood(NeighborhoodSelector sel);

    /// x' = phi<x>: the operator applied over every element's neighborhood.
    Eigen::VectorXd apply_step(const RelationalOperator& op, NeighborhoodSelector sel,
                               const Eigen::VectorXd& x);

    /// Binned base column.
    const BinVector& base(const BaseFeatureDescriptor& d, double alpha);

    /// Binned output of a full function. Throws TransferError if the graph
    /// cannot provide the leaf.
    BinVector evaluate(const RelationalFunction& f);

    /// Drops memoized intermediate vectors (base columns stay cached).
    void clear_memo() { memo_.clear(); }

private:
    const BinVector& evaluate_prefix(const RelationalFunction& f, std::size_t steps);

    const Graph& g_;
    ElementKind kind_;
    int workers_;
    BaseFeatureCache base_cache_;
    std::map<std::pair<int, int>, std::unique_ptr<NeighborhoodIndex>> neighborhoods_;
    std::map<std::string, BinVector> memo_;
};

/// One-shot evaluation of a function on a graph.
BinVector evaluate_function(const Graph& g, ElementKind kind, const RelationalFunction& f,
                            int workers = 1);

struct CandidateLayer {
    std::vector<RelationalFunction> functions;
    std::vector<BinVector> columns;
};

/// Applies every operator over every selector (out, in, all at `hops`) to
/// every previous-layer feature. Column order is (feature, selector,
/// operator); each column is binned with `alpha`.
CandidateLayer feature_layer(FeatureEvaluator& eval, std::span<const RelationalFunction> prev_functions,
                             std::span<const BinVector> prev_columns, std::span<const RelationalOperator> ops,
                             int hops, double alpha);

}  // namespace grafl
