#pragma once

#include <Eigen/Core>

#include "grafl/feature_matrix.hpp"
#include "grafl/function.hpp"
#include "grafl/graph.hpp"

namespace grafl {

class FeatureEvaluator;

/// Smooths the columns of `x` (rows = elements of `kind`) over the graph.
///   row-stochastic: X(t) = D^-1 A X(t-1), rows without neighbors unchanged;
///   laplacian:      X(t) = (1-theta) L X(t-1) + theta X, L = I - D^-1/2 A D^-1/2.
/// Iterates cfg.iterations times or until the largest entry change is below
/// cfg.tolerance. Node adjacency follows out-arcs (all arcs when undirected)
/// for row-stochastic and the undirected skeleton for the Laplacian; edges
/// use their line-graph neighborhoods.
Eigen::MatrixXd diffuse_values(FeatureEvaluator& eval, const Eigen::MatrixXd& x, const DiffusionConfig& cfg);
Eigen::VectorXd diffuse_values(FeatureEvaluator& eval, const Eigen::VectorXd& x, const DiffusionConfig& cfg);

/// Diffuses every column of a binned feature matrix and re-bins each with
/// its function's alpha. `replace` swaps the columns for their smoothed
/// versions; `append` adds them after the originals (X <- [X Xbar]). The new
/// definitions carry the diffusion so extraction reproduces them.
FeatureMatrix diffuse(FeatureEvaluator& eval, const FeatureMatrix& x, const DiffusionConfig& cfg);

}  // namespace grafl
