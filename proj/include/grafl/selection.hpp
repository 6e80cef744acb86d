#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "grafl/feature_matrix.hpp"

namespace grafl {

/// Fraction of positions where two binned vectors hold the same bin. Two
/// empty vectors agree vacuously (1.0). Throws on length mismatch.
double agreement_score(const BinVector& x, const BinVector& y);

/// Plug-in mutual information (natural log) of two discrete vectors.
double mutual_information(const BinVector& x, const BinVector& y);

enum class CriterionTag { agreement, mutual_information };

struct EvaluationCriterion {
    CriterionTag tag = CriterionTag::agreement;
    double lambda = 0.7;

    void validate() const;
    double score(const BinVector& x, const BinVector& y) const;
};

/// Feature pairs scoring above lambda. Vertices 0..historical-1 are the
/// retained earlier-layer features, the rest the new layer's candidates in
/// order, so a smaller id is always an earlier feature.
struct FeatureDependenceGraph {
    struct Edge {
        std::uint32_t i;
        std::uint32_t j;
        double weight;
    };

    std::size_t historical = 0;
    std::size_t vertices = 0;
    std::vector<Edge> edges;

    /// Component label per vertex; labels are the smallest vertex id of the component.
    std::vector<std::uint32_t> components() const;
};

struct PruneResult {
    std::vector<bool> keep;  // one flag per new feature
    FeatureDependenceGraph graph;
};

/// Scores every new feature against every historical feature and every
/// earlier new feature, links pairs scoring above lambda, and keeps one
/// feature per connected component: the historical member if there is one
/// (so all new members go), otherwise the earliest new member.
PruneResult prune_layer(std::span<const BinVector> new_columns, std::span<const BinVector> historical_columns,
                        const EvaluationCriterion& criterion, int workers = 1);

/// Greedy relevance/redundancy selection. Seeds with the feature of highest
/// MI to `labels`, then repeatedly adds the remaining feature maximizing
/// MI(y, x_i) - beta * sum_{x_j selected} MI(x_i, x_j) until `k` are chosen.
/// Ties go to the lower feature id. Rows with a negative label are ignored.
std::vector<std::size_t> supervised_select(std::span<const BinVector> columns, std::span<const int> labels,
                                           double beta, std::size_t k);

}  // namespace grafl
