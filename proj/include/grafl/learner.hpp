#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grafl/base_features.hpp"
#include "grafl/feature_matrix.hpp"
#include "grafl/function.hpp"
#include "grafl/graph.hpp"
#include "grafl/selection.hpp"

namespace grafl {

struct LearnConfig {
    ElementKind kind = ElementKind::node;
    std::vector<RelationalOperator> operators{{OperatorTag::mean}, {OperatorTag::sum}, {OperatorTag::max}};
    CriterionTag criterion = CriterionTag::agreement;
    double lambda = 0.7;
    double alpha = 0.5;
    int max_layers = 3;
    int hops = 1;
    BaseFamilies families;
    std::optional<DiffusionConfig> diffusion;
    int workers = 1;

    /// Throws ConfigError on an empty operator set, max_layers < 1, hops < 1,
    /// alpha outside (0,1) or an invalid threshold/operator/diffusion.
    void validate() const;

    friend bool operator==(const LearnConfig&, const LearnConfig&) = default;
};

/// The learned functions, layer by layer, with the config that produced them.
/// layers[k] holds the functions of depth k+1.
struct FunctionSet {
    ElementKind kind = ElementKind::node;
    LearnConfig config;
    std::vector<std::vector<RelationalFunction>> layers;

    std::size_t size() const;
    std::vector<RelationalFunction> flatten() const;

    friend bool operator==(const FunctionSet&, const FunctionSet&) = default;
};

struct PhaseTimings {
    double base = 0;       // base feature computation and binning
    double search = 0;     // candidate layer construction
    double pruning = 0;    // scoring and pruning
    double diffusion = 0;
};

struct LearnResult {
    FeatureMatrix features;
    FunctionSet functions;
    PhaseTimings timings;
};

/// Layer-wise feature learning: base layer, then repeatedly compose every
/// operator over the previous layer, bin, prune against everything retained
/// so far, and keep the survivors. Stops when a layer prunes to empty or
/// max_layers is reached. The base layer is never pruned.
LearnResult learn(const Graph& g, const LearnConfig& cfg);

/// Evaluates every learned function on `g`, in training column order.
FeatureMatrix extract(const Graph& g, const FunctionSet& functions, int workers = 1);

struct MatrixStats {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t nonzeros = 0;
    double density = 0;
    std::size_t sparse_bytes = 0;  // 2 bytes per nonzero
    std::size_t dense_bytes = 0;   // 8 bytes per entry
};

MatrixStats stats(const FeatureMatrix& x);

/// JSON function files (schema version 1).
std::string functions_to_json(const FunctionSet& f);
FunctionSet functions_from_json(const std::string& text);
void save_functions(const FunctionSet& f, const std::string& path);
FunctionSet load_functions(const std::string& path);

}  // namespace grafl
