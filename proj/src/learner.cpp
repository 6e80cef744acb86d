#include "grafl/learner.hpp"

#include <chrono>

#include "grafl/diffusion.hpp"
#include "grafl/error.hpp"
#include "grafl/relational.hpp"

namespace grafl {

namespace {

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - start_).count();
        start_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

void LearnConfig::validate() const {
    if (operators.empty()) throw ConfigError("operator set must not be empty");
    for (const auto& op : operators) op.validate();
    if (max_layers < 1) throw ConfigError("max_layers must be >= 1");
    if (hops < 1) throw ConfigError("neighborhood distance must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
    EvaluationCriterion{criterion, lambda}.validate();
    if (diffusion) diffusion->validate();
}

std::size_t FunctionSet::size() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.size();
    return n;
}

std::vector<RelationalFunction> FunctionSet::flatten() const {
    std::vector<RelationalFunction> all;
    for (const auto& l : layers) all.insert(all.end(), l.begin(), l.end());
    return all;
}

LearnResult learn(const Graph& g, const LearnConfig& cfg) {
    cfg.validate();
    const std::size_t rows = g.num_elements(cfg.kind);
    if (rows == 0) throw Error("cannot learn features: graph has no " + to_string(cfg.kind) + "s");
    const int workers = std::max(1, cfg.workers);

    LearnResult result;
    result.features = FeatureMatrix(cfg.kind, rows);
    result.functions.kind = cfg.kind;
    result.functions.config = cfg;
    result.functions.config.workers = 0;
    FeatureEvaluator eval(g, cfg.kind, workers);
    Stopwatch clock;

    std::vector<RelationalFunction> prev_funcs;
    std::vector<BinVector> prev_cols;
    for (auto& col : base_features(g, cfg.kind, cfg.families, cfg.operators, workers)) {
        RelationalFunction f;
        f.leaf = col.descriptor;
        f.alpha = cfg.alpha;
        BinVector b = log_bin_transform(col.values, cfg.alpha);
        f.bins = bin_count(b);
        result.features.add_column(f, b, 1);
        prev_funcs.push_back(std::move(f));
        prev_cols.push_back(std::move(b));
    }
    result.functions.layers.push_back(prev_funcs);
    result.timings.base = clock.lap();

    const EvaluationCriterion criterion{cfg.criterion, cfg.lambda};
    for (int layer = 2; layer <= cfg.max_layers && !prev_funcs.empty(); ++layer) {
        CandidateLayer cand = feature_layer(eval, prev_funcs, prev_cols, cfg.operators, cfg.hops, cfg.alpha);
        result.timings.search += clock.lap();

        std::vector<BinVector> history;
        history.reserve(result.features.cols());
        for (std::size_t j = 0; j < result.features.cols(); ++j) history.push_back(result.features.column(j));
        const PruneResult pruned = prune_layer(cand.columns, history, criterion, workers);
        FeatureMatrix kept(cfg.kind, rows);
        for (std::size_t i = 0; i < cand.functions.size(); ++i)
            if (pruned.keep[i]) kept.add_column(std::move(cand.functions[i]), std::move(cand.columns[i]), layer);
        result.timings.pruning += clock.lap();
        if (kept.cols() == 0) break;

        if (cfg.diffusion) {
            kept = diffuse(eval, kept, *cfg.diffusion);
            result.timings.diffusion += clock.lap();
        }

        prev_funcs.clear();
        prev_cols.clear();
        for (std::size_t j = 0; j < kept.cols(); ++j) {
            result.features.add_column(kept.definition(j), kept.column(j), layer);
            prev_funcs.push_back(kept.definition(j));
            prev_cols.push_back(kept.column(j));
        }
        result.functions.layers.push_back(prev_funcs);
    }
    return result;
}

FeatureMatrix extract(const Graph& g, const FunctionSet& functions, int workers) {
    const std::size_t rows = g.num_elements(functions.kind);
    FeatureMatrix x(functions.kind, rows);
    FeatureEvaluator eval(g, functions.kind, std::max(1, workers));
    for (std::size_t k = 0; k < functions.layers.size(); ++k)
        for (const auto& f : functions.layers[k]) x.add_column(f, eval.evaluate(f), int(k) + 1);
    return x;
}

MatrixStats stats(const FeatureMatrix& x) {
    MatrixStats s;
    s.rows = x.rows();
    s.cols = x.cols();
    s.nonzeros = x.nonzeros();
    const double size = double(s.rows) * double(s.cols);
    s.density = size > 0 ? double(s.nonzeros) / size : 0.0;
    s.sparse_bytes = 2 * s.nonzeros;
    s.dense_bytes = 8 * s.rows * s.cols;
    return s;
}

}  // namespace grafl
