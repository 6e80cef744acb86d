#include "grafl/relational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "grafl/diffusion.hpp"
#include "grafl/error.hpp"
#include "grafl/parallel.hpp"

namespace grafl {

double apply_operator(const RelationalOperator& op, std::span<const std::uint32_t> set,
                      const Eigen::VectorXd& x, double self) {
    switch (op.tag) {
        case OperatorTag::hadamard: {
            if (set.empty()) return 0.0;
            double acc = 1.0;
            for (auto j : set) {
                const double v = x[j];
                if (v == 0.0) return 0.0;
                acc *= v;
            }
            return acc;
        }
        case OperatorTag::mean:
        case OperatorTag::sum: {
            double acc = 0.0;
            for (auto j : set) acc += x[j];
            if (op.tag == OperatorTag::mean && !set.empty()) acc /= double(set.size());
            return acc;
        }
        case OperatorTag::max: {
            if (set.empty()) return 0.0;
            double acc = -std::numeric_limits<double>::infinity();
            for (auto j : set) acc = std::max(acc, x[j]);
            return acc;
        }
        case OperatorTag::weighted_lp: {
            double acc = 0.0;
            for (auto j : set) {
                const double d = std::abs(self - x[j]);
                acc += op.p == 1.0 ? d : op.p == 2.0 ? d * d : std::pow(d, op.p);
            }
            return acc;
        }
        case OperatorTag::rbf: {
            double acc = 0.0;
            for (auto j : set) {
                const double d = self - x[j];
                acc += d * d;
            }
            return std::exp(-acc / (op.sigma * op.sigma));
        }
    }
    return 0.0;
}

BinVector log_bin_transform(const Eigen::VectorXd& x, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("binning fraction alpha must lie in (0,1), got " + std::to_string(alpha));
    const std::size_t n = std::size_t(x.size());
    BinVector bins(x.size());
    if (n == 0) return bins;

    std::vector<std::pair<double, std::uint32_t>> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(x[Eigen::Index(i)])) throw Error("cannot bin a feature containing NaN");
        order[i] = {x[Eigen::Index(i)], std::uint32_t(i)};
    }
    std::sort(order.begin(), order.end());

    std::size_t pos = 0;
    std::uint32_t bin = 0;
    while (pos < n) {
        if (bin > std::numeric_limits<Bin>::max())
            throw ConfigError("alpha too small: more than 65536 bins required");
        const std::size_t remaining = n - pos;
        // Shave a relative epsilon so products like 0.1*30 do not round up past an integer.
        const long double t = static_cast<long double>(alpha) * static_cast<long double>(remaining);
        std::size_t take = std::size_t(std::ceil(t - t * 1e-15L));
        take = std::clamp<std::size_t>(take, 1, remaining);
        std::size_t end = pos + take;
        while (end < n && order[end].first == order[end - 1].first) ++end;
        for (std::size_t k = pos; k < end; ++k) bins[order[k].second] = Bin(bin);
        pos = end;
        ++bin;
    }
    return bins;
}

std::uint32_t bin_count(const BinVector& bins) {
    return bins.size() == 0 ? 0 : std::uint32_t(bins.maxCoeff()) + 1;
}

FeatureEvaluator::FeatureEvaluator(const Graph& g, ElementKind kind, int workers)
    : g_(g), kind_(kind), workers_(std::max(1, workers)), base_cache_(g, kind, std::max(1, workers)) {}

const NeighborhoodIndex& FeatureEvaluator::neighborhood(NeighborhoodSelector sel) {
    // All three directions coincide on undirected graphs; share one index.
    if (!g_.directed()) sel.direction = Direction::all;
    auto key = std::make_pair(int(sel.direction), sel.hops);
    auto& slot = neighborhoods_[key];
    if (!slot) slot = std::make_unique<NeighborhoodIndex>(build_neighborhoods(g_, kind_, sel, workers_));
    return *slot;
}

Eigen::VectorXd FeatureEvaluator::apply_step(const RelationalOperator& op, NeighborhoodSelector sel,
                                             const Eigen::VectorXd& x) {
    op.validate();
    const NeighborhoodIndex& nb = neighborhood(sel);
    Eigen::VectorXd out(x.size());
    parallel_for(x.size(), workers_, [&](std::int64_t i) {
        out[i] = apply_operator(op, nb[std::size_t(i)], x, x[i]);
    });
    return out;
}

const BinVector& FeatureEvaluator::base(const BaseFeatureDescriptor& d, double alpha) {
    std::ostringstream key;
    key << "base|" << to_string(d.family) << '|' << d.variant << '|' << std::hexfloat << alpha;
    auto it = memo_.find(key.str());
    if (it != memo_.end()) return it->second;
    return memo_.emplace(key.str(), log_bin_transform(base_cache_.get(d), alpha)).first->second;
}

namespace {

void put_diffusion(std::ostream& os, const std::optional<DiffusionConfig>& d) {
    if (!d) return;
    os << "~d" << int(d->method) << ',' << d->theta << ',' << d->iterations << ',' << d->tolerance;
}

std::string prefix_key(const RelationalFunction& f, std::size_t steps) {
    std::ostringstream os;
    os << std::hexfloat << f.alpha << '|' << to_string(f.leaf.family) << '|' << f.leaf.variant;
    put_diffusion(os, f.leaf_diffusion);
    for (std::size_t k = 0; k < steps; ++k) {
        const auto& s = f.chain[k];
        os << '>' << int(s.op.tag) << ',' << s.op.p << ',' << s.op.sigma << ',' << int(s.sel.direction) << ','
           << s.sel.hops;
        put_diffusion(os, s.diffusion);
    }
    return os.str();
}

BinVector smooth_and_bin(FeatureEvaluator& eval, const BinVector& b, const DiffusionConfig& cfg, double alpha) {
    return log_bin_transform(diffuse_values(eval, Eigen::VectorXd(b.cast<double>()), cfg), alpha);
}

}  // namespace

const BinVector& FeatureEvaluator::evaluate_prefix(const RelationalFunction& f, std::size_t steps) {
    const std::string key = prefix_key(f, steps);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    BinVector result;
    if (steps == 0) {
        const BinVector& b = base(f.leaf, f.alpha);
        result = f.leaf_diffusion ? smooth_and_bin(*this, b, *f.leaf_diffusion, f.alpha) : b;
    } else {
        const BinVector& prev = evaluate_prefix(f, steps - 1);
        const ChainStep& step = f.chain[steps - 1];
        result = log_bin_transform(apply_step(step.op, step.sel, prev.cast<double>()), f.alpha);
        if (step.diffusion) result = smooth_and_bin(*this, result, *step.diffusion, f.alpha);
    }
    return memo_.emplace(key, std::move(result)).first->second;
}

BinVector FeatureEvaluator::evaluate(const RelationalFunction& f) {
    if (std::size_t(g_.num_elements(kind_)) == 0) return BinVector(0);
    BinVector own = evaluate_prefix(f, f.chain.size());
    if (!f.combinator || !f.combinator->other) return own;
    const BinVector other = evaluate(*f.combinator->other);
    Eigen::VectorXd a = own.cast<double>(), b = other.cast<double>();
    Eigen::VectorXd c = f.combinator->kind == CombinatorKind::plus ? Eigen::VectorXd(a + b)
                                                                   : Eigen::VectorXd(a.cwiseProduct(b));
    return log_bin_transform(c, f.alpha);
}

BinVector evaluate_function(const Graph& g, ElementKind kind, const RelationalFunction& f, int workers) {
    FeatureEvaluator eval(g, kind, workers);
    return eval.evaluate(f);
}

CandidateLayer feature_layer(FeatureEvaluator& eval, std::span<const RelationalFunction> prev_functions,
                             std::span<const BinVector> prev_columns, std::span<const RelationalOperator> ops,
                             int hops, double alpha) {
    if (prev_functions.size() != prev_columns.size())
        throw Error("feature_layer: definitions and columns are misaligned");
    for (const auto& op : ops) op.validate();
    const std::array<Direction, 3> directions{Direction::out, Direction::in, Direction::all};

    CandidateLayer layer;
    const std::size_t per_feature = directions.size() * ops.size();
    layer.functions.reserve(prev_functions.size() * per_feature);
    layer.columns.reserve(prev_functions.size() * per_feature);

    std::vector<Eigen::VectorXd> raw(per_feature);
    std::vector<BinVector> binned(per_feature);
    for (std::size_t k = 0; k < prev_functions.size(); ++k) {
        const Eigen::VectorXd x = prev_columns[k].cast<double>();
        // Selectors that resolve to the same neighborhood index give identical columns.
        std::vector<const NeighborhoodIndex*> seen;
        std::size_t t = 0;
        for (Direction d : directions) {
            const NeighborhoodSelector sel{d, hops};
            const NeighborhoodIndex* idx = &eval.neighborhood(sel);
            const auto dup = std::find(seen.begin(), seen.end(), idx);
            for (std::size_t o = 0; o < ops.size(); ++o, ++t) {
                if (dup != seen.end())
                    raw[t] = raw[std::size_t(dup - seen.begin()) * ops.size() + o];
                else
                    raw[t] = eval.apply_step(ops[o], sel, x);
            }
            seen.push_back(dup != seen.end() ? nullptr : idx);
        }
        parallel_for_dynamic(std::int64_t(per_feature), eval.workers(),
                             [&](std::int64_t c) { binned[std::size_t(c)] = log_bin_transform(raw[std::size_t(c)], alpha); });
        t = 0;
        for (Direction d : directions) {
            for (const auto& op : ops) {
                RelationalFunction f = prev_functions[k];
                f.chain.push_back({op, {d, hops}, std::nullopt});
                f.alpha = alpha;
                f.bins = bin_count(binned[t]);
                layer.functions.push_back(std::move(f));
                layer.columns.push_back(std::move(binned[t]));
                ++t;
            }
        }
    }
    return layer;
}

}  // namespace grafl
