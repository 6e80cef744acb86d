#include "grafl/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "grafl/error.hpp"
#include "grafl/parallel.hpp"

namespace grafl {

namespace {

std::size_t count_equal(const Bin* a, const Bin* b, std::size_t n) {
    std::size_t same = 0;
    for (std::size_t i = 0; i < n; ++i) same += a[i] == b[i];
    return same;
}

template <typename A, typename B>
double plugin_mi(const A& a, const B& b, std::size_t n) {
    if (n == 0) return 0.0;
    std::unordered_map<std::uint64_t, std::size_t> joint;
    std::unordered_map<std::int64_t, std::size_t> pa, pb;
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = std::int64_t(a(i)), y = std::int64_t(b(i));
        ++joint[(std::uint64_t(std::uint32_t(x)) << 32) | std::uint32_t(y)];
        ++pa[x];
        ++pb[y];
    }
    const double total = double(n);
    double mi = 0.0;
    // Sum in key order so the result does not depend on hash iteration order.
    std::vector<std::pair<std::uint64_t, std::size_t>> cells(joint.begin(), joint.end());
    std::sort(cells.begin(), cells.end());
    for (const auto& [key, c] : cells) {
        const auto x = std::int64_t(std::int32_t(std::uint32_t(key >> 32)));
        const auto y = std::int64_t(std::int32_t(std::uint32_t(key & 0xffffffffu)));
        const double pxy = double(c) / total;
        mi += pxy * std::log(pxy / ((double(pa[x]) / total) * (double(pb[y]) / total)));
    }
    return std::max(0.0, mi);
}

/// Agreement of x and y if it exceeds lambda, otherwise a negative value.
/// Scans in blocks and stops once too many mismatches make lambda unreachable.
double agreement_above(const BinVector& x, const BinVector& y, double lambda) {
    const std::size_t n = std::size_t(x.size());
    if (n == 0) return 1.0 > lambda ? 1.0 : -1.0;
    const std::size_t allowed = n - std::min<std::size_t>(n, std::size_t(std::floor(lambda * double(n))));
    constexpr std::size_t block = 4096;
    std::size_t same = 0;
    for (std::size_t pos = 0; pos < n; pos += block) {
        const std::size_t len = std::min(block, n - pos);
        same += count_equal(x.data() + pos, y.data() + pos, len);
        if (pos + len - same > allowed) return -1.0;
    }
    const double score = double(same) / double(n);
    return score > lambda ? score : -1.0;
}

}  // namespace

double agreement_score(const BinVector& x, const BinVector& y) {
    if (x.size() != y.size())
        throw Error("agreement_score: length mismatch (" + std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()) + ")");
    if (x.size() == 0) return 1.0;
    return double(count_equal(x.data(), y.data(), std::size_t(x.size()))) / double(x.size());
}

double mutual_information(const BinVector& x, const BinVector& y) {
    if (x.size() != y.size()) throw Error("mutual_information: length mismatch");
    return plugin_mi([&](std::size_t i) { return x[Eigen::Index(i)]; },
                     [&](std::size_t i) { return y[Eigen::Index(i)]; }, std::size_t(x.size()));
}

void EvaluationCriterion::validate() const {
    if (tag == CriterionTag::agreement && !(lambda >= 0.0 && lambda <= 1.0))
        throw ConfigError("agreement threshold lambda must lie in [0,1], got " + std::to_string(lambda));
    if (tag == CriterionTag::mutual_information && !(lambda >= 0.0))
        throw ConfigError("mutual-information threshold lambda must be >= 0");
}

double EvaluationCriterion::score(const BinVector& x, const BinVector& y) const {
    return tag == CriterionTag::agreement ? agreement_score(x, y) : mutual_information(x, y);
}

std::vector<std::uint32_t> FeatureDependenceGraph::components() const {
    std::vector<std::uint32_t> parent(vertices);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (const auto& e : edges) {
        auto a = find(e.i), b = find(e.j);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        parent[b] = a;  // the root is always the smallest id
    }
    std::vector<std::uint32_t> label(vertices);
    for (std::uint32_t v = 0; v < vertices; ++v) label[v] = find(v);
    return label;
}

PruneResult prune_layer(std::span<const BinVector> new_columns, std::span<const BinVector> historical_columns,
                        const EvaluationCriterion& criterion, int workers) {
    criterion.validate();
    const std::size_t h = historical_columns.size(), c = new_columns.size();
    PruneResult result;
    result.graph.historical = h;
    result.graph.vertices = h + c;

    std::vector<std::vector<FeatureDependenceGraph::Edge>> found(c);
    parallel_for_dynamic(std::int64_t(c), workers, [&](std::int64_t ii) {
        const auto i = std::size_t(ii);
        const BinVector& xi = new_columns[i];
        auto consider = [&](const BinVector& xj, std::size_t j) {
            const double w = criterion.tag == CriterionTag::agreement ? agreement_above(xi, xj, criterion.lambda)
                                                                      : criterion.score(xi, xj);
            if (w > criterion.lambda) found[i].push_back({std::uint32_t(j), std::uint32_t(h + i), w});
        };
        for (std::size_t j = 0; j < h; ++j) consider(historical_columns[j], j);
        for (std::size_t j = 0; j < i; ++j) consider(new_columns[j], h + j);
    });
    for (auto& f : found) result.graph.edges.insert(result.graph.edges.end(), f.begin(), f.end());

    const auto label = result.graph.components();
    result.keep.assign(c, false);
    for (std::size_t i = 0; i < c; ++i) {
        // The component root is its earliest member; keep a new feature only
        // when it is that root (a historical root means the component is covered).
        result.keep[i] = label[h + i] == h + i;
    }
    return result;
}

std::vector<std::size_t> supervised_select(std::span<const BinVector> columns, std::span<const int> labels,
                                           double beta, std::size_t k) {
    if (beta < 0) throw ConfigError("supervised selection beta must be >= 0");
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] >= 0) rows.push_back(i);
    for (const auto& c : columns)
        if (std::size_t(c.size()) != labels.size()) throw Error("supervised_select: label length mismatch");

    const std::size_t f = columns.size();
    auto feature_at = [&](std::size_t col) {
        return [&, col](std::size_t r) { return columns[col][Eigen::Index(rows[r])]; };
    };
    auto label_at = [&](std::size_t r) { return labels[rows[r]]; };

    std::vector<double> relevance(f);
    for (std::size_t i = 0; i < f; ++i) relevance[i] = plugin_mi(label_at, feature_at(i), rows.size());

    std::vector<std::size_t> chosen;
    std::vector<bool> used(f, false);
    std::vector<double> redundancy(f, 0.0);
    const std::size_t budget = std::min(k, f);
    while (chosen.size() < budget) {
        std::size_t best = f;
        double best_score = 0.0;
        for (std::size_t i = 0; i < f; ++i) {
            if (used[i]) continue;
            const double s = relevance[i] - beta * redundancy[i];
            if (best == f || s > best_score) {
                best = i;
                best_score = s;
            }
        }
        used[best] = true;
        chosen.push_back(best);
        for (std::size_t i = 0; i < f; ++i)
            if (!used[i]) redundancy[i] += plugin_mi(feature_at(i), feature_at(best), rows.size());
    }
    return chosen;
}

}  // namespace grafl
