#include "grafl/diffusion.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SparseCore>

#include "grafl/error.hpp"
#include "grafl/relational.hpp"

namespace grafl {

namespace {

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Neighbor lists the recurrence runs over, one row per element.
std::vector<std::vector<std::uint32_t>> diffusion_neighbors(FeatureEvaluator& eval, DiffusionMethod method) {
    const Graph& g = eval.graph();
    std::vector<std::vector<std::uint32_t>> rows;
    if (eval.kind() == ElementKind::edge) {
        const NeighborhoodIndex& nb = eval.neighborhood({Direction::all, 1});
        rows.resize(nb.size());
        for (std::size_t i = 0; i < nb.size(); ++i) rows[i].assign(nb[i].begin(), nb[i].end());
        return rows;
    }
    rows.resize(g.num_nodes());
    if (method == DiffusionMethod::row_stochastic) {
        for (NodeId v = 0; v < g.num_nodes(); ++v) rows[v].assign(g.out_neighbors(v).begin(), g.out_neighbors(v).end());
    } else {
        const Skeleton s = build_skeleton(g);
        for (NodeId v = 0; v < g.num_nodes(); ++v) rows[v].assign(s.row(v).begin(), s.row(v).end());
    }
    return rows;
}

/// D^-1/2 A D^-1/2 over the neighbor lists; rows of isolated elements stay zero.
SparseRows normalized_adjacency(const std::vector<std::vector<std::uint32_t>>& rows) {
    const auto n = Eigen::Index(rows.size());
    std::vector<Eigen::Triplet<double>> trips;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = rows[std::size_t(i)];
        const double di = double(r.size());
        for (auto j : r) trips.emplace_back(i, Eigen::Index(j), 1.0 / std::sqrt(di * double(rows[j].size())));
    }
    SparseRows m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

/// Neighbor mean of every row, taken as the first neighbor's value plus the
/// mean offset of the others so that equal values average to themselves.
Eigen::MatrixXd neighbor_mean(const std::vector<std::vector<std::uint32_t>>& rows, const Eigen::MatrixXd& x) {
    Eigen::MatrixXd out(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const auto& r = rows[std::size_t(i)];
        if (r.empty()) {
            out.row(i) = x.row(i);
            continue;
        }
        const auto base = x.row(Eigen::Index(r.front()));
        Eigen::RowVectorXd offset = Eigen::RowVectorXd::Zero(x.cols());
        for (std::size_t k = 1; k < r.size(); ++k) offset += x.row(Eigen::Index(r[k])) - base;
        out.row(i) = base + offset / double(r.size());
    }
    return out;
}

}  // namespace

Eigen::MatrixXd diffuse_values(FeatureEvaluator& eval, const Eigen::MatrixXd& x, const DiffusionConfig& cfg) {
    cfg.validate();
    if (std::size_t(x.rows()) != eval.graph().num_elements(eval.kind()))
        throw Error("diffusion input has " + std::to_string(x.rows()) + " rows, expected " +
                    std::to_string(eval.graph().num_elements(eval.kind())));
    const auto rows = diffusion_neighbors(eval, cfg.method);
    SparseRows p;
    if (cfg.method == DiffusionMethod::laplacian) p = normalized_adjacency(rows);

    Eigen::MatrixXd cur = x;
    double change = std::numeric_limits<double>::infinity();
    for (int t = 0; t < cfg.iterations; ++t) {
        if (change <= cfg.tolerance) break;
        Eigen::MatrixXd next;
        if (cfg.method == DiffusionMethod::row_stochastic) {
            next = neighbor_mean(rows, cur);
        } else {
            const Eigen::MatrixXd lap = cur - p * cur;
            next = (1.0 - cfg.theta) * lap + cfg.theta * x;
        }
        change = cur.size() ? (next - cur).cwiseAbs().maxCoeff() : 0.0;
        cur = std::move(next);
    }
    return cur;
}

Eigen::VectorXd diffuse_values(FeatureEvaluator& eval, const Eigen::VectorXd& x, const DiffusionConfig& cfg) {
    return diffuse_values(eval, Eigen::MatrixXd(x), cfg).col(0);
}

FeatureMatrix diffuse(FeatureEvaluator& eval, const FeatureMatrix& x, const DiffusionConfig& cfg) {
    cfg.validate();
    FeatureMatrix out(x.kind(), x.rows());
    std::vector<BinVector> smoothed;
    smoothed.reserve(x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) {
        const Eigen::VectorXd v = diffuse_values(eval, Eigen::VectorXd(x.column(j).cast<double>()), cfg);
        smoothed.push_back(log_bin_transform(v, x.definition(j).alpha));
    }
    if (cfg.attach == DiffusionAttach::append)
        for (std::size_t j = 0; j < x.cols(); ++j) out.add_column(x.definition(j), x.column(j), x.layer(j));
    for (std::size_t j = 0; j < x.cols(); ++j) {
        RelationalFunction f = x.definition(j);
        f.attach_diffusion(cfg);
        f.bins = bin_count(smoothed[j]);
        out.add_column(std::move(f), std::move(smoothed[j]), x.layer(j));
    }
    return out;
}

}  // namespace grafl
