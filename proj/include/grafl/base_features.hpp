#pragma once

#include <map>
#include <vector>

#include <Eigen/Core>

#include "grafl/function.hpp"
#include "grafl/graph.hpp"

namespace grafl {

struct BaseColumn {
    BaseFeatureDescriptor descriptor;
    Eigen::VectorXd values;
};

/// Which base families to derive.
struct BaseFamilies {
    bool degree = true;
    bool kcore = true;
    bool egonet = true;
    bool orbit = true;
    bool attributes = true;

    friend bool operator==(const BaseFamilies&, const BaseFamilies&) = default;
};

/// In/out/total degree (plus weighted variants on weighted graphs) and the
/// k-core number of every node.
std::vector<BaseColumn> node_degree_features(const Graph& g);

/// For each edge (v,u) and each combiner in {+, x}: out.out, in.in, in.out,
/// out.in and total.total, where total_v = out_v (combiner) in_v. Weighted
/// variants follow on weighted graphs, then the edge k-core (min of endpoints).
std::vector<BaseColumn> edge_degree_features(const Graph& g);

/// Five egonet counts: within arcs into the ego center, within arcs out of
/// the center, within arcs among neighbors, external arcs leaving and
/// external arcs entering the egonet. An edge's egonet is the union of its
/// endpoints' egonets with both endpoints as the center. Self-loops are
/// ignored; on undirected graphs the among-neighbor count is per edge.
std::vector<BaseColumn> egonet_features(const Graph& g, ElementKind kind, int workers = 1);

/// Exact 2-4 node graphlet orbit counts on the undirected skeleton: 15 node
/// orbits or 12 edge orbits (see orbits.hpp for numbering).
std::vector<BaseColumn> orbit_features(const Graph& g, ElementKind kind, int workers = 1);

/// Attribute lifting. Same-kind attributes are copied verbatim; edge
/// attributes become node features by aggregating over incident edges, node
/// attributes become edge features by aggregating over the two endpoints.
/// Only the aggregating operators (hadamard, mean, sum, max) lift.
std::vector<BaseColumn> lift_attributes(const Graph& g, ElementKind kind,
                                        const std::vector<RelationalOperator>& ops);

/// All enabled base features in a fixed order: degree, kcore, egonet, orbit,
/// attributes.
std::vector<BaseColumn> base_features(const Graph& g, ElementKind kind, const BaseFamilies& families,
                                      const std::vector<RelationalOperator>& lift_ops, int workers = 1);

/// Lazily computes and memoizes base columns of one graph by descriptor.
class BaseFeatureCache {
public:
    BaseFeatureCache(const Graph& g, ElementKind kind, int workers = 1)
        : g_(g), kind_(kind), workers_(workers) {}

    /// Throws TransferError when the graph cannot provide the descriptor.
    const Eigen::VectorXd& get(const BaseFeatureDescriptor& d);

private:
    void load_family(BaseFamily family, const BaseFeatureDescriptor& d);

    const Graph& g_;
    ElementKind kind_;
    int workers_;
    std::map<std::pair<BaseFamily, std::string>, Eigen::VectorXd> cache_;
    std::vector<BaseFamily> loaded_;
};

}  // namespace grafl
