#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace grafl {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class ElementKind { node, edge };

/// A node or an edge of a graph, the unit a feature value attaches to.
struct GraphElement {
    ElementKind kind = ElementKind::node;
    std::uint32_t index = 0;

    friend bool operator==(const GraphElement&, const GraphElement&) = default;
};

enum class Direction { out, in, all };

/// Which related elements an operator aggregates over: the in-, out- or
/// all-direction neighbors within `hops` steps.
struct NeighborhoodSelector {
    Direction direction = Direction::all;
    int hops = 1;

    friend bool operator==(const NeighborhoodSelector&, const NeighborhoodSelector&) = default;
};

/// Named real-valued columns keyed by element id.
struct AttributeTable {
    std::vector<std::string> names;
    std::vector<Eigen::VectorXd> columns;

    bool empty() const { return names.empty(); }
    const Eigen::VectorXd* find(const std::string& name) const;
};

/// Compressed sparse rows: for row v, targets[offsets[v]..offsets[v+1]) are
/// the adjacent nodes (ascending) and edges[...] the matching edge ids.
struct Adjacency {
    std::vector<std::size_t> offsets;
    std::vector<NodeId> targets;
    std::vector<EdgeId> edges;

    std::span<const NodeId> row(NodeId v) const {
        return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
    }
    std::span<const EdgeId> row_edges(NodeId v) const {
        return {edges.data() + offsets[v], edges.data() + offsets[v + 1]};
    }
    std::size_t degree(NodeId v) const { return offsets[v + 1] - offsets[v]; }
};

/// Immutable directed (optionally weighted, attributed) graph in dual CSR
/// form. Undirected inputs are stored as two arcs sharing one edge id, so
/// out- and in-adjacency coincide; a self-loop is a single arc.
class Graph {
public:
    struct Endpoints {
        NodeId src;
        NodeId dst;

        friend bool operator==(const Endpoints&, const Endpoints&) = default;
    };

    Graph() = default;

    /// Builds a graph over nodes 0..n-1. Duplicate pairs are collapsed into one
    /// edge with summed weight; for undirected graphs (a,b) and (b,a) are the
    /// same pair. Edge ids follow first appearance.
    static Graph from_edges(std::size_t n, std::span<const Endpoints> edges, bool directed,
                            std::span<const double> weights = {});

    std::size_t num_nodes() const { return n_; }
    std::size_t num_edges() const { return endpoints_.size(); }
    std::size_t num_elements(ElementKind kind) const {
        return kind == ElementKind::node ? num_nodes() : num_edges();
    }
    bool directed() const { return directed_; }
    bool weighted() const { return !weights_.empty(); }

    const Adjacency& out_adjacency() const { return out_; }
    const Adjacency& in_adjacency() const { return in_; }
    std::span<const NodeId> out_neighbors(NodeId v) const { return out_.row(v); }
    std::span<const NodeId> in_neighbors(NodeId v) const { return in_.row(v); }
    std::span<const EdgeId> out_edges(NodeId v) const { return out_.row_edges(v); }
    std::span<const EdgeId> in_edges(NodeId v) const { return in_.row_edges(v); }
    std::size_t out_degree(NodeId v) const { return out_.degree(v); }
    std::size_t in_degree(NodeId v) const { return in_.degree(v); }

    Endpoints endpoints(EdgeId e) const { return endpoints_[e]; }
    double weight(EdgeId e) const { return weights_.empty() ? 1.0 : weights_[e]; }
    std::span<const double> weights() const { return weights_; }

    /// Edge id of the (src,dst) pair, if present. Undirected lookups ignore orientation.
    std::optional<EdgeId> find_edge(NodeId src, NodeId dst) const;

    /// Original token of each node when loaded from text; empty otherwise.
    const std::vector<std::string>& node_names() const { return names_; }
    std::optional<NodeId> find_node(const std::string& name) const;
    void set_node_names(std::vector<std::string> names);

    const AttributeTable& node_attributes() const { return node_attrs_; }
    const AttributeTable& edge_attributes() const { return edge_attrs_; }
    void set_node_attributes(AttributeTable attrs);
    void set_edge_attributes(AttributeTable attrs);

private:
    std::size_t n_ = 0;
    bool directed_ = true;
    std::vector<Endpoints> endpoints_;
    std::vector<double> weights_;
    Adjacency out_;
    Adjacency in_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> name_index_;
    AttributeTable node_attrs_;
    AttributeTable edge_attrs_;
};

/// Parses `src dst [weight]` lines; `#` lines and blank lines are skipped.
/// Node tokens are re-indexed densely in first-appearance order.
Graph read_edge_list(std::istream& in, bool directed, bool weighted);
Graph load_edge_list(const std::string& path, bool directed, bool weighted);

/// Attribute files: a header of column names, then `node_id v1 v2 ...` (or
/// `src dst v1 ...` for edges). Elements without a row get 0.
void load_node_attributes(Graph& g, const std::string& path);
void load_edge_attributes(Graph& g, const std::string& path);
void read_node_attributes(Graph& g, std::istream& in);
void read_edge_attributes(Graph& g, std::istream& in);

/// Elements within `sel.hops` steps of `e` in the chosen direction, excluding
/// `e` itself, ascending by id. Edge neighborhoods expand in the line graph:
/// out-neighbors of (v,u) are arcs leaving v or u, in-neighbors arcs entering
/// v or u. Self-loops never appear in edge neighborhoods.
std::vector<std::uint32_t> neighbors(const Graph& g, GraphElement e, NeighborhoodSelector sel);

/// Neighbor lists for every element of one kind under one selector, CSR form.
struct NeighborhoodIndex {
    std::vector<std::size_t> offsets;
    std::vector<std::uint32_t> ids;

    std::size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }
    std::span<const std::uint32_t> operator[](std::size_t i) const {
        return {ids.data() + offsets[i], ids.data() + offsets[i + 1]};
    }
};

NeighborhoodIndex build_neighborhoods(const Graph& g, ElementKind kind, NeighborhoodSelector sel,
                                      int workers = 1);

/// Simple undirected view without self-loops or parallel edges. `edge_of`
/// maps every graph edge to its skeleton edge (or -1 for self-loops).
struct Skeleton {
    std::size_t n = 0;
    std::vector<std::size_t> offsets;
    std::vector<NodeId> adj;        // ascending per row
    std::vector<std::uint32_t> inc; // skeleton edge id per adj slot
    std::vector<Graph::Endpoints> edges;  // src < dst
    std::vector<std::int64_t> edge_of;

    std::span<const NodeId> row(NodeId v) const {
        return {adj.data() + offsets[v], adj.data() + offsets[v + 1]};
    }
    std::span<const std::uint32_t> row_edges(NodeId v) const {
        return {inc.data() + offsets[v], inc.data() + offsets[v + 1]};
    }
    std::size_t degree(NodeId v) const { return offsets[v + 1] - offsets[v]; }
    bool adjacent(NodeId a, NodeId b) const;
};

Skeleton build_skeleton(const Graph& g);

/// Core number of every node on the undirected skeleton.
std::vector<std::uint32_t> kcore_numbers(const Graph& g);

}  // namespace grafl
