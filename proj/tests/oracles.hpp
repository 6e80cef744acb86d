#pragma once

// Slow reference implementations used only by the tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Core>

#include "grafl/feature_matrix.hpp"
#include "grafl/graph.hpp"
#include "grafl/orbits.hpp"

namespace oracle {

using grafl::Graph;
using grafl::NodeId;

/// Adjacency matrix of the simple undirected skeleton.
inline std::vector<std::vector<bool>> skeleton_matrix(const Graph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<std::vector<bool>> a(n, std::vector<bool>(n, false));
    for (grafl::EdgeId e = 0; e < g.num_edges(); ++e) {
        const auto ep = g.endpoints(e);
        if (ep.src == ep.dst) continue;
        a[ep.src][ep.dst] = a[ep.dst][ep.src] = true;
    }
    return a;
}

struct OrbitOracle {
    grafl::OrbitCounts node;
    grafl::OrbitCounts edge;  // indexed by graph edge id
};

/// Enumerates every 2-, 3- and 4-node subset, keeps the connected induced
/// subgraphs, identifies the graphlet from edge count and degree sequence, and
/// credits each node and edge with its orbit.
inline OrbitOracle brute_force_orbits(const Graph& g) {
    const int n = int(g.num_nodes());
    const auto a = skeleton_matrix(g);
    std::map<std::pair<int, int>, std::array<std::int64_t, 12>> pair_counts;
    grafl::OrbitCounts node = grafl::OrbitCounts::Zero(n, 15);

    auto credit_edge = [&](int u, int v, int orbit) {
        if (u > v) std::swap(u, v);
        ++pair_counts[{u, v}][std::size_t(orbit)];
    };

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (a[i][j]) {
                ++node(i, 0);
                ++node(j, 0);
            }

    auto classify = [&](const std::vector<int>& s) {
        const int k = int(s.size());
        std::vector<int> deg(std::size_t(k), 0);
        int edges = 0;
        for (int x = 0; x < k; ++x)
            for (int y = x + 1; y < k; ++y)
                if (a[s[x]][s[y]]) {
                    ++deg[x];
                    ++deg[y];
                    ++edges;
                }
        // connectivity by flood fill
        std::vector<bool> seen(std::size_t(k), false);
        std::vector<int> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (int y = 0; y < k; ++y)
                if (!seen[y] && a[s[x]][s[y]]) {
                    seen[y] = true;
                    stack.push_back(y);
                }
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end()) return;

        const int maxdeg = *std::max_element(deg.begin(), deg.end());
        for (int x = 0; x < k; ++x) {
            int orbit = -1;
            const int d = deg[x];
            if (k == 3) {
                orbit = edges == 3 ? 3 : (d == 1 ? 1 : 2);
            } else if (edges == 3) {
                if (maxdeg == 3) orbit = d == 3 ? 7 : 6;
                else orbit = d == 1 ? 4 : 5;
            } else if (edges == 4) {
                if (maxdeg == 2) orbit = 8;
                else orbit = d == 1 ? 9 : d == 2 ? 10 : 11;
            } else if (edges == 5) {
                orbit = d == 2 ? 12 : 13;
            } else {
                orbit = 14;
            }
            ++node(s[x], orbit);
        }
        for (int x = 0; x < k; ++x)
            for (int y = x + 1; y < k; ++y) {
                if (!a[s[x]][s[y]]) continue;
                const int lo = std::min(deg[x], deg[y]), hi = std::max(deg[x], deg[y]);
                int orbit = -1;
                if (k == 3) {
                    orbit = edges == 3 ? 1 : 0;
                } else if (edges == 3) {
                    if (maxdeg == 3) orbit = 4;
                    else orbit = lo == 1 ? 2 : 3;
                } else if (edges == 4) {
                    if (maxdeg == 2) orbit = 5;
                    else if (lo == 1) orbit = 6;
                    else if (hi == 2) orbit = 7;
                    else orbit = 8;
                } else if (edges == 5) {
                    orbit = lo == 2 ? 9 : 10;
                } else {
                    orbit = 11;
                }
                credit_edge(s[x], s[y], orbit);
            }
    };

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                classify({i, j, k});
                for (int l = k + 1; l < n; ++l) classify({i, j, k, l});
            }

    grafl::OrbitCounts edge = grafl::OrbitCounts::Zero(Eigen::Index(g.num_edges()), 12);
    for (grafl::EdgeId e = 0; e < g.num_edges(); ++e) {
        auto ep = g.endpoints(e);
        if (ep.src == ep.dst) continue;
        const int u = int(std::min(ep.src, ep.dst)), v = int(std::max(ep.src, ep.dst));
        auto it = pair_counts.find({u, v});
        if (it == pair_counts.end()) continue;
        for (int o = 0; o < 12; ++o) edge(e, o) = it->second[std::size_t(o)];
    }
    return {node, edge};
}

/// Random graph with each pair present with probability p (and optional
/// self-loops / reverse arcs when directed).
inline Graph random_graph(std::size_t n, double p, std::uint64_t seed, bool directed = false, double loop_p = 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Graph::Endpoints> eps;
    for (NodeId a = 0; a < n; ++a) {
        if (u(rng) < loop_p) eps.push_back({a, a});
        for (NodeId b = 0; b < n; ++b) {
            if (a == b || (!directed && b < a)) continue;
            if (u(rng) < p) eps.push_back({a, b});
        }
    }
    return Graph::from_edges(n, eps, directed);
}

/// Plug-in mutual information from an explicit joint histogram.
template <typename X, typename Y>
double histogram_mi(const X& x, const Y& y, std::size_t n) {
    std::map<std::pair<long, long>, double> joint;
    std::map<long, double> px, py;
    for (std::size_t i = 0; i < n; ++i) {
        joint[{long(x[i]), long(y[i])}] += 1;
        px[long(x[i])] += 1;
        py[long(y[i])] += 1;
    }
    double mi = 0;
    for (const auto& [k, c] : joint) mi += c / double(n) * std::log((c * double(n)) / (px[k.first] * py[k.second]));
    return mi;
}

/// Neighbor set of an element computed straight from the definition.
inline std::vector<std::uint32_t> naive_neighbors(const Graph& g, grafl::GraphElement e, grafl::NeighborhoodSelector sel) {
    using grafl::Direction;
    auto node_step = [&](NodeId v, Direction d) {
        std::set<std::uint32_t> out;
        for (grafl::EdgeId k = 0; k < g.num_edges(); ++k) {
            const auto ep = g.endpoints(k);
            const bool fwd = ep.src == v, bwd = ep.dst == v;
            if (!g.directed()) {
                if (fwd) out.insert(ep.dst);
                if (bwd) out.insert(ep.src);
                continue;
            }
            if (fwd && d != Direction::in) out.insert(ep.dst);
            if (bwd && d != Direction::out) out.insert(ep.src);
        }
        return out;
    };
    auto edge_step = [&](std::uint32_t f, Direction d) {
        std::set<std::uint32_t> out;
        const auto ep = g.endpoints(f);
        for (grafl::EdgeId k = 0; k < g.num_edges(); ++k) {
            const auto q = g.endpoints(k);
            if (q.src == q.dst) continue;
            auto touches = [&](NodeId x) { return x == ep.src || x == ep.dst; };
            bool hit;
            if (!g.directed())
                hit = touches(q.src) || touches(q.dst);
            else if (d == Direction::out)
                hit = touches(q.src);
            else if (d == Direction::in)
                hit = touches(q.dst);
            else
                hit = touches(q.src) || touches(q.dst);
            if (hit) out.insert(k);
        }
        return out;
    };
    std::set<std::uint32_t> frontier{e.index}, reached{e.index};
    for (int h = 0; h < sel.hops; ++h) {
        std::set<std::uint32_t> next;
        for (auto x : frontier)
            for (auto y : e.kind == grafl::ElementKind::node ? node_step(x, sel.direction) : edge_step(x, sel.direction))
                if (reached.insert(y).second) next.insert(y);
        frontier = next;
    }
    reached.erase(e.index);
    return {reached.begin(), reached.end()};
}

}  // namespace oracle
