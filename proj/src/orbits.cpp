#include "grafl/orbits.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "grafl/parallel.hpp"

// Orbit counts are obtained without enumerating 4-node subgraphs: for every
// element we accumulate a handful of cheap local sums (paths, triangles and
// the degrees around them) that are linear combinations of orbit counts, then
// solve the triangular system using the exact K4 counts. Only K4s are
// enumerated explicitly.

namespace grafl {

namespace {

using i64 = std::int64_t;

std::vector<i64> edge_triangles(const Skeleton& s, int workers) {
    std::vector<i64> tri(s.edges.size(), 0);
    parallel_for(std::int64_t(s.edges.size()), workers, [&](std::int64_t k) {
        auto a = s.row(s.edges[std::size_t(k)].src), b = s.row(s.edges[std::size_t(k)].dst);
        i64 c = 0;
        for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
            if (a[i] == b[j]) {
                ++c;
                ++i;
                ++j;
            } else if (a[i] < b[j]) {
                ++i;
            } else {
                ++j;
            }
        }
        tri[std::size_t(k)] = c;
    });
    return tri;
}

std::int64_t edge_between(const Skeleton& s, NodeId a, NodeId b) {
    auto r = s.row(a);
    auto it = std::lower_bound(r.begin(), r.end(), b);
    return s.row_edges(a)[std::size_t(it - r.begin())];
}

/// Calls visit(a, b, c, d) once per K4 with a > b > c and a > b > d.
template <typename Visit>
void for_each_k4(const Skeleton& s, Visit&& visit) {
    std::vector<NodeId> common;
    for (NodeId x = 0; x < s.n; ++x) {
        for (NodeId y : s.row(x)) {
            if (y >= x) break;
            common.clear();
            for (NodeId z : s.row(y)) {
                if (z >= y) break;
                if (s.adjacent(x, z)) common.push_back(z);
            }
            for (std::size_t i = 0; i < common.size(); ++i)
                for (std::size_t j = i + 1; j < common.size(); ++j)
                    if (s.adjacent(common[i], common[j])) visit(x, y, common[i], common[j]);
        }
    }
}

/// Per-thread scratch counting 2-paths from the current node.
struct PathCounter {
    explicit PathCounter(std::size_t n) : count(n, 0) {}
    void reset() {
        for (NodeId t : touched) count[t] = 0;
        touched.clear();
    }
    void bump(NodeId z) {
        if (count[z]++ == 0) touched.push_back(z);
    }
    std::vector<i64> count;
    std::vector<NodeId> touched;
};

}  // namespace

OrbitCounts node_orbit_counts(const Graph& g, int workers) {
    const Skeleton s = build_skeleton(g);
    const std::size_t n = s.n;
    OrbitCounts out = OrbitCounts::Zero(Eigen::Index(n), kNodeOrbits);
    if (n == 0) return out;

    const std::vector<i64> tri = edge_triangles(s, workers);
    std::vector<i64> k4(n, 0);
    for_each_k4(s, [&](NodeId a, NodeId b, NodeId c, NodeId d) {
        ++k4[a];
        ++k4[b];
        ++k4[c];
        ++k4[d];
    });

    auto deg = [&](NodeId v) { return i64(s.degree(v)); };
    const int nthreads = std::max(1, workers);

#pragma omp parallel num_threads(nthreads) if (nthreads > 1)
    {
        PathCounter common(n);
#pragma omp for schedule(dynamic, 256)
        for (std::int64_t xi = 0; xi < std::int64_t(n); ++xi) {
            const NodeId x = NodeId(xi);
            common.reset();
            i64 f_12_14 = 0, f_10_13 = 0, f_13_14 = 0, f_11_13 = 0, f_7_11 = 0, f_5_8 = 0;
            i64 f_6_9 = 0, f_9_12 = 0, f_4_8 = 0, f_8_12 = 0;
            i64 o1 = 0, o2 = 0, o3 = 0;
            const i64 f_14 = k4[x];
            auto nx = s.row(x);
            auto ex = s.row_edges(x);

            // x as the middle node of a path or a triangle corner.
            for (std::size_t i = 0; i < nx.size(); ++i) {
                const NodeId y = nx[i];
                const auto ey = ex[i];
                auto ny = s.row(y);
                auto eyz = s.row_edges(y);
                for (std::size_t j = 0; j < ny.size(); ++j) {
                    const NodeId z = ny[j];
                    const auto ez = eyz[j];
                    if (s.adjacent(x, z)) {
                        if (z < y) {
                            f_12_14 += tri[ez] - 1;
                            f_10_13 += (deg(y) - 1 - tri[ez]) + (deg(z) - 1 - tri[ez]);
                        }
                    } else if (z != x) {
                        common.bump(z);
                    }
                }
                for (std::size_t j = i + 1; j < nx.size(); ++j) {
                    const NodeId z = nx[j];
                    const auto ez = ex[j];
                    if (s.adjacent(y, z)) {
                        ++o3;
                        f_13_14 += (tri[ey] - 1) + (tri[ez] - 1);
                        f_11_13 += (deg(x) - 1 - tri[ey]) + (deg(x) - 1 - tri[ez]);
                    } else {
                        ++o2;
                        f_7_11 += (deg(x) - 1 - tri[ey] - 1) + (deg(x) - 1 - tri[ez] - 1);
                        f_5_8 += (deg(y) - 1 - tri[ey]) + (deg(z) - 1 - tri[ez]);
                    }
                }
            }
            // x as the end of an induced 2-path x-y-z.
            for (std::size_t i = 0; i < nx.size(); ++i) {
                const NodeId y = nx[i];
                const auto ey = ex[i];
                auto ny = s.row(y);
                auto eyz = s.row_edges(y);
                for (std::size_t j = 0; j < ny.size(); ++j) {
                    const NodeId z = ny[j];
                    if (z == x || s.adjacent(x, z)) continue;
                    const auto ez = eyz[j];
                    ++o1;
                    f_6_9 += deg(y) - 1 - tri[ey] - 1;
                    f_9_12 += tri[ez];
                    f_4_8 += deg(z) - 1 - tri[ez];
                    f_8_12 += common.count[z] - 1;
                }
            }

            auto row = out.row(xi);
            row(0) = deg(x);
            row(1) = o1;
            row(2) = o2;
            row(3) = o3;
            row(14) = f_14;
            row(13) = (f_13_14 - 6 * f_14) / 2;
            row(12) = f_12_14 - 3 * f_14;
            row(11) = (f_11_13 - f_13_14 + 6 * f_14) / 2;
            row(10) = f_10_13 - f_13_14 + 6 * f_14;
            row(9) = (f_9_12 - 2 * f_12_14 + 6 * f_14) / 2;
            row(8) = (f_8_12 - 2 * f_12_14 + 6 * f_14) / 2;
            row(7) = (f_13_14 + f_7_11 - f_11_13 - 6 * f_14) / 6;
            row(6) = (2 * f_12_14 + f_6_9 - f_9_12 - 6 * f_14) / 2;
            row(5) = 2 * f_12_14 + f_5_8 - f_8_12 - 6 * f_14;
            row(4) = 2 * f_12_14 + f_4_8 - f_8_12 - 6 * f_14;
        }
    }
    return out;
}

OrbitCounts edge_orbit_counts(const Graph& g, int workers) {
    const Skeleton s = build_skeleton(g);
    const std::size_t n = s.n, m = s.edges.size();
    OrbitCounts out = OrbitCounts::Zero(Eigen::Index(g.num_edges()), kEdgeOrbits);
    if (m == 0) return out;

    const std::vector<i64> tri = edge_triangles(s, workers);
    std::vector<i64> k4(m, 0);
    for_each_k4(s, [&](NodeId a, NodeId b, NodeId c, NodeId d) {
        ++k4[edge_between(s, a, b)];
        ++k4[edge_between(s, a, c)];
        ++k4[edge_between(s, a, d)];
        ++k4[edge_between(s, b, c)];
        ++k4[edge_between(s, b, d)];
        ++k4[edge_between(s, c, d)];
    });

    // Each skeleton edge is visited once from each endpoint; the two
    // orientations accumulate into separate rows so workers never collide.
    using Acc = Eigen::Matrix<i64, Eigen::Dynamic, kEdgeOrbits, Eigen::RowMajor>;
    Acc from_low = Acc::Zero(Eigen::Index(m), kEdgeOrbits);
    Acc from_high = Acc::Zero(Eigen::Index(m), kEdgeOrbits);
    auto deg = [&](NodeId v) { return i64(s.degree(v)); };
    const int nthreads = std::max(1, workers);

#pragma omp parallel num_threads(nthreads) if (nthreads > 1)
    {
        PathCounter common(n);
#pragma omp for schedule(dynamic, 256)
        for (std::int64_t xi = 0; xi < std::int64_t(n); ++xi) {
            const NodeId x = NodeId(xi);
            common.reset();
            auto nx = s.row(x);
            auto ex = s.row_edges(x);
            for (NodeId y : nx)
                for (NodeId z : s.row(y))
                    if (z != x) common.bump(z);

            for (std::size_t i = 0; i < nx.size(); ++i) {
                const NodeId y = nx[i];
                const auto e = ex[i];
                auto acc = (x < y ? from_low : from_high).row(e);
                for (std::size_t j = 0; j < nx.size(); ++j) {
                    const NodeId z = nx[j];
                    if (z == y || !s.adjacent(y, z)) continue;
                    const auto xz = ex[j];
                    if (x < y) {
                        acc(1) += 1;
                        acc(10) += tri[e] - 1;
                        acc(7) += deg(z) - 2;
                    }
                    acc(9) += tri[xz] - 1;
                    acc(8) += deg(x) - 2;
                }
                auto ny = s.row(y);
                auto ey = s.row_edges(y);
                for (std::size_t j = 0; j < ny.size(); ++j) {
                    const NodeId z = ny[j];
                    if (z == x || s.adjacent(x, z)) continue;
                    const auto yz = ey[j];
                    acc(0) += 1;
                    acc(6) += tri[yz];
                    acc(5) += common.count[z] - 1;
                    acc(4) += deg(y) - 2;
                    acc(3) += deg(x) - 1;
                    acc(2) += deg(z) - 1;
                }
            }
        }
    }

    Acc sk = from_low + from_high;
    for (std::size_t k = 0; k < m; ++k) {
        auto o = sk.row(Eigen::Index(k));
        o(11) = k4[k];
        o(10) = (o(10) - 2 * o(11)) / 2;
        o(9) = o(9) - 4 * o(11);
        o(8) = o(8) - o(9) - 4 * o(10) - 4 * o(11);
        o(7) = o(7) - o(9) - 2 * o(11);
        o(6) = (o(6) - o(9)) / 2;
        o(5) = (o(5) - o(9)) / 2;
        o(4) = (o(4) - 2 * o(6) - o(8) - o(9)) / 2;
        o(3) = (o(3) - 2 * o(5) - o(8) - o(9)) / 2;
        o(2) = o(2) - 2 * o(5) - 2 * o(6) - o(9);
    }
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const auto k = s.edge_of[e];
        if (k >= 0) out.row(e) = sk.row(k);
    }
    return out;
}

}  // namespace grafl
