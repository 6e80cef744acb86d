#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "grafl/graph.hpp"

namespace grafl {

/// Rows are elements, columns orbit ids.
using OrbitCounts = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr int kNodeOrbits = 15;
inline constexpr int kEdgeOrbits = 12;

/// Node orbits of connected graphlets on 2-4 nodes:
///   0 edge; 1 path end, 2 path middle; 3 triangle;
///   4 P4 end, 5 P4 inner; 6 star leaf, 7 star center; 8 4-cycle;
///   9 paw tail, 10 paw triangle (degree 2), 11 paw center;
///   12 diamond degree-2, 13 diamond degree-3; 14 K4.
OrbitCounts node_orbit_counts(const Graph& g, int workers = 1);

/// Edge orbits of connected graphlets on 3-4 nodes (the single-edge
/// graphlet is omitted; every edge would count 1):
///   0 path; 1 triangle; 2 P4 end, 3 P4 middle; 4 star; 5 4-cycle;
///   6 paw tail, 7 paw triangle edge away from the center, 8 paw triangle
///   edge at the center; 9 diamond rim, 10 diamond diagonal; 11 K4.
/// Parallel arcs of a directed graph share their skeleton edge's counts;
/// self-loops count zero everywhere.
OrbitCounts edge_orbit_counts(const Graph& g, int workers = 1);

}  // namespace grafl
