#pragma once

#include <utility>

#include "rgbw/graph.hpp"

namespace rgbw {

struct AdversaryReport {
  std::size_t deleted_edge_count = 0;
  int realized_min_degree = 0;
  VertexSet blocked_set;
  /// The degree floor the construction aims for; informational, never asserted.
  int floor_target = 0;
};

struct AdversaryResult {
  Graph graph;
  AdversaryReport report;
};

/// Deletes every edge inside N(v); v ends up in no triangle.
AdversaryResult wipe_neighborhood(const Graph& g, Vertex v);

/// Order in which triangles through blocked vertices are enumerated.
/// The deletion set does not depend on it; the option exists so that can be tested.
enum class TriangleOrder { Forward, Reverse };

/// Blocked-set construction: |X| = floor(eps / (3 p^2)) vertices sampled by seed,
/// E(X) deleted, E(X, W) deleted for W = {v not in X : deg(v, X) > 2|X|p},
/// then yz deleted for every triangle xyz with x in X and y, z outside X and W.
AdversaryResult triangle_blocker(const Graph& g, double p, double eps, Seed seed,
                                 TriangleOrder order = TriangleOrder::Forward);

/// Size of the blocked set triangle_blocker would use.
int blocked_set_size(double p, double eps);

/// Greedy deletion in seeded random edge order, keeping every degree >= floor.
AdversaryResult prune_to_floor(const Graph& g, int floor, Seed seed);

}  // namespace rgbw
