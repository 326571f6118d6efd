#pragma once

#include <cstdint>
#include <vector>

#include "rgbw/graph.hpp"

namespace rgbw {

/// Bijection V(H) -> {1..n}; label[v] is the label of v.
struct Labeling {
  std::vector<int> label;

  static Labeling identity(Vertex n);
  /// order[t] is the vertex with label t+1.
  static Labeling from_order(const std::vector<Vertex>& order);
  std::vector<Vertex> order() const;
  bool is_bijection() const;
};

/// Proper coloring with colors 0..r-1.
struct Coloring {
  int r = 0;
  std::vector<int> color;

  std::vector<int> class_sizes() const;
};

bool is_proper(const Graph& h, const Coloring& c);

/// max |L(u) - L(v)| over edges; throws PreconditionError if L is not a bijection.
int labeling_bandwidth(const Graph& h, const Labeling& L);

struct BandwidthResult {
  int value = 0;
  Labeling labeling;
  std::uint64_t nodes = 0;  // search nodes expanded
};

/// Simple lower bound: max(ceil(Delta/2), ceil((|C|-1)/diam(C)) over components).
int bandwidth_lower_bound(const Graph& h);

/// Exact bandwidth by branch and bound over label prefixes. Among optimal
/// labelings, returns the one whose placement order is lexicographically least.
/// Throws BudgetExceeded after `budget` search nodes.
BandwidthResult exact_bandwidth(const Graph& h, std::uint64_t budget = 50'000'000);

/// Cuthill-McKee from pseudo-peripheral starts, components concatenated by
/// smallest vertex; the identity order is returned instead when it is better.
Labeling heuristic_labeling(const Graph& h);

/// Thrown when exhaustive search proves that no proper r-coloring exists.
class NoColoringExists : public Error {
 public:
  using Error::Error;
};

/// Proper r-coloring. n <= 30: exact DSATUR backtracking (NoColoringExists when
/// exhausted, BudgetExceeded when out of nodes). Larger graphs: DSATUR with
/// seeded random tie-breaking retries; BudgetExceeded if none succeeds.
Coloring proper_coloring(const Graph& h, int r, std::uint64_t budget = 10'000'000, int retries = 64);

/// Permutes colors inside each component, scanning components in label order,
/// so running class sizes stay as even as possible. The result is still proper.
Coloring balance_coloring(const Graph& h, const Labeling& L, const Coloring& c);

/// True iff N(v) is an independent set.
bool has_independent_neighborhood(const Graph& h, Vertex v);

struct WindowWitness {
  int start = 0;        // interval [start, start + window] in labels
  Vertex witness = -1;  // -1 when no qualifying vertex lies in the interval
};

struct IndependentNeighborhoodReport {
  std::vector<WindowWitness> windows;
  VertexSet witnesses;  // deduplicated, sorted
  bool all_windows_covered() const;
};

/// For every interval [a, a+window] inside [1, n] reports one vertex whose
/// neighborhood is independent (the smallest label in the interval), if any.
IndependentNeighborhoodReport find_independent_neighborhood_vertices(const Graph& h, const Labeling& L, int window);

}  // namespace rgbw
