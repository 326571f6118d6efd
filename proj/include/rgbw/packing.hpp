#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rgbw/embedder.hpp"
#include "rgbw/graph.hpp"

namespace rgbw {

/// copy[a] is the host vertex playing H0-vertex a.
using Copy = std::vector<Vertex>;

struct Packing {
  int h = 0;
  std::vector<Copy> copies;
  VertexSet uncovered;

  std::size_t size() const { return copies.size(); }
  VertexSet covered() const;
};

/// Builds a packing over V(g) from copies; uncovered is the complement.
Packing make_packing(const Graph& g, const Graph& h0, std::vector<Copy> copies);

/// Independent validator: each copy injective and an H0 embedding, copies
/// pairwise disjoint, uncovered exactly the complement. Returns "" or a reason.
std::string packing_violation(const Graph& g, const Graph& h0, const Packing& packing);

struct CopySearch {
  std::optional<Copy> copy;
  bool exhausted = false;  // true: the search space was exhausted (no copy exists)
  std::uint64_t nodes = 0;
};

/// Backtracking subgraph search for a copy of H0 that avoids `forbidden` and
/// uses `must_include` when given. H0-vertices are matched in an order that
/// maximizes already-placed neighbors; host candidates by descending degree.
CopySearch find_copy_avoiding(const Graph& g, const Graph& h0, std::optional<Vertex> must_include,
                              const VertexSet& forbidden, std::uint64_t budget = 1'000'000);

/// One pass over a seeded vertex order; each free vertex is offered a copy that
/// contains it. When every search is exhausted the packing is maximal.
Packing greedy_pack(const Graph& g, const Graph& h0, const VertexSet& forbidden, Seed seed,
                    std::uint64_t budget = 1'000'000);

/// Augmentation: remove one or two copies and re-pack their vertices together
/// with the uncovered ones into one more copy. Never decreases the count.
Packing local_search_pack(const Graph& g, const Graph& h0, const Packing& start, int rounds = 10,
                          std::uint64_t budget = 200'000);

/// Maximum packing by memoized search over vertex masks; n <= 14.
Packing exact_max_pack(const Graph& g, const Graph& h0);

/// r colorings of H0; coloring i gives class j the size h_{(i + j) mod r} of a
/// fixed proper coloring, so r disjoint copies have every class of size h.
std::vector<std::vector<int>> rotating_multipartite_coloring(const Graph& h0, int r);

struct PackParams {
  int r = 0;  // 0: chromatic number of H0
  double gamma = 0.1;
  double p = 0.5;
  double eps = 0.2;
  double xi0 = 0.05;
  bool require_min_degree = true;
  /// Stop covering B once fewer than this many B-vertices remain untried; <= 0 covers all.
  int b_cover_threshold = 0;
  /// Try the spanning-embedding route first when H0 has an independent-neighborhood vertex and h | n.
  bool spanning_route = true;
  std::uint64_t search_budget = 1'000'000;
  EngineConfig engine;
  EmbedParams embed;  // used by the spanning route and the per-column blow-up
};

struct PackReport {
  std::string route;               // "spanning" or "columns"
  bool min_degree_ok = false;
  std::size_t bad_set = 0;         // |B|
  std::size_t b_residual = 0;      // B-vertices left uncovered
  std::size_t b_copies = 0;        // copies found through B
  std::vector<int> t;              // per-row cell size after the divisibility step
  std::size_t trimmed = 0;         // vertices dropped to reach n_{i,j}
  std::vector<std::string> column_failures;
  std::string spanning_failure;
};

struct PackResult {
  Packing packing;
  PackReport report;
};

/// Almost-perfect H0-packing pipeline: partition, cover B by copies avoiding the
/// vertices outside B and the cores, divisibility adjustment, resize, and a
/// per-column blow-up of r-copy groups under the rotating coloring.
PackResult almost_perfect_pack(const Graph& gp, const Graph& h0, const PackParams& params, Seed seed);

}  // namespace rgbw
