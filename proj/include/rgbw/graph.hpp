#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "rgbw/bitset.hpp"
#include "rgbw/common.hpp"

namespace rgbw {

using Edge = std::pair<Vertex, Vertex>;

/// Immutable undirected simple graph in compressed sparse row form.
/// Neighbor lists are strictly increasing.
class Graph {
 public:
  Graph() = default;
  /// Edgeless graph on n vertices.
  explicit Graph(Vertex n);

  /// Builds from an edge list. Loops are rejected; duplicates (in either
  /// orientation) are merged.
  static Graph from_edges(Vertex n, std::vector<Edge> edges);

  Vertex n() const { return n_; }
  std::size_t edge_count() const { return targets_.size() / 2; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  int degree(Vertex v) const { return static_cast<int>(offsets_[v + 1] - offsets_[v]); }
  bool adjacent(Vertex u, Vertex v) const;

  /// 0 for the empty graph.
  int min_degree() const;
  int max_degree() const;

  /// All edges (u, v) with u < v in lexicographic order.
  std::vector<Edge> edges() const;

  /// Row bitsets of the adjacency matrix.
  std::vector<Bitset> adjacency_bits() const;

  bool operator==(const Graph& o) const = default;

 private:
  Vertex n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> targets_;
};

/// Copy of g without the listed edges (orientation ignored; absent edges ignored).
Graph remove_edges(const Graph& g, const std::vector<Edge>& drop);

/// Subgraph induced on `keep`, relabeled 0..|keep|-1 in the order of `keep`.
Graph induced_subgraph(const Graph& g, const VertexSet& keep);

/// Exhaustive structural check: symmetry, no loops, strictly increasing lists.
bool is_well_formed(const Graph& g);

// ---- generators ----

Graph generate_gnp(Vertex n, double p, Seed seed);
Graph power_of_cycle(Vertex n, int r);

enum class BackboneKind { C, K };
/// Grid graph on [k] x [r]; vertex (i, j) (1-based) is (i-1)*r + (j-1).
Graph backbone_graph(int k, int r, BackboneKind kind);
inline Vertex grid_index(int i, int j, int r) { return static_cast<Vertex>(i * r + j); }

Graph complete_multipartite(const std::vector<int>& sizes);
Graph complete_graph(Vertex n);
Graph path_graph(Vertex n);
Graph cycle_graph(Vertex n);
Graph grid_graph(int rows, int cols);

struct TwoCliques {
  Graph graph;
  Vertex clique_size = 0;  // each clique
  Vertex overlap = 0;
  Vertex total = 0;        // realized vertex count
  int min_degree = 0;
};
/// Two cliques of size round((1/2+gamma)n) sharing round(2 gamma n) vertices.
TwoCliques two_cliques(Vertex n, double gamma);

/// t disjoint copies; copy c occupies [c*h, (c+1)*h).
Graph disjoint_copies(const Graph& h0, int t);
/// Vertex-disjoint union, second graph shifted by a.n().
Graph disjoint_union(const Graph& a, const Graph& b);

/// Uniform-ish random d-regular graph by the pairing model with restarts.
Graph random_regular(Vertex n, int d, Seed seed);
/// Random tree with maximum degree at most max_deg (random attachment).
Graph random_tree(Vertex n, int max_deg, Seed seed);

// ---- statistics ----

struct SetStats {
  std::size_t e_X = 0;    // edges inside X
  std::size_t e_XY = 0;   // ordered pairs (x, y), x in X, y in Y, xy an edge
  double d_XY = 0.0;
};
/// Throws PreconditionError when X or Y is empty (density undefined).
SetStats set_stats(const Graph& g, const VertexSet& X, const VertexSet& Y);
std::size_t edges_inside(const Graph& g, const VertexSet& X);
std::size_t edges_between(const Graph& g, const VertexSet& X, const VertexSet& Y);
/// |N(v) ∩ S|, S sorted.
int degree_into(const Graph& g, Vertex v, const VertexSet& S);

/// BFS distances from a set of sources; -1 beyond max_radius (or unreachable).
std::vector<int> bfs_distances(const Graph& g, const VertexSet& sources, int max_radius = -1);
/// Component id per vertex, numbered by smallest member.
std::vector<int> components(const Graph& g);
/// Number of triangles containing v.
std::size_t triangles_at(const Graph& g, Vertex v);

// ---- text format ----

/// Header `n <count> m <count>`, then `u v` per line with u < v. `#` starts a comment.
void write_graph(std::ostream& out, const Graph& g);
Graph read_graph(std::istream& in);
void save_graph(const std::string& path, const Graph& g);
Graph load_graph(const std::string& path);

}  // namespace rgbw
