#include "rgbw/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "rgbw/rng.hpp"

namespace rgbw {

AdversaryResult wipe_neighborhood(const Graph& g, Vertex v) {
  if (v < 0 || v >= g.n()) throw PreconditionError("wipe_neighborhood: vertex out of range");
  auto nb = g.neighbors(v);
  VertexSet nv(nb.begin(), nb.end());
  std::vector<Edge> drop;
  for (Vertex u : nv)
    for (Vertex w : g.neighbors(u))
      if (u < w && contains(nv, w)) drop.emplace_back(u, w);
  AdversaryResult out{remove_edges(g, drop), {}};
  out.report.deleted_edge_count = drop.size();
  out.report.realized_min_degree = out.graph.min_degree();
  out.report.blocked_set = {v};
  return out;
}

int blocked_set_size(double p, double eps) {
  if (!(p > 0.0)) return 0;
  return static_cast<int>(std::floor(eps / (p * p) / 3.0 + 1e-9));
}

AdversaryResult triangle_blocker(const Graph& g, double p, double eps, Seed seed, TriangleOrder order) {
  const int x_size = blocked_set_size(p, eps);
  if (x_size < 1) throw PreconditionError("triangle_blocker: blocked set empty");
  if (x_size > g.n()) throw PreconditionError("triangle_blocker: blocked set larger than the graph");

  Rng rng(seed);
  auto drawn = rng.sample(g.n(), static_cast<std::size_t>(x_size));
  VertexSet X = normalize(VertexSet(drawn.begin(), drawn.end()));

  std::vector<char> in_x(static_cast<std::size_t>(g.n()), 0), in_w(static_cast<std::size_t>(g.n()), 0);
  for (Vertex x : X) in_x[x] = 1;
  const double w_cut = 2.0 * x_size * p;
  for (Vertex v = 0; v < g.n(); ++v)
    if (!in_x[v] && degree_into(g, v, X) > w_cut) in_w[v] = 1;

  std::vector<Edge> drop;
  // E(X) and E(X, W).
  for (Vertex x : X)
    for (Vertex u : g.neighbors(x))
      if ((in_x[u] && x < u) || in_w[u]) drop.emplace_back(x, u);

  // Triangles through x whose other two vertices avoid X and W; with E(X) and
  // E(X,W) gone these are all remaining triangles through x.
  std::vector<Vertex> xs(X.begin(), X.end());
  if (order == TriangleOrder::Reverse) std::reverse(xs.begin(), xs.end());
  for (Vertex x : xs) {
    VertexSet outer;
    for (Vertex u : g.neighbors(x))
      if (!in_x[u] && !in_w[u]) outer.push_back(u);
    if (order == TriangleOrder::Reverse) {
      for (auto it = outer.rbegin(); it != outer.rend(); ++it)
        for (Vertex z : g.neighbors(*it))
          if (z > *it && contains(outer, z)) drop.emplace_back(z, *it);
    } else {
      for (Vertex y : outer)
        for (Vertex z : g.neighbors(y))
          if (z > y && contains(outer, z)) drop.emplace_back(y, z);
    }
  }
  for (auto& e : drop)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(drop.begin(), drop.end());
  drop.erase(std::unique(drop.begin(), drop.end()), drop.end());

  AdversaryResult out{remove_edges(g, drop), {}};
  out.report.deleted_edge_count = drop.size();
  out.report.realized_min_degree = out.graph.min_degree();
  out.report.blocked_set = X;
  out.report.floor_target = static_cast<int>(std::ceil((1.0 - eps) * g.n() * p - 1e-9));
  return out;
}

AdversaryResult prune_to_floor(const Graph& g, int floor, Seed seed) {
  if (floor < 0) throw PreconditionError("prune_to_floor: negative floor");
  if (floor > g.min_degree() && g.n() > 0)
    throw PreconditionError("prune_to_floor: floor " + std::to_string(floor) + " exceeds minimum degree " +
                            std::to_string(g.min_degree()));
  auto edges = g.edges();
  Rng rng(seed);
  rng.shuffle(edges);
  std::vector<int> deg(static_cast<std::size_t>(g.n()));
  for (Vertex v = 0; v < g.n(); ++v) deg[v] = g.degree(v);
  // One pass is maximal: a kept edge had an endpoint at the floor, and degrees never rise.
  std::vector<Edge> keep;
  std::size_t deleted = 0;
  for (auto [u, v] : edges) {
    if (deg[u] > floor && deg[v] > floor) {
      --deg[u];
      --deg[v];
      ++deleted;
    } else {
      keep.emplace_back(u, v);
    }
  }
  AdversaryResult out{Graph::from_edges(g.n(), std::move(keep)), {}};
  out.report.deleted_edge_count = deleted;
  out.report.realized_min_degree = out.graph.min_degree();
  out.report.floor_target = floor;
  return out;
}

}  // namespace rgbw
