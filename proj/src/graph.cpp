#include "rgbw/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "rgbw/rng.hpp"

namespace rgbw {

Graph::Graph(Vertex n) : n_(n), offsets_(static_cast<std::size_t>(n) + 1, 0) {
  if (n < 0) throw PreconditionError("Graph: negative vertex count");
}

Graph Graph::from_edges(Vertex n, std::vector<Edge> edges) {
  Graph g(n);
  std::vector<Edge> both;
  both.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw PreconditionError("Graph: edge endpoint out of range");
    if (u == v) throw PreconditionError("Graph: loop at vertex " + std::to_string(u));
    both.emplace_back(u, v);
    both.emplace_back(v, u);
  }
  std::sort(both.begin(), both.end());
  both.erase(std::unique(both.begin(), both.end()), both.end());
  g.targets_.reserve(both.size());
  for (auto [u, v] : both) {
    ++g.offsets_[static_cast<std::size_t>(u) + 1];
    g.targets_.push_back(v);
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  return g;
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

int Graph::min_degree() const {
  if (n_ == 0) return 0;
  int m = degree(0);
  for (Vertex v = 1; v < n_; ++v) m = std::min(m, degree(v));
  return m;
}

int Graph::max_degree() const {
  int m = 0;
  for (Vertex v = 0; v < n_; ++v) m = std::max(m, degree(v));
  return m;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

std::vector<Bitset> Graph::adjacency_bits() const {
  std::vector<Bitset> rows(static_cast<std::size_t>(n_), Bitset(static_cast<std::size_t>(n_)));
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v : neighbors(u)) rows[u].set(v);
  return rows;
}

Graph remove_edges(const Graph& g, const std::vector<Edge>& drop) {
  std::vector<Edge> gone;
  gone.reserve(drop.size());
  for (auto [u, v] : drop) gone.emplace_back(std::min(u, v), std::max(u, v));
  std::sort(gone.begin(), gone.end());
  std::vector<Edge> keep;
  for (const Edge& e : g.edges())
    if (!std::binary_search(gone.begin(), gone.end(), e)) keep.push_back(e);
  return Graph::from_edges(g.n(), std::move(keep));
}

Graph induced_subgraph(const Graph& g, const VertexSet& keep) {
  std::vector<Vertex> index(static_cast<std::size_t>(g.n()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = static_cast<Vertex>(i);
  std::vector<Edge> edges;
  for (Vertex u : keep)
    for (Vertex v : g.neighbors(u))
      if (index[v] >= 0 && u < v) edges.emplace_back(index[u], index[v]);
  return Graph::from_edges(static_cast<Vertex>(keep.size()), std::move(edges));
}

bool is_well_formed(const Graph& g) {
  for (Vertex u = 0; u < g.n(); ++u) {
    auto nb = g.neighbors(u);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      Vertex v = nb[i];
      if (v < 0 || v >= g.n() || v == u) return false;
      if (i > 0 && nb[i - 1] >= v) return false;
      if (!g.adjacent(v, u)) return false;
    }
  }
  return true;
}

Graph generate_gnp(Vertex n, double p, Seed seed) {
  if (n < 0) throw PreconditionError("generate_gnp: n must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("generate_gnp: p outside [0,1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(p * 0.5 * n * (n - 1.0) * 1.05) + 16);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
  return Graph::from_edges(n, std::move(edges));
}

Graph power_of_cycle(Vertex n, int r) {
  if (n < 3 || r < 1) throw PreconditionError("power_of_cycle: need n >= 3, r >= 1");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (int s = 1; s <= r; ++s) {
      Vertex v = static_cast<Vertex>((u + s) % n);
      if (v != u) edges.emplace_back(u, v);
    }
  return Graph::from_edges(n, std::move(edges));
}

Graph backbone_graph(int k, int r, BackboneKind kind) {
  if (k < 1 || r < 1) throw PreconditionError("backbone_graph: need k >= 1, r >= 1");
  std::vector<Edge> edges;
  for (int i1 = 0; i1 < k; ++i1)
    for (int j1 = 0; j1 < r; ++j1)
      for (int i2 = i1; i2 < k && i2 <= i1 + (kind == BackboneKind::C ? 1 : 0); ++i2)
        for (int j2 = 0; j2 < r; ++j2)
          if (j1 != j2) edges.emplace_back(grid_index(i1, j1, r), grid_index(i2, j2, r));
  return Graph::from_edges(static_cast<Vertex>(k * r), std::move(edges));
}

Graph complete_multipartite(const std::vector<int>& sizes) {
  std::vector<int> part;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw PreconditionError("complete_multipartite: part sizes must be >= 1");
    part.insert(part.end(), static_cast<std::size_t>(sizes[i]), static_cast<int>(i));
  }
  Vertex n = static_cast<Vertex>(part.size());
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (part[u] != part[v]) edges.emplace_back(u, v);
  return Graph::from_edges(n, std::move(edges));
}

Graph complete_graph(Vertex n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph::from_edges(n, std::move(edges));
}

Graph path_graph(Vertex n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
  return Graph::from_edges(n, std::move(edges));
}

Graph cycle_graph(Vertex n) {
  if (n < 3) throw PreconditionError("cycle_graph: n >= 3");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) edges.emplace_back(u, (u + 1) % n);
  return Graph::from_edges(n, std::move(edges));
}

Graph grid_graph(int rows, int cols) {
  std::vector<Edge> edges;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      Vertex v = i * cols + j;
      if (j + 1 < cols) edges.emplace_back(v, v + 1);
      if (i + 1 < rows) edges.emplace_back(v, v + cols);
    }
  return Graph::from_edges(static_cast<Vertex>(rows * cols), std::move(edges));
}

namespace {
Vertex round_half_up(double x) { return static_cast<Vertex>(std::floor(x + 0.5 + 1e-9)); }
}  // namespace

TwoCliques two_cliques(Vertex n, double gamma) {
  if (!(gamma > 0.0 && gamma < 0.5)) throw PreconditionError("two_cliques: need 0 < gamma < 1/2");
  TwoCliques out;
  out.clique_size = round_half_up((0.5 + gamma) * n);
  out.overlap = round_half_up(2.0 * gamma * n);
  if (out.overlap < 1) throw PreconditionError("two_cliques: rounded overlap < 1");
  if (out.overlap > out.clique_size) throw PreconditionError("two_cliques: overlap exceeds clique size");
  out.total = 2 * out.clique_size - out.overlap;
  std::vector<Edge> edges;
  const Vertex s = out.clique_size;
  for (Vertex u = 0; u < s; ++u)
    for (Vertex v = u + 1; v < s; ++v) edges.emplace_back(u, v);
  for (Vertex u = s - out.overlap; u < out.total; ++u)
    for (Vertex v = u + 1; v < out.total; ++v) edges.emplace_back(u, v);
  out.graph = Graph::from_edges(out.total, std::move(edges));
  out.min_degree = out.graph.min_degree();
  return out;
}

Graph disjoint_copies(const Graph& h0, int t) {
  if (t < 1) throw PreconditionError("disjoint_copies: t >= 1");
  std::vector<Edge> edges;
  const auto base = h0.edges();
  for (int c = 0; c < t; ++c)
    for (auto [u, v] : base) edges.emplace_back(u + c * h0.n(), v + c * h0.n());
  return Graph::from_edges(h0.n() * t, std::move(edges));
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  auto edges = a.edges();
  for (auto [u, v] : b.edges()) edges.emplace_back(u + a.n(), v + a.n());
  return Graph::from_edges(a.n() + b.n(), std::move(edges));
}

Graph random_regular(Vertex n, int d, Seed seed) {
  if (d < 0 || d >= n || (static_cast<long long>(n) * d) % 2 != 0)
    throw PreconditionError("random_regular: need 0 <= d < n and n*d even");
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Vertex> points;
    for (Vertex v = 0; v < n; ++v) points.insert(points.end(), static_cast<std::size_t>(d), v);
    std::vector<Bitset> adj(static_cast<std::size_t>(n), Bitset(static_cast<std::size_t>(n)));
    std::vector<Edge> edges;
    bool stuck = false;
    while (!points.empty() && !stuck) {
      // Draw random point pairs; a handful of rejections in a row means restart.
      bool placed = false;
      for (int tries = 0; tries < 100 && !placed; ++tries) {
        std::size_t i = rng.below(points.size());
        std::size_t j = rng.below(points.size());
        Vertex u = points[i], v = points[j];
        if (i == j || u == v || adj[u].test(v)) continue;
        adj[u].set(v);
        adj[v].set(u);
        edges.emplace_back(u, v);
        if (i < j) std::swap(i, j);
        std::swap(points[i], points.back());
        points.pop_back();
        std::swap(points[j], points.back());
        points.pop_back();
        placed = true;
      }
      stuck = !placed;
    }
    if (!stuck) return Graph::from_edges(n, std::move(edges));
  }
  throw Error("random_regular: pairing failed repeatedly");
}

Graph random_tree(Vertex n, int max_deg, Seed seed) {
  if (n >= 3 && max_deg < 2) throw PreconditionError("random_tree: max_deg >= 2 for n >= 3");
  Rng rng(seed);
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  std::vector<Vertex> open;
  std::vector<Edge> edges;
  if (n > 0) open.push_back(0);
  for (Vertex v = 1; v < n; ++v) {
    std::size_t i = rng.below(open.size());
    Vertex u = open[i];
    edges.emplace_back(u, v);
    if (++deg[u] >= max_deg) {
      open[i] = open.back();
      open.pop_back();
    }
    ++deg[v];
    if (deg[v] < max_deg) open.push_back(v);
  }
  return Graph::from_edges(n, std::move(edges));
}

int degree_into(const Graph& g, Vertex v, const VertexSet& S) {
  int c = 0;
  auto nb = g.neighbors(v);
  auto a = nb.begin();
  auto b = S.begin();
  while (a != nb.end() && b != S.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++c;
      ++a;
      ++b;
    }
  }
  return c;
}

std::size_t edges_between(const Graph& g, const VertexSet& X, const VertexSet& Y) {
  std::size_t total = 0;
  for (Vertex x : X) total += static_cast<std::size_t>(degree_into(g, x, Y));
  return total;
}

std::size_t edges_inside(const Graph& g, const VertexSet& X) { return edges_between(g, X, X) / 2; }

SetStats set_stats(const Graph& g, const VertexSet& X, const VertexSet& Y) {
  if (X.empty() || Y.empty()) throw PreconditionError("set_stats: density of an empty set is undefined");
  SetStats s;
  s.e_X = edges_inside(g, X);
  s.e_XY = edges_between(g, X, Y);
  s.d_XY = static_cast<double>(s.e_XY) / (static_cast<double>(X.size()) * static_cast<double>(Y.size()));
  return s;
}

std::vector<int> bfs_distances(const Graph& g, const VertexSet& sources, int max_radius) {
  std::vector<int> dist(static_cast<std::size_t>(g.n()), -1);
  std::deque<Vertex> queue;
  for (Vertex s : sources) {
    if (dist[s] < 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    if (max_radius >= 0 && dist[u] >= max_radius) continue;
    for (Vertex v : g.neighbors(u))
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
  }
  return dist;
}

std::vector<int> components(const Graph& g) {
  std::vector<int> comp(static_cast<std::size_t>(g.n()), -1);
  int next = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (Vertex v : g.neighbors(u))
        if (comp[v] < 0) {
          comp[v] = next;
          stack.push_back(v);
        }
    }
    ++next;
  }
  return comp;
}

std::size_t triangles_at(const Graph& g, Vertex v) {
  std::size_t count = 0;
  auto nb = g.neighbors(v);
  VertexSet nbset(nb.begin(), nb.end());
  for (Vertex u : nb) count += static_cast<std::size_t>(degree_into(g, u, nbset));
  return count / 2;
}

void write_graph(std::ostream& out, const Graph& g) {
  out << "n " << g.n() << " m " << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph read_graph(std::istream& in) {
  std::string line;
  long long n = -1, m = -1;
  std::vector<Edge> edges;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (n < 0) {
      std::string mkey;
      if (first != "n" || !(ls >> n) || !(ls >> mkey) || mkey != "m" || !(ls >> m) || n < 0 || m < 0)
        throw Error("graph file line " + std::to_string(lineno) + ": expected header `n <count> m <count>`");
      continue;
    }
    long long u = 0, v = 0;
    try {
      u = std::stoll(first);
    } catch (const std::exception&) {
      throw Error("graph file line " + std::to_string(lineno) + ": bad vertex");
    }
    if (!(ls >> v)) throw Error("graph file line " + std::to_string(lineno) + ": expected `u v`");
    if (!(u < v) || u < 0 || v >= n)
      throw Error("graph file line " + std::to_string(lineno) + ": need 0 <= u < v < n");
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  if (n < 0) throw Error("graph file: missing header");
  if (static_cast<long long>(edges.size()) != m)
    throw Error("graph file: header says " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
  Graph g = Graph::from_edges(static_cast<Vertex>(n), std::move(edges));
  if (static_cast<long long>(g.edge_count()) != m) throw Error("graph file: duplicate edges");
  return g;
}

void save_graph(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_graph(out, g);
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return read_graph(in);
}

}  // namespace rgbw
