#include "rgbw/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rgbw/bitset.hpp"
#include "rgbw/rng.hpp"

namespace rgbw {

std::size_t Embedding::embedded_count() const {
  return static_cast<std::size_t>(std::count_if(g.begin(), g.end(), [](Vertex v) { return v >= 0; }));
}

VertexSet Embedding::image() const {
  VertexSet out;
  for (Vertex v : g)
    if (v >= 0) out.push_back(v);
  return normalize(std::move(out));
}

double embedding_constant(const EmbedParams& params, double d, int delta) {
  if (params.c >= 0) return params.c;
  return std::pow(d / 8.0, delta);
}

namespace {

int resolved_delta(const EmbedParams& params, const Graph& h) {
  return params.max_degree > 0 ? params.max_degree : h.max_degree();
}

int cell_index(const HPlan& plan, Vertex w) { return plan.f[w].i * plan.r + plan.f[w].j; }

Bitset image_bits(const Embedding& emb, Vertex host_n) {
  Bitset used(static_cast<std::size_t>(host_n));
  for (Vertex v : emb.g)
    if (v >= 0) used.set(v);
  return used;
}

std::string cell_name(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

// Vertices at distance exactly 2 from `sources`.
VertexSet second_neighborhood(const Graph& h, const VertexSet& sources) {
  auto dist = bfs_distances(h, sources, 2);
  VertexSet out;
  for (Vertex v = 0; v < h.n(); ++v)
    if (dist[v] == 2) out.push_back(v);
  return out;
}

VertexSet closed_neighborhood(const Graph& h, const VertexSet& s, int radius) {
  auto dist = bfs_distances(h, s, radius);
  VertexSet out;
  for (Vertex v = 0; v < h.n(); ++v)
    if (dist[v] >= 0) out.push_back(v);
  return out;
}

}  // namespace

Embedding pre_embed_B(const Graph& gp, const ClusterPartition& part, const ReducedGraph& R, const Graph& h,
                      const HPlan& plan, const EmbedParams& params) {
  Embedding emb(h.n());
  if (part.B.empty()) return emb;
  const int delta = resolved_delta(params, h);
  const double c = embedding_constant(params, part.d, delta);
  if (static_cast<double>(part.B.size()) * std::pow(delta, 5) > 1.0 / plan.beta + 1e-9)
    throw PreconditionError("pre_embed_B: |B| Delta^5 exceeds 1/beta");
  const auto adj = gp.adjacency_bits();
  const int k = part.k, r = part.r;
  Bitset used(static_cast<std::size_t>(gp.n()));
  Bitset blocked(static_cast<std::size_t>(h.n()));  // within distance 4 of a chosen h_b

  for (Vertex b : part.B) {
    const std::string who = "vertex " + std::to_string(b) + " of B";
    // Core with the most neighbors of b relative to its target size.
    int best = -1;
    double best_ratio = -1.0;
    for (int cidx = 0; cidx < k * r; ++cidx) {
      const double ratio = degree_into(gp, b, part.core.cells[cidx]) / static_cast<double>(part.m.cells[cidx]);
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best = cidx;
      }
    }
    if (best < 0 || best_ratio < params.p / 3.0)
      throw StageError("pre_embed_B", who + " has fewer than m p / 3 neighbors in every core");
    const int s = best / r, t = best % r;

    // A row s' fully adjacent to (s,t) in R with a free, far-apart h.
    Vertex hb = -1;
    int s2 = -1;
    for (int row = 0; row < k && hb < 0; ++row) {
      bool full = true;
      for (int j = 0; j < r && full; ++j) full = R.edges.adjacent(best, row * r + j);
      if (!full) continue;
      for (Vertex cand : plan.indep[row])
        if (!blocked.test(cand)) {
          hb = cand;
          s2 = row;
          break;
        }
    }
    if (hb < 0)
      throw StageError("pre_embed_B", who + ": no row adjacent to " + cell_name(s, t) +
                                          " has an unused independent-neighborhood vertex");

    // Images of N(h_b): neighbors of b in V*(s,t) keeping common neighborhoods
    // in every core of row s' large.
    std::vector<Bitset> common;
    for (int j = 0; j < r; ++j) {
      Bitset cj(static_cast<std::size_t>(gp.n()), part.core.at(s2, j));
      cj.and_not(used);
      common.push_back(std::move(cj));
    }
    Bitset pool(static_cast<std::size_t>(gp.n()), part.core.at(s, t));
    pool &= adj[b];
    pool.and_not(used);
    pool.reset(b);
    std::vector<Vertex> images;
    for (std::size_t idx = 0; idx < h.neighbors(hb).size(); ++idx) {
      Vertex pick = -1;
      double pick_score = -1.0;
      pool.for_each([&](Vertex v) {
        double score = 2.0;
        for (int j = 0; j < r; ++j)
          score = std::min(score, common[j].and_count(adj[v]) / static_cast<double>(part.core.at(s2, j).size()));
        if (score > pick_score) {
          pick_score = score;
          pick = v;
        }
      });
      if (pick < 0) throw StageError("pre_embed_B", who + ": neighbors of b in " + cell_name(s, t) + " exhausted");
      images.push_back(pick);
      pool.reset(pick);
      for (auto& cj : common) cj &= adj[pick];
    }
    emb.g[hb] = b;
    used.set(b);
    for (std::size_t idx = 0; idx < images.size(); ++idx) {
      emb.g[h.neighbors(hb)[idx]] = images[idx];
      used.set(images[idx]);
    }
    emb.W_B.push_back(hb);
    emb.bad_assignment.emplace_back(b, hb);
    for (Vertex w : closed_neighborhood(h, {hb}, 4)) blocked.set(w);
  }
  emb.W_B = normalize(std::move(emb.W_B));
  emb.Z = closed_neighborhood(h, emb.W_B, 1);

  for (Vertex w : second_neighborhood(h, emb.W_B)) {
    Bitset cw(static_cast<std::size_t>(gp.n()), part.core.cells[cell_index(plan, w)]);
    cw.and_not(used);
    for (Vertex u : h.neighbors(w))
      if (emb.embedded(u)) cw &= adj[emb.g[u]];
    emb.candidates[w] = cw.members();
    if (static_cast<double>(emb.candidates[w].size()) < 2.0 * c * part.m.cells[cell_index(plan, w)])
      throw StageError("pre_embed_B", "candidate set of H-vertex " + std::to_string(w) + " below 2 c m");
  }
  return emb;
}

std::string pre_embedding_violation(const Graph& gp, const ClusterPartition& part, const Graph& h, const HPlan& plan,
                                    const Embedding& emb, double c) {
  VertexSet embedded;
  for (Vertex w = 0; w < h.n(); ++w)
    if (emb.g[w] >= 0) embedded.push_back(w);
  VertexSet gz;
  for (Vertex w : embedded) gz.push_back(emb.g[w]);
  gz = normalize(gz);
  if (gz.size() != embedded.size()) return "g is not injective";
  // (i) B inside g(Z) inside B plus the cores.
  if (!set_difference(part.B, gz).empty()) return "(i): B not covered";
  VertexSet allowed = part.B;
  for (const auto& core : part.core.cells) allowed = set_union(allowed, core);
  if (!set_difference(gz, allowed).empty()) return "(i): image leaves B and the cores";
  // (ii) Z = W_B + N(W_B) with W_B = g^{-1}(B).
  VertexSet wb;
  for (Vertex w : embedded)
    if (contains(part.B, emb.g[w])) wb.push_back(w);
  if (wb != emb.W_B) return "(ii): W_B differs from the preimage of B";
  VertexSet z = wb;
  for (Vertex w : wb)
    for (Vertex u : h.neighbors(w)) z.push_back(u);
  z = normalize(z);
  if (z != embedded || z != emb.Z) return "(ii): Z differs from W_B plus its neighborhood";
  for (Vertex u : z)
    for (Vertex w : h.neighbors(u))
      if (contains(z, w) && !gp.adjacent(emb.g[u], emb.g[w])) return "(ii): g is not a homomorphism on H[Z]";
  // Spacing and distance from X.
  for (Vertex w : wb) {
    auto dist = bfs_distances(h, {w}, 4);
    for (Vertex w2 : wb)
      if (w2 != w && dist[w2] >= 0) return "W_B vertices closer than 5";
  }
  if (!plan.X.empty()) {
    auto dx = bfs_distances(h, plan.X, 2);
    for (Vertex u : z)
      if (dx[u] >= 0) return "Z meets N^{<=2}(X)";
  }
  // (iii) candidate sets of second neighbors.
  for (Vertex w : second_neighborhood(h, wb)) {
    auto it = emb.candidates.find(w);
    if (it == emb.candidates.end()) return "(iii): no candidate set for " + std::to_string(w);
    const int cidx = cell_index(plan, w);
    const VertexSet& cw = it->second;
    if (!set_difference(cw, part.core.cells[cidx]).empty()) return "(iii): C_w leaves the core of its cell";
    if (!disjoint(cw, gz)) return "(iii): C_w meets g(Z)";
    for (Vertex v : cw)
      for (Vertex u : h.neighbors(w))
        if (contains(z, u) && !gp.adjacent(v, emb.g[u])) return "(iii): C_w not in the common neighborhood";
    if (static_cast<double>(cw.size()) < 2.0 * c * part.m.cells[cidx] - 1e-9) return "(iii): C_w below 2 c m";
  }
  return "";
}

Embedding partial_embed_X(const Graph& gp, const ClusterPartition& part, const ReducedGraph& R, const Graph& h,
                          const HPlan& plan, const Embedding& emb, const EmbedParams& params) {
  (void)R;
  Embedding out = emb;
  if (plan.X.empty()) return out;
  const int delta = resolved_delta(params, h);
  const double c = embedding_constant(params, part.d, delta);
  VertexSet Y;
  for (Vertex x : plan.X)
    for (Vertex y : h.neighbors(x))
      if (!contains(plan.X, y)) Y.push_back(y);
  Y = normalize(Y);
  VertexSet nz = set_difference(closed_neighborhood(h, emb.Z, 1), emb.Z);
  if (!disjoint(Y, nz)) throw StageError("partial_embed_X", "Y meets N(Z) \\ Z");
  if (!emb.Z.empty() && !disjoint(plan.X, closed_neighborhood(h, emb.Z, 2)))
    throw StageError("partial_embed_X", "X meets N^{<=2}(Z)");

  const auto adj = gp.adjacency_bits();
  Bitset used = image_bits(out, gp.n());
  std::map<Vertex, Bitset> cy;
  for (Vertex y : Y) {
    Bitset b(static_cast<std::size_t>(gp.n()), part.V.cells[cell_index(plan, y)]);
    b.and_not(used);
    cy.emplace(y, std::move(b));
  }
  VertexSet order = plan.X;
  std::sort(order.begin(), order.end(),
            [&](Vertex a, Vertex b) { return plan.labeling.label[a] < plan.labeling.label[b]; });
  for (Vertex x : order) {
    const int cidx = cell_index(plan, x);
    Bitset cand(static_cast<std::size_t>(gp.n()), part.V.cells[cidx]);
    cand.and_not(used);
    std::ostringstream trace;
    trace << "x=" << x << " cell " << cell_name(plan.f[x].i, plan.f[x].j) << " pool " << cand.count();
    for (Vertex u : h.neighbors(x))
      if (out.embedded(u)) {
        cand &= adj[out.g[u]];
        trace << "; after g(" << u << ")=" << out.g[u] << ": " << cand.count();
      }
    if (!cand.any()) throw StageError("partial_embed_X", "candidate set empty: " + trace.str());
    Vertex pick = -1;
    double pick_score = -1.0;
    cand.for_each([&](Vertex v) {
      double score = 2.0;
      for (Vertex y : h.neighbors(x)) {
        auto it = cy.find(y);
        if (it == cy.end()) continue;
        score = std::min(score, it->second.and_count(adj[v]) /
                                    static_cast<double>(part.V.cells[cell_index(plan, y)].size()));
      }
      if (score > pick_score) {
        pick_score = score;
        pick = v;
      }
    });
    out.g[x] = pick;
    used.set(pick);
    for (Vertex y : h.neighbors(x)) {
      auto it = cy.find(y);
      if (it != cy.end()) it->second &= adj[pick];
    }
    for (auto& [y, b] : cy) b.reset(pick);
  }
  for (auto& [w, cw] : out.candidates) {
    VertexSet kept;
    for (Vertex v : cw)
      if (!used.test(v)) kept.push_back(v);
    cw = kept;
  }
  for (auto& [y, b] : cy) {
    const double need = c * static_cast<double>(part.V.cells[cell_index(plan, y)].size());
    if (static_cast<double>(b.count()) < need - 1e-9)
      throw StageError("partial_embed_X", "candidate set of y=" + std::to_string(y) + " has " +
                                              std::to_string(b.count()) + " < c|V_f(y)|");
    out.candidates[y] = b.members();
  }
  return out;
}

namespace {

// Augmenting-path bipartite matching; adjacency lists from left to right.
struct Matching {
  std::vector<int> match_left, match_right;

  explicit Matching(const std::vector<std::vector<int>>& adj, int right) {
    match_left.assign(adj.size(), -1);
    match_right.assign(static_cast<std::size_t>(right), -1);
    for (std::size_t u = 0; u < adj.size(); ++u) {
      std::vector<char> seen(static_cast<std::size_t>(right), 0);
      augment(adj, static_cast<int>(u), seen);
    }
  }

  bool augment(const std::vector<std::vector<int>>& adj, int u, std::vector<char>& seen) {
    for (int v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (match_right[v] < 0 || augment(adj, match_right[v], seen)) {
        match_left[u] = v;
        match_right[v] = u;
        return true;
      }
    }
    return false;
  }

  // Left vertices reachable from unmatched ones by alternating paths: a set S
  // with |N(S)| < |S| whenever the matching is not left-perfect.
  std::pair<std::vector<int>, std::vector<int>> hall_violator(const std::vector<std::vector<int>>& adj) const {
    std::vector<char> left_seen(adj.size(), 0), right_seen(match_right.size(), 0);
    std::vector<int> queue;
    for (std::size_t u = 0; u < adj.size(); ++u)
      if (match_left[u] < 0) {
        left_seen[u] = 1;
        queue.push_back(static_cast<int>(u));
      }
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (int v : adj[queue[q]]) {
        if (right_seen[v]) continue;
        right_seen[v] = 1;
        int u2 = match_right[v];
        if (u2 >= 0 && !left_seen[u2]) {
          left_seen[u2] = 1;
          queue.push_back(u2);
        }
      }
    std::vector<int> S, NS;
    for (std::size_t u = 0; u < adj.size(); ++u)
      if (left_seen[u]) S.push_back(static_cast<int>(u));
    for (std::size_t v = 0; v < match_right.size(); ++v)
      if (right_seen[v]) NS.push_back(static_cast<int>(v));
    return {S, NS};
  }
};

// One attempt at a column; writes into g on success, returns a failure message otherwise.
std::string embed_column(const Graph& gp, const std::vector<Bitset>& adj, const ClusterPartition& part, const Graph& h,
                         const HPlan& plan, const Embedding& emb, const Bitset& used_global, int i, double buffer_fraction,
                         Rng& rng, std::vector<Vertex>& g) {
  const int r = part.r;
  std::vector<VertexSet> rest(static_cast<std::size_t>(r));
  std::vector<Bitset> pool;
  for (int j = 0; j < r; ++j) {
    for (Vertex w : plan.W.at(i, j))
      if (g[w] < 0) rest[j].push_back(w);
    Bitset pj(static_cast<std::size_t>(gp.n()), part.V.at(i, j));
    pj.and_not(used_global);
    if (pj.count() != rest[j].size())
      throw StageError("blowup", "cell " + cell_name(i, j) + " has " + std::to_string(pj.count()) +
                                     " free host vertices for " + std::to_string(rest[j].size()) + " H-vertices");
    pool.push_back(std::move(pj));
  }

  // Buffers: pairwise non-adjacent, about buffer_fraction of each cell.
  std::vector<Vertex> all;
  for (const auto& rj : rest) all.insert(all.end(), rj.begin(), rj.end());
  rng.shuffle(all);
  Bitset in_buffer(static_cast<std::size_t>(h.n()));
  std::vector<int> quota(static_cast<std::size_t>(r)), filled(static_cast<std::size_t>(r), 0);
  for (int j = 0; j < r; ++j)
    quota[j] = static_cast<int>(std::ceil(buffer_fraction * static_cast<double>(rest[j].size())));
  for (Vertex w : all) {
    const int j = plan.f[w].j;
    if (filled[j] >= quota[j]) continue;
    bool free = true;
    for (Vertex u : h.neighbors(w))
      if (in_buffer.test(u)) free = false;
    if (!free) continue;
    in_buffer.set(w);
    ++filled[j];
  }

  auto candidates_of = [&](Vertex w, const Bitset& base) {
    Bitset cand = base;
    for (Vertex u : h.neighbors(w))
      if (g[u] >= 0) cand &= adj[g[u]];
    auto it = emb.candidates.find(w);
    if (it != emb.candidates.end()) cand &= Bitset(static_cast<std::size_t>(gp.n()), it->second);
    return cand;
  };

  std::vector<Vertex> order;
  for (Vertex w : all)
    if (!in_buffer.test(w)) order.push_back(w);
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    if (h.degree(a) != h.degree(b)) return h.degree(a) > h.degree(b);
    return plan.labeling.label[a] < plan.labeling.label[b];
  });
  for (Vertex w : order) {
    const int j = plan.f[w].j;
    Bitset cand = candidates_of(w, pool[j]);
    const std::size_t cnt = cand.count();
    if (cnt == 0) return "greedy: no candidate for H-vertex " + std::to_string(w) + " in cell " + cell_name(i, j);
    std::size_t idx = rng.below(cnt);
    Vertex pick = cand.next(0);
    while (idx-- > 0) pick = cand.next(pick + 1);
    g[w] = pick;
    pool[j].reset(pick);
  }

  for (int j = 0; j < r; ++j) {
    std::vector<Vertex> left;
    for (Vertex w : rest[j])
      if (in_buffer.test(w)) left.push_back(w);
    VertexSet right = pool[j].members();
    std::vector<std::vector<int>> ladj(left.size());
    for (std::size_t a = 0; a < left.size(); ++a) {
      Bitset cand = candidates_of(left[a], pool[j]);
      for (std::size_t b = 0; b < right.size(); ++b)
        if (cand.test(right[b])) ladj[a].push_back(static_cast<int>(b));
    }
    Matching mt(ladj, static_cast<int>(right.size()));
    if (std::count(mt.match_left.begin(), mt.match_left.end(), -1) > 0) {
      auto [S, NS] = mt.hall_violator(ladj);
      std::ostringstream msg;
      msg << "matching in cell " << cell_name(i, j) << ": Hall violator of " << S.size() << " H-vertices with "
          << NS.size() << " host neighbors {";
      for (std::size_t t = 0; t < S.size() && t < 8; ++t) msg << (t ? "," : "") << left[S[t]];
      msg << (S.size() > 8 ? ",...}" : "}");
      return msg.str();
    }
    for (std::size_t a = 0; a < left.size(); ++a) g[left[a]] = right[mt.match_left[a]];
  }
  return "";
}

}  // namespace

Embedding blowup_embed(const Graph& gp, const ClusterPartition& part, const Graph& h, const HPlan& plan,
                       const Embedding& emb, const EmbedParams& params, Seed seed,
                       std::optional<std::vector<int>> column_order) {
  Embedding out = emb;
  const auto adj = gp.adjacency_bits();
  std::vector<int> cols(static_cast<std::size_t>(part.k));
  std::iota(cols.begin(), cols.end(), 0);
  if (column_order) cols = *column_order;
  Rng master(seed);
  std::vector<Seed> col_seeds;
  for (int i = 0; i < part.k; ++i) col_seeds.push_back(master.fork());
  Bitset used = image_bits(out, gp.n());
  for (int i : cols) {
    Rng rng(col_seeds[i]);
    std::string failure;
    bool done = false;
    for (int attempt = 0; attempt < std::max(1, params.blowup_attempts) && !done; ++attempt) {
      std::vector<Vertex> g = out.g;
      failure = embed_column(gp, adj, part, h, plan, out, used, i, params.buffer_fraction, rng, g);
      if (failure.empty()) {
        out.g = std::move(g);
        done = true;
      }
    }
    if (!done) throw StageError("blowup", "column " + std::to_string(i) + ": " + failure);
    used = image_bits(out, gp.n());
  }
  for (auto it = out.candidates.begin(); it != out.candidates.end();)
    it = out.embedded(it->first) ? out.candidates.erase(it) : std::next(it);
  return out;
}

std::string embedding_violation(const Graph& gp, const Graph& h, const std::vector<Vertex>& g, bool spanning) {
  if (static_cast<Vertex>(g.size()) != h.n()) return "map size differs from |V(H)|";
  std::vector<char> hit(static_cast<std::size_t>(gp.n()), 0);
  for (Vertex w = 0; w < h.n(); ++w) {
    if (g[w] < 0) {
      if (spanning) return "H-vertex " + std::to_string(w) + " unembedded";
      continue;
    }
    if (g[w] >= gp.n()) return "image of " + std::to_string(w) + " out of range";
    if (hit[g[w]]) return "host vertex " + std::to_string(g[w]) + " used twice";
    hit[g[w]] = 1;
  }
  for (auto [u, v] : h.edges())
    if (g[u] >= 0 && g[v] >= 0 && !gp.adjacent(g[u], g[v]))
      return "edge " + std::to_string(u) + "-" + std::to_string(v) + " not mapped to an edge";
  if (spanning && h.n() != gp.n()) return "H and G' differ in order";
  return "";
}

PaddedGraph pad_with_isolates(const Graph& h, const Labeling& L, double beta, Vertex n_target, bool fill_to_target) {
  if (!(beta > 0 && beta <= 1)) throw PreconditionError("pad_with_isolates: beta must lie in (0,1]");
  const Vertex room = static_cast<Vertex>(std::ceil(1.0 / (beta * beta) - 1e-9));
  if (h.n() > n_target - room) throw PreconditionError("pad_with_isolates: H has more than n - 1/beta^2 vertices");
  const int interval = std::max(1, static_cast<int>(std::ceil(beta * beta * n_target - 1e-9)) - 1);
  const std::vector<Vertex> order = L.order();
  const Vertex n_h = h.n();
  const Vertex inserts = (n_h + interval - 1) / interval;
  if (n_h + inserts > n_target) throw PreconditionError("pad_with_isolates: padding would exceed n_target");
  const Vertex total = fill_to_target ? n_target : n_h + inserts;

  PaddedGraph out;
  out.labeling.label.assign(static_cast<std::size_t>(total), 0);
  Vertex next_id = n_h;
  int pos = 0;
  for (Vertex t = 0; t < n_h; ++t) {
    out.labeling.label[order[t]] = ++pos;
    if ((t + 1) % interval == 0 || t + 1 == n_h) {
      out.labeling.label[next_id] = ++pos;
      out.inserted.push_back(next_id++);
    }
  }
  while (next_id < total) {
    out.labeling.label[next_id] = ++pos;
    out.inserted.push_back(next_id++);
  }
  out.graph = Graph::from_edges(total, h.edges());
  return out;
}

namespace {

template <typename F>
auto staged(const std::string& stage, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace

SpanningResult embed_spanning(const Graph& gp, const Graph& h, const EmbedParams& params, Seed seed) {
  if (h.n() != gp.n()) throw PreconditionError("embed_spanning: |V(H)| must equal |V(G')|");
  const Vertex n = gp.n();
  const int r = params.r;
  if (params.require_min_degree && gp.min_degree() < (1.0 - 1.0 / r + params.gamma) * n * params.p - 1e-9)
    throw PreconditionError("embed_spanning: min degree of G' below (1 - 1/r + gamma) n p");
  Rng rng(seed);
  const Seed engine_seed = rng.fork(), blowup_seed = rng.fork();

  SpanningResult res;
  res.labeling = staged("label", [&] { return heuristic_labeling(h); });
  res.coloring = staged("color", [&] { return balance_coloring(h, res.labeling, proper_coloring(h, r)); });
  const int bw = labeling_bandwidth(h, res.labeling);
  const double beta = params.beta > 0 ? params.beta : std::max(1, bw) / static_cast<double>(n);

  EngineConfig ecfg = params.engine;
  ecfg.require_min_degree = params.require_min_degree;
  EngineResult eng = staged("partition", [&] {
    return build_partition_engine(gp, r, params.gamma, params.p, params.eps, params.xi0, engine_seed, ecfg);
  });
  ClusterPartition& P = eng.partition;
  const int delta = params.max_degree > 0 ? params.max_degree : h.max_degree();
  res.c = embedding_constant(params, P.d, delta);

  // Targets for H: m lifted by |B| units, smallest cells first.
  Grid<int> mh = P.m;
  for (std::size_t extra = 0; extra < P.B.size(); ++extra) {
    int low = 0;
    for (int cidx = 1; cidx < P.k * P.r; ++cidx)
      if (mh.cells[cidx] < mh.cells[low]) low = cidx;
    ++mh.cells[low];
  }
  res.plan = staged("plan", [&] { return plan_H(h, res.labeling, res.coloring, P.k, mh, beta, params.xi, params.plan); });

  Embedding emb = staged("pre_embed_B", [&] { return pre_embed_B(gp, P, eng.R, h, res.plan, params); });

  // n_{i,j} = |W_{i,j} \ Z| + |V*_{i,j} cap g(Z)|.
  Grid<int> targets(P.k, P.r);
  const VertexSet gz = emb.image();
  for (int cidx = 0; cidx < P.k * P.r; ++cidx)
    targets.cells[cidx] = static_cast<int>(set_difference(res.plan.W.cells[cidx], emb.Z).size() +
                                           set_intersection(P.core.cells[cidx], gz).size());
  ClusterPartition resized = staged("resize", [&] { return resize_partition(gp, P, targets, &res.resize_moves); });
  for (int cidx = 0; cidx < P.k * P.r; ++cidx)
    if (static_cast<int>(resized.V.cells[cidx].size()) != targets.cells[cidx])
      throw StageError("resize", "cell " + std::to_string(cidx) + " does not match its target");

  emb = staged("partial_embed_X", [&] { return partial_embed_X(gp, resized, eng.R, h, res.plan, emb, params); });
  emb = staged("blowup", [&] { return blowup_embed(gp, resized, h, res.plan, emb, params, blowup_seed); });

  std::string bad = embedding_violation(gp, h, emb.g, true);
  if (!bad.empty()) throw StageError("validate", bad);
  res.embedding = std::move(emb);
  res.partition = std::move(resized);
  return res;
}

}  // namespace rgbw
