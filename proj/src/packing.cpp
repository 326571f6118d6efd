#include "rgbw/packing.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_map>

#include "rgbw/bitset.hpp"
#include "rgbw/rng.hpp"

namespace rgbw {

VertexSet Packing::covered() const {
  VertexSet out;
  for (const auto& c : copies) out.insert(out.end(), c.begin(), c.end());
  return normalize(std::move(out));
}

Packing make_packing(const Graph& g, const Graph& h0, std::vector<Copy> copies) {
  Packing p;
  p.h = h0.n();
  p.copies = std::move(copies);
  std::vector<char> hit(static_cast<std::size_t>(g.n()), 0);
  for (const auto& c : p.copies)
    for (Vertex v : c) hit[v] = 1;
  for (Vertex v = 0; v < g.n(); ++v)
    if (!hit[v]) p.uncovered.push_back(v);
  return p;
}

std::string packing_violation(const Graph& g, const Graph& h0, const Packing& packing) {
  std::vector<int> owner(static_cast<std::size_t>(g.n()), -1);
  for (std::size_t c = 0; c < packing.copies.size(); ++c) {
    const Copy& copy = packing.copies[c];
    if (static_cast<Vertex>(copy.size()) != h0.n()) return "copy " + std::to_string(c) + " has the wrong order";
    for (Vertex v : copy) {
      if (v < 0 || v >= g.n()) return "copy " + std::to_string(c) + " leaves V(G)";
      if (owner[v] >= 0) return "vertex " + std::to_string(v) + " in copies " + std::to_string(owner[v]) + " and " + std::to_string(c);
      owner[v] = static_cast<int>(c);
    }
    for (auto [a, b] : h0.edges())
      if (!g.adjacent(copy[a], copy[b])) return "copy " + std::to_string(c) + " misses an H0 edge";
  }
  VertexSet expect;
  for (Vertex v = 0; v < g.n(); ++v)
    if (owner[v] < 0) expect.push_back(v);
  if (expect != packing.uncovered) return "uncovered set is not the complement of the copies";
  if (packing.h != h0.n()) return "h differs from |V(H0)|";
  return "";
}

namespace {

// Subgraph search with a fixed host; enumerates embeddings of H0 into `allowed`.
class CopyFinder {
 public:
  CopyFinder(const Graph& g, const Graph& h0) : g_(g), h0_(h0), adj_(g.adjacency_bits()) {
    const int h = h0.n();
    for (Vertex root = 0; root < h; ++root) {
      std::vector<Vertex> order{root};
      std::vector<char> placed(static_cast<std::size_t>(h), 0);
      placed[root] = 1;
      while (static_cast<int>(order.size()) < h) {
        Vertex best = -1;
        int best_links = -1;
        for (Vertex a = 0; a < h; ++a) {
          if (placed[a]) continue;
          int links = 0;
          for (Vertex b : h0.neighbors(a)) links += placed[b];
          if (links > best_links || (links == best_links && h0.degree(a) > h0.degree(best))) {
            best = a;
            best_links = links;
          }
        }
        order.push_back(best);
        placed[best] = 1;
      }
      orders_.push_back(std::move(order));
    }
  }

  const Graph& host() const { return g_; }

  // Calls visit(copy) for each embedding containing `must` (or any, rooted at
  // H0-vertex 0, when must < 0); visit returns true to stop. Returns false when
  // the budget ran out.
  bool enumerate(Vertex must, const Bitset& allowed, std::uint64_t budget, std::uint64_t& nodes,
                 const std::function<bool(const Copy&)>& visit) const {
    const int h = h0_.n();
    if (h == 0) return !visit(Copy{}) || true;
    Copy img(static_cast<std::size_t>(h), -1);
    Bitset used(static_cast<std::size_t>(g_.n()));
    bool stop = false, out_of_budget = false;
    std::function<void(const std::vector<Vertex>&, int)> rec = [&](const std::vector<Vertex>& order, int idx) {
      if (stop || out_of_budget) return;
      if (idx == h) {
        stop = visit(img);
        return;
      }
      if (++nodes > budget) {
        out_of_budget = true;
        return;
      }
      const Vertex a = order[idx];
      Bitset cand = allowed;
      cand.and_not(used);
      for (Vertex b : h0_.neighbors(a))
        if (img[b] >= 0) cand &= adj_[img[b]];
      std::vector<Vertex> list = cand.members();
      std::stable_sort(list.begin(), list.end(), [&](Vertex x, Vertex y) { return g_.degree(x) > g_.degree(y); });
      for (Vertex v : list) {
        img[a] = v;
        used.set(v);
        rec(order, idx + 1);
        used.reset(v);
        img[a] = -1;
        if (stop || out_of_budget) return;
      }
    };
    if (must >= 0) {
      if (!allowed.test(must)) return true;
      for (Vertex root = 0; root < h && !stop && !out_of_budget; ++root) {
        img[root] = must;
        used.set(must);
        rec(orders_[root], 1);
        used.reset(must);
        img[root] = -1;
      }
    } else {
      rec(orders_[0], 0);
    }
    return !out_of_budget;
  }

  CopySearch find(Vertex must, const Bitset& allowed, std::uint64_t budget) const {
    CopySearch out;
    bool complete = enumerate(must, allowed, budget, out.nodes, [&](const Copy& c) {
      out.copy = c;
      return true;
    });
    out.exhausted = complete && !out.copy;
    return out;
  }

 private:
  const Graph& g_;
  const Graph& h0_;
  std::vector<Bitset> adj_;
  std::vector<std::vector<Vertex>> orders_;
};

Bitset allowed_from(Vertex n, const VertexSet& forbidden) {
  Bitset a(static_cast<std::size_t>(n));
  a.fill();
  for (Vertex v : forbidden) a.reset(v);
  return a;
}

Packing greedy_with(const CopyFinder& finder, const Graph& h0, Bitset allowed, Seed seed, std::uint64_t budget) {
  const Graph& g = finder.host();
  std::vector<Vertex> order(static_cast<std::size_t>(g.n()));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<Copy> copies;
  for (Vertex v : order) {
    if (!allowed.test(v)) continue;
    auto res = finder.find(v, allowed, budget);
    if (!res.copy) continue;
    for (Vertex u : *res.copy) allowed.reset(u);
    copies.push_back(*res.copy);
  }
  return make_packing(g, h0, std::move(copies));
}

}  // namespace

CopySearch find_copy_avoiding(const Graph& g, const Graph& h0, std::optional<Vertex> must_include,
                              const VertexSet& forbidden, std::uint64_t budget) {
  CopyFinder finder(g, h0);
  return finder.find(must_include ? *must_include : -1, allowed_from(g.n(), forbidden), budget);
}

Packing greedy_pack(const Graph& g, const Graph& h0, const VertexSet& forbidden, Seed seed, std::uint64_t budget) {
  CopyFinder finder(g, h0);
  return greedy_with(finder, h0, allowed_from(g.n(), forbidden), seed, budget);
}

namespace {

// k disjoint copies inside `pool`: the lowest pool vertex is either skipped or
// covered by a copy containing it.
bool pack_k(const CopyFinder& finder, int h, Bitset& pool, int k, std::vector<Copy>& out, std::uint64_t budget,
            std::uint64_t& nodes) {
  if (k == 0) return true;
  if (static_cast<int>(pool.count()) < k * h || nodes > budget) return false;
  const Vertex v = pool.next(0);
  bool found = false;
  Bitset rest = pool;
  rest.reset(v);
  finder.enumerate(v, pool, budget, nodes, [&](const Copy& c) {
    Bitset next = pool;
    for (Vertex u : c) next.reset(u);
    out.push_back(c);
    if (pack_k(finder, h, next, k - 1, out, budget, nodes)) {
      found = true;
      return true;
    }
    out.pop_back();
    return nodes > budget;
  });
  if (found) return true;
  return pack_k(finder, h, rest, k, out, budget, nodes);
}

}  // namespace

Packing local_search_pack(const Graph& g, const Graph& h0, const Packing& start, int rounds, std::uint64_t budget) {
  CopyFinder finder(g, h0);
  const int h = h0.n();
  std::vector<Copy> copies = start.copies;
  for (int round = 0; round < rounds; ++round) {
    Packing cur = make_packing(g, h0, copies);
    bool improved = false;
    auto try_remove = [&](const std::vector<std::size_t>& drop) {
      Bitset pool(static_cast<std::size_t>(g.n()), cur.uncovered);
      for (std::size_t c : drop)
        for (Vertex v : copies[c]) pool.set(v);
      std::vector<Copy> fresh;
      std::uint64_t nodes = 0;
      if (!pack_k(finder, h, pool, static_cast<int>(drop.size()) + 1, fresh, budget, nodes)) return false;
      std::vector<Copy> next;
      for (std::size_t c = 0; c < copies.size(); ++c)
        if (std::find(drop.begin(), drop.end(), c) == drop.end()) next.push_back(copies[c]);
      next.insert(next.end(), fresh.begin(), fresh.end());
      copies = std::move(next);
      return true;
    };
    if (static_cast<int>(cur.uncovered.size()) < h) break;
    if (try_remove({})) continue;
    for (std::size_t a = 0; a < copies.size() && !improved; ++a) improved = try_remove({a});
    // Pairs: all of them for small packings, else pairs joined by an edge.
    for (std::size_t a = 0; a < copies.size() && !improved; ++a)
      for (std::size_t b = a + 1; b < copies.size() && !improved; ++b) {
        if (copies.size() > 40) {
          bool linked = false;
          for (Vertex u : copies[a])
            for (Vertex v : copies[b])
              if (g.adjacent(u, v)) linked = true;
          if (!linked) continue;
        }
        improved = try_remove({a, b});
      }
    if (!improved) break;
  }
  return make_packing(g, h0, std::move(copies));
}

Packing exact_max_pack(const Graph& g, const Graph& h0) {
  const Vertex n = g.n();
  if (n > 14) throw PreconditionError("exact_max_pack: n must be at most 14");
  const int h = h0.n();
  if (h == 0 || h > n) return make_packing(g, h0, {});
  CopyFinder finder(g, h0);
  // Distinct vertex sets carrying a copy, grouped by their lowest vertex.
  std::vector<std::vector<std::pair<std::uint32_t, Copy>>> by_low(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) {
    Bitset allowed(static_cast<std::size_t>(n));
    for (Vertex u = v; u < n; ++u) allowed.set(u);
    std::uint64_t nodes = 0;
    std::vector<std::uint32_t> seen;
    finder.enumerate(v, allowed, ~std::uint64_t{0}, nodes, [&](const Copy& c) {
      std::uint32_t mask = 0;
      for (Vertex u : c) mask |= 1u << u;
      if (std::find(seen.begin(), seen.end(), mask) == seen.end()) {
        seen.push_back(mask);
        by_low[v].emplace_back(mask, c);
      }
      return false;
    });
  }
  std::unordered_map<std::uint32_t, int> memo;
  std::function<int(std::uint32_t)> best = [&](std::uint32_t mask) -> int {
    if (std::popcount(mask) < h) return 0;
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    const int v = std::countr_zero(mask);
    int value = best(mask & ~(1u << v));
    for (const auto& [cm, copy] : by_low[v])
      if ((cm & mask) == cm) value = std::max(value, 1 + best(mask & ~cm));
    memo[mask] = value;
    return value;
  };
  // Reconstruct.
  std::vector<Copy> copies;
  std::uint32_t mask = n == 32 ? ~0u : ((1u << n) - 1);
  while (std::popcount(mask) >= h) {
    const int v = std::countr_zero(mask);
    const int target = best(mask);
    if (target == 0) break;
    bool took = false;
    for (const auto& [cm, copy] : by_low[v])
      if ((cm & mask) == cm && 1 + best(mask & ~cm) == target) {
        copies.push_back(copy);
        mask &= ~cm;
        took = true;
        break;
      }
    if (!took) mask &= ~(1u << v);
  }
  return make_packing(g, h0, std::move(copies));
}

std::vector<std::vector<int>> rotating_multipartite_coloring(const Graph& h0, int r) {
  Coloring base = proper_coloring(h0, r);
  std::vector<std::vector<int>> out;
  for (int i = 0; i < r; ++i) {
    std::vector<int> col(static_cast<std::size_t>(h0.n()));
    for (Vertex v = 0; v < h0.n(); ++v) col[v] = ((base.color[v] - i) % r + r) % r;
    out.push_back(std::move(col));
  }
  return out;
}

namespace {

int chromatic_number(const Graph& h0) {
  for (int r = 1; r <= std::max<Vertex>(1, h0.n()); ++r) {
    try {
      proper_coloring(h0, r);
      return r;
    } catch (const NoColoringExists&) {
    }
  }
  return h0.n();
}

}  // namespace

PackResult almost_perfect_pack(const Graph& gp, const Graph& h0, const PackParams& params, Seed seed) {
  const Vertex n = gp.n();
  const int h = h0.n();
  if (h == 0) throw PreconditionError("almost_perfect_pack: empty H0");
  const int r = params.r > 0 ? params.r : chromatic_number(h0);
  PackResult res;
  res.report.min_degree_ok = gp.min_degree() >= (1.0 - 1.0 / r + params.gamma) * n * params.p - 1e-9;
  if (params.require_min_degree && !res.report.min_degree_ok)
    throw PreconditionError("almost_perfect_pack: min degree below (1 - 1/r + gamma) n p");
  Rng rng(seed);
  const Seed spanning_seed = rng.fork(), engine_seed = rng.fork(), blowup_seed = rng.fork(), fallback_seed = rng.fork();

  bool indep = false;
  for (Vertex v = 0; v < h; ++v) indep = indep || has_independent_neighborhood(h0, v);
  if (params.spanning_route && indep && n % h == 0) {
    EmbedParams ep = params.embed;
    ep.r = r;
    ep.gamma = params.gamma;
    ep.p = params.p;
    ep.eps = params.eps;
    ep.xi0 = params.xi0;
    ep.require_min_degree = params.require_min_degree;
    ep.engine = params.engine;
    try {
      Graph H = disjoint_copies(h0, n / h);
      auto sp = embed_spanning(gp, H, ep, spanning_seed);
      std::vector<Copy> copies(static_cast<std::size_t>(n / h));
      for (Vertex c = 0; c < n / h; ++c)
        for (Vertex a = 0; a < h; ++a) copies[c].push_back(sp.embedding.g[c * h + a]);
      res.packing = make_packing(gp, h0, std::move(copies));
      res.report.route = "spanning";
      res.report.bad_set = sp.partition.B.size();
      return res;
    } catch (const Error& e) {
      res.report.spanning_failure = e.what();
    }
  }

  res.report.route = "columns";
  EngineConfig ecfg = params.engine;
  ecfg.require_min_degree = params.require_min_degree;
  EngineResult eng;
  try {
    eng = build_partition_engine(gp, r, params.gamma, params.p, params.eps, params.xi0, engine_seed, ecfg);
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError("partition", e.what());
  }
  const ClusterPartition& P = eng.partition;
  const int k = P.k;
  res.report.bad_set = P.B.size();
  CopyFinder finder(gp, h0);

  // Cover B with copies inside B and the cores.
  Bitset allowed(static_cast<std::size_t>(n), P.B);
  for (const auto& core : P.core.cells)
    for (Vertex v : core) allowed.set(v);
  std::vector<Copy> copies;
  Bitset in_copy(static_cast<std::size_t>(n));
  std::size_t untried = P.B.size();
  for (Vertex b : P.B) {
    if (params.b_cover_threshold > 0 && static_cast<int>(untried) < params.b_cover_threshold) break;
    --untried;
    if (in_copy.test(b)) continue;
    auto found = finder.find(b, allowed, params.search_budget);
    if (!found.copy) continue;
    for (Vertex u : *found.copy) {
      allowed.reset(u);
      in_copy.set(u);
    }
    copies.push_back(*found.copy);
  }
  res.report.b_copies = copies.size();
  for (Vertex b : P.B) res.report.b_residual += !in_copy.test(b);

  // Divisibility.
  Grid<int> delta(k, r);
  for (int c = 0; c < k * r; ++c)
    for (Vertex v : P.core.cells[c]) delta.cells[c] += in_copy.test(v);
  const long long n_prime = static_cast<long long>(n) - static_cast<long long>(P.B.size());
  long long used = 0;
  for (int c = 0; c < k * r; ++c) used += delta.cells[c];
  res.report.t.assign(static_cast<std::size_t>(k), 0);
  for (int i = 0; i + 1 < k; ++i) {
    int low = P.m.at(i, 0) - delta.at(i, 0);
    for (int j = 1; j < r; ++j) low = std::min(low, P.m.at(i, j) - delta.at(i, j));
    res.report.t[i] = std::max(0, low / h * h);
    used += static_cast<long long>(r) * res.report.t[i];
  }
  res.report.t[k - 1] = static_cast<int>(std::max<long long>(0, (n_prime - used) / (static_cast<long long>(r) * h)) * h);
  Grid<int> targets(k, r);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < r; ++j) targets.at(i, j) = res.report.t[i] + delta.at(i, j);
  ClusterPartition resized;
  try {
    resized = resize_partition(gp, P, targets);
  } catch (const Error& e) {
    // Endgame unavailable: greedy on everything outside the B-copies.
    res.report.column_failures.push_back(std::string("resize: ") + e.what());
    Bitset rest(static_cast<std::size_t>(n));
    rest.fill();
    rest.and_not(in_copy);
    Packing fallback = greedy_with(finder, h0, rest, fallback_seed, params.search_budget);
    copies.insert(copies.end(), fallback.copies.begin(), fallback.copies.end());
    res.packing = make_packing(gp, h0, std::move(copies));
    return res;
  }

  // V'_{i,j} = V_{i,j} \ S, trimmed to t_i by dropping the weakest vertices.
  ClusterPartition Q = resized;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < r; ++j) {
      VertexSet part;
      for (Vertex v : resized.V.at(i, j))
        if (!in_copy.test(v)) part.push_back(v);
      const std::size_t want = static_cast<std::size_t>(res.report.t[i]);
      if (part.size() > want) {
        std::vector<std::pair<double, Vertex>> score;
        for (Vertex v : part) {
          double worst = 2.0;
          for (int j2 = 0; j2 < r; ++j2)
            if (j2 != j && !resized.V.at(i, j2).empty())
              worst = std::min(worst, degree_into(gp, v, resized.V.at(i, j2)) /
                                          static_cast<double>(resized.V.at(i, j2).size()));
          score.emplace_back(worst, v);
        }
        std::stable_sort(score.begin(), score.end());
        res.report.trimmed += part.size() - want;
        part.clear();
        for (std::size_t t = score.size() - want; t < score.size(); ++t) part.push_back(score[t].second);
      }
      Q.V.at(i, j) = normalize(std::move(part));
    }

  // Copies per column: t_i / h groups of r copies under the rotating coloring.
  const auto rot = rotating_multipartite_coloring(h0, r);
  std::vector<Cell> f;
  std::vector<int> first_copy(static_cast<std::size_t>(k + 1), 0);
  for (int i = 0; i < k; ++i) {
    const int groups = res.report.t[i] / h;
    for (int q = 0; q < groups * r; ++q)
      for (Vertex a = 0; a < h; ++a) f.push_back(Cell{i, rot[q % r][a]});
    first_copy[i + 1] = first_copy[i] + groups * r;
  }
  const int total_copies = first_copy[k];
  Graph H = disjoint_copies(h0, total_copies);
  HPlan plan;
  plan.k = k;
  plan.r = r;
  plan.f = f;
  plan.W = Grid<VertexSet>(k, r);
  for (Vertex w = 0; w < H.n(); ++w) plan.W.at(f[w]).push_back(w);
  plan.labeling = Labeling::identity(H.n());
  plan.indep.assign(static_cast<std::size_t>(k), {});

  EmbedParams ep = params.embed;
  ep.r = r;
  Embedding emb(H.n());
  std::vector<char> column_ok(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < k; ++i) {
    try {
      emb = blowup_embed(gp, Q, H, plan, emb, ep, blowup_seed, std::vector<int>{i});
      column_ok[i] = 1;
    } catch (const Error& e) {
      res.report.column_failures.push_back("column " + std::to_string(i) + ": " + e.what());
    }
  }
  for (int i = 0; i < k; ++i) {
    if (column_ok[i]) {
      for (int q = first_copy[i]; q < first_copy[i + 1]; ++q) {
        Copy c;
        for (Vertex a = 0; a < h; ++a) c.push_back(emb.g[q * h + a]);
        copies.push_back(std::move(c));
      }
    } else {
      VertexSet column;
      for (int j = 0; j < r; ++j) column = set_union(column, Q.V.at(i, j));
      Bitset col_allowed(static_cast<std::size_t>(n), column);
      Packing fallback = greedy_with(finder, h0, col_allowed, fallback_seed, params.search_budget);
      copies.insert(copies.end(), fallback.copies.begin(), fallback.copies.end());
    }
  }
  res.packing = make_packing(gp, h0, std::move(copies));
  std::string bad = packing_violation(gp, h0, res.packing);
  if (!bad.empty()) throw StageError("validate", bad);
  return res;
}

}  // namespace rgbw
