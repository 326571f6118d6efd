#include "rgbw/bandwidth.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <unordered_set>

#include "rgbw/rng.hpp"

namespace rgbw {

Labeling Labeling::identity(Vertex n) {
  Labeling L;
  L.label.resize(static_cast<std::size_t>(n));
  std::iota(L.label.begin(), L.label.end(), 1);
  return L;
}

Labeling Labeling::from_order(const std::vector<Vertex>& order) {
  Labeling L;
  L.label.assign(order.size(), 0);
  for (std::size_t t = 0; t < order.size(); ++t) L.label[order[t]] = static_cast<int>(t) + 1;
  return L;
}

std::vector<Vertex> Labeling::order() const {
  std::vector<Vertex> out(label.size(), -1);
  for (std::size_t v = 0; v < label.size(); ++v) out[label[v] - 1] = static_cast<Vertex>(v);
  return out;
}

bool Labeling::is_bijection() const {
  std::vector<char> seen(label.size(), 0);
  for (int l : label) {
    if (l < 1 || l > static_cast<int>(label.size()) || seen[l - 1]) return false;
    seen[l - 1] = 1;
  }
  return true;
}

std::vector<int> Coloring::class_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(r), 0);
  for (int c : color) ++sizes[c];
  return sizes;
}

bool is_proper(const Graph& h, const Coloring& c) {
  if (static_cast<Vertex>(c.color.size()) != h.n()) return false;
  for (int x : c.color)
    if (x < 0 || x >= c.r) return false;
  for (auto [u, v] : h.edges())
    if (c.color[u] == c.color[v]) return false;
  return true;
}

int labeling_bandwidth(const Graph& h, const Labeling& L) {
  if (static_cast<Vertex>(L.label.size()) != h.n() || !L.is_bijection())
    throw PreconditionError("labeling_bandwidth: labeling is not a bijection");
  int b = 0;
  for (auto [u, v] : h.edges()) b = std::max(b, std::abs(L.label[u] - L.label[v]));
  return b;
}

int bandwidth_lower_bound(const Graph& h) {
  if (h.edge_count() == 0) return 0;
  int lb = (h.max_degree() + 1) / 2;
  auto comp = components(h);
  std::vector<char> done(static_cast<std::size_t>(h.n()), 0);
  for (Vertex s = 0; s < h.n(); ++s) {
    if (done[comp[s]]) continue;
    done[comp[s]] = 1;
    int size = 0;
    for (int c : comp)
      if (c == comp[s]) ++size;
    if (size < 2) continue;
    int diam = 0;
    for (Vertex v = 0; v < h.n(); ++v) {
      if (comp[v] != comp[s]) continue;
      auto d = bfs_distances(h, {v});
      diam = std::max(diam, *std::max_element(d.begin(), d.end()));
    }
    lb = std::max(lb, (size - 1 + diam - 1) / diam);
  }
  return lb;
}

namespace {

// Decision search: is there a labeling of bandwidth <= b? Positions are 0-based.
// The future of a prefix depends only on the unplaced set and each unplaced
// vertex's deadline relative to the next position, so failed states are cached.
class BandwidthSearch {
 public:
  BandwidthSearch(const Graph& h, int b, std::uint64_t budget, std::uint64_t& nodes)
      : h_(h), n_(h.n()), b_(b), budget_(budget), nodes_(nodes),
        pos_(static_cast<std::size_t>(n_), -1), deadline_(static_cast<std::size_t>(n_), INT_MAX) {}

  bool run() { return dfs(0); }
  const std::vector<Vertex>& order() const { return order_; }

 private:
  bool feasible(int next) const {
    // Unplaced vertices with deadline <= t need distinct slots in [next, t].
    std::vector<int> cnt(static_cast<std::size_t>(b_) + 1, 0);
    for (Vertex w = 0; w < n_; ++w) {
      if (pos_[w] >= 0 || deadline_[w] == INT_MAX) continue;
      int rel = deadline_[w] - next;
      if (rel < 0) return false;
      if (rel <= b_) ++cnt[rel];
    }
    int acc = 0;
    for (int t = 0; t <= b_; ++t) {
      acc += cnt[t];
      if (acc > t + 1) return false;
    }
    return true;
  }

  std::string key(int p) const {
    std::string k(static_cast<std::size_t>(n_), '\0');
    for (Vertex w = 0; w < n_; ++w) {
      if (pos_[w] >= 0)
        k[w] = static_cast<char>(255);
      else if (deadline_[w] == INT_MAX)
        k[w] = static_cast<char>(254);
      else
        k[w] = static_cast<char>(deadline_[w] - p);
    }
    return k;
  }

  bool dfs(int p) {
    if (p == n_) return true;
    if (++nodes_ > budget_) throw BudgetExceeded("exact_bandwidth: search budget exhausted");
    std::string k = key(p);
    if (failed_.count(k)) return false;

    Vertex forced = -1;
    for (Vertex w = 0; w < n_; ++w)
      if (pos_[w] < 0 && deadline_[w] == p) forced = w;

    std::vector<std::pair<Vertex, int>> saved;
    for (Vertex v = 0; v < n_; ++v) {
      if (pos_[v] >= 0 || (forced >= 0 && v != forced)) continue;
      pos_[v] = p;
      order_.push_back(v);
      saved.clear();
      for (Vertex w : h_.neighbors(v))
        if (pos_[w] < 0 && deadline_[w] > p + b_) {
          saved.emplace_back(w, deadline_[w]);
          deadline_[w] = p + b_;
        }
      if (feasible(p + 1) && dfs(p + 1)) return true;
      for (auto [w, d] : saved) deadline_[w] = d;
      order_.pop_back();
      pos_[v] = -1;
    }
    failed_.insert(std::move(k));
    return false;
  }

  const Graph& h_;
  Vertex n_;
  int b_;
  std::uint64_t budget_;
  std::uint64_t& nodes_;
  std::vector<int> pos_;
  std::vector<int> deadline_;
  std::vector<Vertex> order_;
  std::unordered_set<std::string> failed_;
};

}  // namespace

BandwidthResult exact_bandwidth(const Graph& h, std::uint64_t budget) {
  if (h.n() > 250) throw PreconditionError("exact_bandwidth: graph too large for exact search");
  BandwidthResult res;
  if (h.edge_count() == 0) {
    res.labeling = Labeling::identity(h.n());
    return res;
  }
  for (int b = bandwidth_lower_bound(h); b < h.n(); ++b) {
    BandwidthSearch search(h, b, budget, res.nodes);
    if (search.run()) {
      res.value = b;
      res.labeling = Labeling::from_order(search.order());
      return res;
    }
  }
  throw Error("exact_bandwidth: no labeling found (unreachable)");
}

namespace {

std::vector<Vertex> cuthill_mckee(const Graph& h) {
  std::vector<Vertex> order;
  std::vector<char> seen(static_cast<std::size_t>(h.n()), 0);
  auto comp = components(h);
  auto by_degree = [&](Vertex a, Vertex b) { return std::pair(h.degree(a), a) < std::pair(h.degree(b), b); };
  for (Vertex s = 0; s < h.n(); ++s) {
    if (seen[s]) continue;
    // Pseudo-peripheral start: hop to the farthest, lowest-degree vertex while eccentricity grows.
    Vertex start = s;
    for (Vertex v = 0; v < h.n(); ++v)
      if (comp[v] == comp[s] && h.degree(v) < h.degree(start)) start = v;
    int ecc = -1;
    while (true) {
      auto d = bfs_distances(h, {start});
      int far = *std::max_element(d.begin(), d.end());
      if (far <= ecc) break;
      ecc = far;
      Vertex next = start;
      for (Vertex v = 0; v < h.n(); ++v)
        if (d[v] == far && (d[next] != far || by_degree(v, next))) next = v;
      start = next;
    }
    std::size_t head = order.size();
    order.push_back(start);
    seen[start] = 1;
    while (head < order.size()) {
      Vertex u = order[head++];
      std::vector<Vertex> nb;
      for (Vertex w : h.neighbors(u))
        if (!seen[w]) {
          seen[w] = 1;
          nb.push_back(w);
        }
      std::sort(nb.begin(), nb.end(), by_degree);
      order.insert(order.end(), nb.begin(), nb.end());
    }
  }
  return order;
}

}  // namespace

Labeling heuristic_labeling(const Graph& h) {
  Labeling cm = Labeling::from_order(cuthill_mckee(h));
  Labeling id = Labeling::identity(h.n());
  return labeling_bandwidth(h, id) <= labeling_bandwidth(h, cm) ? id : cm;
}

namespace {

class ExactColoring {
 public:
  ExactColoring(const Graph& h, int r, std::uint64_t budget) : h_(h), r_(r), budget_(budget), color_(static_cast<std::size_t>(h.n()), -1) {}

  bool run() { return dfs(0, 0); }
  std::vector<int>& colors() { return color_; }

 private:
  bool dfs(int colored, int used) {
    if (colored == h_.n()) return true;
    if (++nodes_ > budget_) throw BudgetExceeded("proper_coloring: search budget exhausted");
    Vertex pick = -1;
    int best_sat = -1, best_deg = -1;
    for (Vertex v = 0; v < h_.n(); ++v) {
      if (color_[v] >= 0) continue;
      std::uint64_t seen = 0;
      int deg = 0;
      for (Vertex w : h_.neighbors(v)) {
        if (color_[w] >= 0)
          seen |= std::uint64_t{1} << color_[w];
        else
          ++deg;
      }
      int sat = std::popcount(seen);
      if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
        pick = v;
        best_sat = sat;
        best_deg = deg;
      }
    }
    // New colors are interchangeable, so only the first unused one is tried.
    for (int c = 0; c < std::min(used + 1, r_); ++c) {
      bool ok = true;
      for (Vertex w : h_.neighbors(pick)) ok = ok && color_[w] != c;
      if (!ok) continue;
      color_[pick] = c;
      if (dfs(colored + 1, std::max(used, c + 1))) return true;
      color_[pick] = -1;
    }
    return false;
  }

  const Graph& h_;
  int r_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<int> color_;
};

// DSATUR with random tie-breaking; returns false if some vertex sees all r colors.
bool dsatur_greedy(const Graph& h, int r, Rng* rng, std::vector<int>& color) {
  const Vertex n = h.n();
  color.assign(static_cast<std::size_t>(n), -1);
  std::vector<std::uint64_t> seen(static_cast<std::size_t>(n), 0);
  std::vector<std::uint64_t> tie(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) tie[v] = rng ? rng->next() : static_cast<std::uint64_t>(v);
  using Key = std::tuple<int, int, std::uint64_t, Vertex>;  // -sat, -deg, tie, v
  std::set<Key> queue;
  std::vector<int> udeg(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) {
    udeg[v] = h.degree(v);
    queue.emplace(0, -udeg[v], tie[v], v);
  }
  while (!queue.empty()) {
    Vertex v = std::get<3>(*queue.begin());
    queue.erase(queue.begin());
    int c = 0;
    while (c < r && ((seen[v] >> c) & 1U)) ++c;
    if (c == r) return false;
    color[v] = c;
    for (Vertex w : h.neighbors(v)) {
      if (color[w] >= 0) continue;
      queue.erase(Key{-std::popcount(seen[w]), -udeg[w], tie[w], w});
      seen[w] |= std::uint64_t{1} << c;
      --udeg[w];
      queue.emplace(-std::popcount(seen[w]), -udeg[w], tie[w], w);
    }
  }
  return true;
}

}  // namespace

Coloring proper_coloring(const Graph& h, int r, std::uint64_t budget, int retries) {
  if (r < 1) throw PreconditionError("proper_coloring: r >= 1");
  if (r > 64) throw PreconditionError("proper_coloring: at most 64 colors supported");
  Coloring out{r, {}};
  if (h.n() <= 30) {
    ExactColoring search(h, r, budget);
    if (!search.run()) throw NoColoringExists("proper_coloring: no proper " + std::to_string(r) + "-coloring exists");
    out.color = std::move(search.colors());
    return out;
  }
  if (dsatur_greedy(h, r, nullptr, out.color)) return out;
  Rng rng(Seed{0x5eed});
  for (int t = 0; t < retries; ++t)
    if (dsatur_greedy(h, r, &rng, out.color)) return out;
  throw BudgetExceeded("proper_coloring: DSATUR found no " + std::to_string(r) + "-coloring in " +
                       std::to_string(retries + 1) + " attempts");
}

Coloring balance_coloring(const Graph& h, const Labeling& L, const Coloring& c) {
  auto comp = components(h);
  int ncomp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::vector<int>> sizes(static_cast<std::size_t>(ncomp), std::vector<int>(static_cast<std::size_t>(c.r), 0));
  for (Vertex v = 0; v < h.n(); ++v) ++sizes[comp[v]][c.color[v]];
  std::vector<std::vector<int>> perm(static_cast<std::size_t>(ncomp));
  std::vector<long long> running(static_cast<std::size_t>(c.r), 0);
  std::vector<char> done(static_cast<std::size_t>(ncomp), 0);
  for (Vertex v : L.order()) {
    int k = comp[v];
    if (done[k]) continue;
    done[k] = 1;
    // Largest local class goes to the globally smallest color, and so on.
    std::vector<int> local(static_cast<std::size_t>(c.r)), global(static_cast<std::size_t>(c.r));
    std::iota(local.begin(), local.end(), 0);
    std::iota(global.begin(), global.end(), 0);
    std::stable_sort(local.begin(), local.end(), [&](int a, int b) { return sizes[k][a] > sizes[k][b]; });
    std::stable_sort(global.begin(), global.end(), [&](int a, int b) { return running[a] < running[b]; });
    perm[k].assign(static_cast<std::size_t>(c.r), 0);
    for (int t = 0; t < c.r; ++t) {
      perm[k][local[t]] = global[t];
      running[global[t]] += sizes[k][local[t]];
    }
  }
  Coloring out{c.r, c.color};
  for (Vertex v = 0; v < h.n(); ++v) out.color[v] = perm[comp[v]][c.color[v]];
  return out;
}

bool has_independent_neighborhood(const Graph& h, Vertex v) {
  auto nb = h.neighbors(v);
  VertexSet nv(nb.begin(), nb.end());
  for (Vertex u : nv)
    if (degree_into(h, u, nv) > 0) return false;
  return true;
}

bool IndependentNeighborhoodReport::all_windows_covered() const {
  return std::all_of(windows.begin(), windows.end(), [](const WindowWitness& w) { return w.witness >= 0; });
}

IndependentNeighborhoodReport find_independent_neighborhood_vertices(const Graph& h, const Labeling& L, int window) {
  if (window < 1) throw PreconditionError("find_independent_neighborhood_vertices: window >= 1");
  const int n = h.n();
  auto order = L.order();
  // next_ok[t]: smallest label >= t whose vertex qualifies (n+1 if none).
  std::vector<int> next_ok(static_cast<std::size_t>(n) + 2, n + 1);
  for (int t = n; t >= 1; --t) next_ok[t] = has_independent_neighborhood(h, order[t - 1]) ? t : next_ok[t + 1];
  IndependentNeighborhoodReport rep;
  const int last_start = std::max(1, n - window);
  for (int a = 1; a <= last_start && n > 0; ++a) {
    int t = next_ok[a];
    WindowWitness w{a, -1};
    if (t <= std::min(n, a + window)) w.witness = order[t - 1];
    if (w.witness >= 0) rep.witnesses.push_back(w.witness);
    rep.windows.push_back(w);
  }
  rep.witnesses = normalize(std::move(rep.witnesses));
  return rep;
}

}  // namespace rgbw
