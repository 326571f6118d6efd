#include "rgbw/plan.hpp"

#include <algorithm>
#include <cmath>

namespace rgbw {

namespace {

int min_indep_required(const PlanConfig& cfg, double beta) {
  if (cfg.min_indep_per_column < 0) return 0;
  return cfg.min_indep_per_column > 0 ? cfg.min_indep_per_column : static_cast<int>(std::ceil(1.0 / beta - 1e-9));
}

}  // namespace

HPlan plan_H(const Graph& h, const Labeling& L, const Coloring& C, int k, const Grid<int>& m, double beta, double xi,
             const PlanConfig& cfg) {
  const int n = h.n();
  const int r = C.r;
  if (k < 1 || r < 1) throw ClauseViolation("pre", "need k >= 1 and r >= 1");
  if (m.k != k || m.r != r) throw ClauseViolation("pre", "size grid does not match k x r");
  if (!is_r_equitable(m)) throw ClauseViolation("pre", "sizes are not r-equitable");
  long long total = 0;
  for (int x : m.cells) total += x;
  if (total != n) throw ClauseViolation("pre", "sizes sum to " + std::to_string(total) + ", H has " + std::to_string(n));
  if (!(beta > 0.0 && xi > 0.0)) throw ClauseViolation("pre", "beta and xi must be positive");
  if (beta > xi * xi / (cfg.beta_xi_constant * r * r * r) + 1e-15)
    throw ClauseViolation("pre", "beta exceeds xi^2 / (" + std::to_string(cfg.beta_xi_constant) + " r^3)");
  for (int x : m.cells)
    if (x < cfg.min_part_factor * beta * n - 1e-9)
      throw ClauseViolation("pre", "some m(i,j) is below " + std::to_string(cfg.min_part_factor) + " beta n");
  const int bw = labeling_bandwidth(h, L);
  if (bw > beta * n + 1e-9) throw ClauseViolation("pre", "labeling bandwidth " + std::to_string(bw) + " exceeds beta n");
  if (!is_proper(h, C)) throw ClauseViolation("pre", "coloring is not a proper r-coloring");

  // crossing[t]: edges {u, v} with L(u) <= t < L(v), for a cut after label t.
  std::vector<int> diff(static_cast<std::size_t>(n) + 2, 0);
  for (auto [u, v] : h.edges()) {
    int a = std::min(L.label[u], L.label[v]);
    int b = std::max(L.label[u], L.label[v]);
    ++diff[a];
    --diff[b];
  }
  std::vector<int> crossing(static_cast<std::size_t>(n) + 1, 0);
  for (int t = 1; t <= n; ++t) crossing[t] = crossing[t - 1] + diff[t];

  HPlan plan;
  plan.k = k;
  plan.labeling = L;
  plan.r = r;
  plan.beta = beta;
  plan.xi = xi;
  const int slack = static_cast<int>(std::floor(xi * n / 4.0));
  int ideal = 0;
  int prev = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < r; ++j) ideal += m.at(i, j);
    if (i == k - 1) {
      plan.cuts.push_back(n);
      break;
    }
    int lo = std::max(prev + 1, ideal - slack);
    int hi = std::min(n - 1, ideal + slack);
    if (lo > hi) throw ClauseViolation("b", "no room for cut " + std::to_string(i + 1));
    // Fewest crossing edges; then closest to the ideal cut; then earliest.
    int best = lo;
    for (int t = lo; t <= hi; ++t)
      if (crossing[t] < crossing[best] || (crossing[t] == crossing[best] && std::abs(t - ideal) < std::abs(best - ideal)))
        best = t;
    plan.cuts.push_back(best);
    prev = best;
  }

  auto order = L.order();
  plan.f.assign(static_cast<std::size_t>(n), Cell{});
  plan.W = Grid<VertexSet>(k, r);
  int seg = 0;
  for (int t = 1; t <= n; ++t) {
    while (t > plan.cuts[seg]) ++seg;
    Vertex v = order[t - 1];
    plan.f[v] = Cell{seg, C.color[v]};
    plan.W.at(seg, C.color[v]).push_back(v);
  }
  for (auto& w : plan.W.cells) w = normalize(std::move(w));

  for (int i = 0; i + 1 < k; ++i) {
    const int cut = plan.cuts[i];
    for (auto [u, v] : h.edges()) {
      int a = L.label[u], b = L.label[v];
      if (std::min(a, b) <= cut && cut < std::max(a, b)) plan.X.push_back(a < b ? u : v);
    }
  }
  plan.X = normalize(std::move(plan.X));

  auto dist = bfs_distances(h, plan.X, 3);
  plan.indep.assign(static_cast<std::size_t>(k), {});
  for (Vertex v = 0; v < n; ++v)
    if (dist[v] < 0 && has_independent_neighborhood(h, v)) plan.indep[plan.f[v].i].push_back(v);

  validate_plan(h, plan, m, cfg);
  return plan;
}

void validate_plan(const Graph& h, const HPlan& plan, const Grid<int>& m, const PlanConfig& cfg) {
  const int n = h.n();
  const int k = plan.k, r = plan.r;
  if (static_cast<int>(plan.f.size()) != n) throw ClauseViolation("pre", "f does not cover V(H)");
  for (const Cell& c : plan.f)
    if (c.i < 0 || c.i >= k || c.j < 0 || c.j >= r) throw ClauseViolation("pre", "f maps outside the grid");

  if (static_cast<double>(plan.X.size()) > k * r * plan.xi * n + 1e-9)
    throw ClauseViolation("a", "|X| = " + std::to_string(plan.X.size()) + " exceeds k r xi n");

  Grid<int> count(k, r, 0);
  for (const Cell& c : plan.f) ++count.at(c);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < r; ++j) {
      double dev = std::abs(count.at(i, j) - m.at(i, j));
      if (dev > plan.xi * n + 1e-9)
        throw ClauseViolation("b", "|W(" + std::to_string(i) + "," + std::to_string(j) + ")| = " +
                                       std::to_string(count.at(i, j)) + " vs m = " + std::to_string(m.at(i, j)));
    }

  std::vector<char> in_x(static_cast<std::size_t>(n), 0);
  for (Vertex x : plan.X) in_x[x] = 1;
  for (auto [u, v] : h.edges()) {
    const Cell a = plan.f[u], b = plan.f[v];
    if (a.j == b.j || std::abs(a.i - b.i) > 1)
      throw ClauseViolation("c", "edge " + std::to_string(u) + "-" + std::to_string(v) + " leaves C_k^r");
    if (!in_x[u] && !in_x[v] && a.i != b.i)
      throw ClauseViolation("d", "edge " + std::to_string(u) + "-" + std::to_string(v) + " outside X leaves K_k^r");
  }

  // (e): recount from scratch with explicit distance layers and pairwise adjacency.
  std::vector<int> layer(static_cast<std::size_t>(n), -1);
  std::vector<Vertex> frontier(plan.X.begin(), plan.X.end());
  for (Vertex x : frontier) layer[x] = 0;
  for (int d = 1; d <= 3; ++d) {
    std::vector<Vertex> next;
    for (Vertex u : frontier)
      for (Vertex w : h.neighbors(u))
        if (layer[w] < 0) {
          layer[w] = d;
          next.push_back(w);
        }
    frontier.swap(next);
  }
  const int need = min_indep_required(cfg, plan.beta);
  std::vector<int> good(static_cast<std::size_t>(k), 0);
  for (Vertex w = 0; w < n; ++w) {
    if (layer[w] >= 0) continue;
    auto nb = h.neighbors(w);
    bool independent = true;
    for (std::size_t a = 0; a < nb.size() && independent; ++a)
      for (std::size_t b = a + 1; b < nb.size() && independent; ++b)
        if (h.adjacent(nb[a], nb[b])) independent = false;
    if (independent) ++good[plan.f[w].i];
  }
  for (int i = 0; i < k; ++i)
    if (good[i] < need)
      throw ClauseViolation("e", "column " + std::to_string(i) + " has " + std::to_string(good[i]) +
                                     " independent-neighborhood vertices away from X, need " + std::to_string(need));
  if (static_cast<int>(plan.indep.size()) == k)
    for (int i = 0; i < k; ++i)
      for (Vertex w : plan.indep[i])
        if (layer[w] >= 0 || plan.f[w].i != i) throw ClauseViolation("e", "indep list entry is not admissible");
}

}  // namespace rgbw
