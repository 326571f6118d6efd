#include "rgbw/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rgbw/rng.hpp"

namespace rgbw {

int min_subset_size(double eps, std::size_t size) {
  return std::max(1, static_cast<int>(std::ceil(eps * static_cast<double>(size) - 1e-9)));
}

namespace {

// Adjacency between the two sides in local coordinates.
struct PairView {
  std::vector<Bitset> row_a;  // over B-local indices
  std::vector<Bitset> row_b;  // over A-local indices
  std::size_t edges = 0;

  PairView(const Graph& g, const VertexSet& A, const VertexSet& B)
      : row_a(A.size(), Bitset(B.size())), row_b(B.size(), Bitset(A.size())) {
    for (std::size_t a = 0; a < A.size(); ++a) {
      auto nb = g.neighbors(A[a]);
      // Merge-walk the sorted neighbor list against B.
      std::size_t x = 0, y = 0;
      while (x < nb.size() && y < B.size()) {
        if (nb[x] < B[y]) {
          ++x;
        } else if (B[y] < nb[x]) {
          ++y;
        } else {
          row_a[a].set(static_cast<Vertex>(y));
          row_b[y].set(static_cast<Vertex>(a));
          ++edges;
          ++x;
          ++y;
        }
      }
    }
  }
};

struct Candidate {
  Bitset a;  // subset of A-local
  Bitset b;  // subset of B-local
  double deviation = 0.0;
};

// Degrees of every row into `subset`.
std::vector<int> degrees_into(const std::vector<Bitset>& rows, const Bitset& subset) {
  std::vector<int> deg(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) deg[i] = static_cast<int>(rows[i].and_count(subset));
  return deg;
}

// The `s` rows with the highest (or lowest) degree; returns the subset and the edge count.
std::pair<Bitset, long long> extreme_rows(const std::vector<int>& deg, int s, bool highest) {
  std::vector<int> idx(deg.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto cmp = [&](int x, int y) { return highest ? deg[x] > deg[y] : deg[x] < deg[y]; };
  std::nth_element(idx.begin(), idx.begin() + (s - 1), idx.end(), cmp);
  Bitset out(deg.size());
  long long e = 0;
  for (int t = 0; t < s; ++t) {
    out.set(idx[t]);
    e += deg[idx[t]];
  }
  return {out, e};
}

VertexSet to_global(const Bitset& local, const VertexSet& side) {
  VertexSet out;
  local.for_each([&](Vertex v) { out.push_back(side[v]); });
  return out;
}

RegularityVerdict exhaustive_check(const PairView& pv, const VertexSet& A, const VertexSet& B, double eps, double d0,
                                   bool small_is_a) {
  RegularityVerdict v;
  v.mode = CheckMode::Exhaustive;
  v.density = d0;
  const auto& small_rows = small_is_a ? pv.row_b : pv.row_a;  // rows of the large side, bits over small side
  const std::size_t ns = small_is_a ? A.size() : B.size();
  const std::size_t nl = small_is_a ? B.size() : A.size();
  const int s_small = min_subset_size(eps, ns);
  const int s_large = min_subset_size(eps, nl);
  double best = -1.0;
  Bitset best_small, best_large;
  for (std::uint32_t mask = 1; mask < (1u << ns); ++mask) {
    int pc = std::popcount(mask);
    if (pc < s_small) continue;
    Bitset sub(ns);
    for (std::size_t t = 0; t < ns; ++t)
      if ((mask >> t) & 1u) sub.set(static_cast<Vertex>(t));
    auto deg = degrees_into(small_rows, sub);
    std::vector<int> idx(nl);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) { return deg[x] > deg[y]; });
    long long top = 0, bottom = 0;
    for (int s = 1; s <= static_cast<int>(nl); ++s) {
      top += deg[idx[s - 1]];
      bottom += deg[idx[nl - s]];
      if (s < s_large) continue;
      ++v.budget_spent;
      for (int side = 0; side < 2; ++side) {
        long long e = side == 0 ? top : bottom;
        double dev = std::abs(static_cast<double>(e) / (static_cast<double>(pc) * s) - d0);
        if (dev > best) {
          best = dev;
          best_small = sub;
          best_large = Bitset(nl);
          for (int t = 0; t < s; ++t) best_large.set(side == 0 ? idx[t] : idx[nl - 1 - t]);
        }
      }
    }
  }
  v.max_deviation = std::max(0.0, best);
  if (best > eps) {
    v.refuted = true;
    const Bitset& la = small_is_a ? best_small : best_large;
    const Bitset& lb = small_is_a ? best_large : best_small;
    v.witness = std::make_pair(to_global(la, A), to_global(lb, B));
  }
  return v;
}

}  // namespace

RegularityVerdict check_regularity(const Graph& g, const VertexSet& A, const VertexSet& B, double eps,
                                   std::uint64_t budget, Seed seed) {
  if (A.empty() || B.empty()) throw PreconditionError("check_regularity: empty side");
  if (!disjoint(A, B)) throw PreconditionError("check_regularity: sides overlap");
  PairView pv(g, A, B);
  const double d0 = static_cast<double>(pv.edges) / (static_cast<double>(A.size()) * static_cast<double>(B.size()));
  if (std::min(A.size(), B.size()) <= 12) return exhaustive_check(pv, A, B, eps, d0, A.size() <= B.size());

  RegularityVerdict v;
  v.mode = CheckMode::Randomized;
  v.density = d0;
  const int sa = min_subset_size(eps, A.size());
  const int sb = min_subset_size(eps, B.size());
  Rng rng(seed);
  Bitset full_a(A.size()), full_b(B.size());
  full_a.fill();
  full_b.fill();
  const auto deg_a_full = degrees_into(pv.row_a, full_b);
  const auto deg_b_full = degrees_into(pv.row_b, full_a);

  auto evaluate = [&](const Bitset& a, const Bitset& b, long long e) {
    ++v.budget_spent;
    double dev = std::abs(static_cast<double>(e) / (static_cast<double>(a.count()) * static_cast<double>(b.count())) - d0);
    v.max_deviation = std::max(v.max_deviation, dev);
    if (dev > eps) {
      v.refuted = true;
      v.witness = std::make_pair(to_global(a, A), to_global(b, B));
    }
    return v.refuted;
  };

  auto random_subset = [&](std::size_t n, int s) {
    Bitset out(n);
    for (Vertex x : rng.sample(static_cast<Vertex>(n), static_cast<std::size_t>(s))) out.set(x);
    return out;
  };

  std::uint64_t round = 0;
  while (v.budget_spent < budget) {
    // Starting subset on one side, chosen by rotating strategy.
    const bool start_a = (round & 1u) == 0;
    const std::size_t n_start = start_a ? A.size() : B.size();
    const int s_start = start_a ? sa : sb;
    const auto& deg_full = start_a ? deg_a_full : deg_b_full;
    const auto& other_rows = start_a ? pv.row_b : pv.row_a;
    Bitset start;
    switch ((round >> 1) % 5) {
      case 0:
        start = random_subset(n_start, s_start);
        break;
      case 1:
        start = extreme_rows(deg_full, s_start, true).first;
        break;
      case 2:
        start = extreme_rows(deg_full, s_start, false).first;
        break;
      default: {
        // Neighborhood (or non-neighborhood) of a random vertex on the other side.
        std::size_t pivot = rng.below(other_rows.size());
        Bitset pool = other_rows[pivot];
        if ((round >> 1) % 5 == 4) {
          Bitset all(n_start);
          all.fill();
          pool = all.and_not(other_rows[pivot]);
        }
        auto members = pool.members();
        if (static_cast<int>(members.size()) < s_start) {
          start = random_subset(n_start, s_start);
        } else {
          rng.shuffle(members);
          start = Bitset(n_start);
          for (int t = 0; t < s_start; ++t) start.set(members[t]);
        }
      }
    }
    ++round;
    for (int dir = 0; dir < 2 && v.budget_spent < budget; ++dir) {
      const bool highest = dir == 0;
      Bitset cur = start;
      bool cur_is_a = start_a;
      for (int step = 0; step < 4 && v.budget_spent < budget; ++step) {
        const auto& rows = cur_is_a ? pv.row_b : pv.row_a;
        const int s = cur_is_a ? sb : sa;
        auto deg = degrees_into(rows, cur);
        auto [resp, e] = extreme_rows(deg, s, highest);
        bool hit = cur_is_a ? evaluate(cur, resp, e) : evaluate(resp, cur, e);
        if (hit) return v;
        cur = resp;
        cur_is_a = !cur_is_a;
      }
    }
  }
  return v;
}

bool witness_is_valid(const Graph& g, const VertexSet& A, const VertexSet& B, double eps, const RegularityVerdict& v) {
  if (!v.refuted || !v.witness) return false;
  const auto& [a, b] = *v.witness;
  if (!is_normalized(a) || !is_normalized(b)) return false;
  if (!set_difference(a, A).empty() || !set_difference(b, B).empty()) return false;
  if (static_cast<double>(a.size()) < eps * static_cast<double>(A.size()) - 1e-9) return false;
  if (static_cast<double>(b.size()) < eps * static_cast<double>(B.size()) - 1e-9) return false;
  double d_ab = set_stats(g, A, B).d_XY;
  double d_w = set_stats(g, a, b).d_XY;
  return std::abs(d_ab - d_w) > eps;
}

SuperRegularityVerdict check_super_regularity(const Graph& g, const VertexSet& A, const VertexSet& B, double d,
                                              double eps, std::uint64_t budget, Seed seed) {
  SuperRegularityVerdict out;
  out.regularity = check_regularity(g, A, B, eps, budget, seed);
  out.density_ok = out.regularity.density >= d;
  out.min_degree_ok = true;
  for (Vertex a : A)
    if (degree_into(g, a, B) < d * static_cast<double>(B.size())) {
      out.min_degree_ok = false;
      out.min_degree_violator = a;
      break;
    }
  if (out.min_degree_ok)
    for (Vertex b : B)
      if (degree_into(g, b, A) < d * static_cast<double>(A.size())) {
        out.min_degree_ok = false;
        out.min_degree_violator = b;
        break;
      }
  out.ok = out.density_ok && out.min_degree_ok && !out.regularity.refuted;
  return out;
}

std::pair<double, double> perturbed_parameters(double d, double eps, double alpha_hat, double beta_hat) {
  if (alpha_hat < 0 || alpha_hat > 1 || beta_hat < 0 || beta_hat > 1)
    throw PreconditionError("perturbed_parameters: alpha_hat, beta_hat must lie in [0,1]");
  return {d - 2.0 * (alpha_hat + beta_hat), eps + 3.0 * (std::sqrt(alpha_hat) + std::sqrt(beta_hat))};
}

RestrictResult restrict_to_superregular(const Graph& g, const std::vector<VertexSet>& clusters, const Graph& S, double d,
                                        double eps, bool pad) {
  if (S.n() != static_cast<Vertex>(clusters.size()))
    throw PreconditionError("restrict_to_superregular: S must have one vertex per cluster");
  const int delta = S.max_degree();
  const std::size_t nc = clusters.size();
  RestrictResult out;
  out.clusters.resize(nc);
  out.deficient.resize(nc);
  out.removed.resize(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    const VertexSet& Vi = clusters[i];
    const std::size_t keep = static_cast<std::size_t>(std::ceil((1.0 - eps * delta) * static_cast<double>(Vi.size()) - 1e-9));
    const std::size_t allowance = Vi.size() - std::min(keep, Vi.size());
    // Normalized degree toward the worst S-neighbor.
    std::vector<std::pair<double, Vertex>> score;
    score.reserve(Vi.size());
    for (Vertex v : Vi) {
      double worst = 2.0;
      bool deficient = false;
      for (Vertex j : S.neighbors(static_cast<Vertex>(i))) {
        const VertexSet& Vj = clusters[j];
        if (Vj.empty()) continue;
        int deg = degree_into(g, v, Vj);
        if (deg < (d - eps) * static_cast<double>(Vj.size())) deficient = true;
        worst = std::min(worst, deg / static_cast<double>(Vj.size()));
      }
      if (deficient) out.deficient[i].push_back(v);
      score.emplace_back(deficient ? -1.0 : worst, v);
    }
    if (out.deficient[i].size() > allowance)
      throw StageError("restrict_to_superregular", "cluster " + std::to_string(i) + " has " +
                                                       std::to_string(out.deficient[i].size()) +
                                                       " deficient vertices, allowance " + std::to_string(allowance));
    std::size_t drop = pad ? allowance : out.deficient[i].size();
    std::stable_sort(score.begin(), score.end());
    for (std::size_t t = 0; t < score.size(); ++t) (t < drop ? out.removed[i] : out.clusters[i]).push_back(score[t].second);
    out.clusters[i] = normalize(std::move(out.clusters[i]));
    out.removed[i] = normalize(std::move(out.removed[i]));
  }
  return out;
}

VertexSet find_bad_set(const Graph& g, const std::vector<VertexSet>& sets, double eps, double p) {
  std::vector<char> bad(static_cast<std::size_t>(g.n()), 0);
  for (const VertexSet& S : sets) {
    std::vector<char> in(static_cast<std::size_t>(g.n()), 0);
    for (Vertex v : S) in[v] = 1;
    for (Vertex v = 0; v < g.n(); ++v) {
      if (bad[v]) continue;
      const double size = static_cast<double>(S.size()) - (in[v] ? 1.0 : 0.0);
      const int deg = degree_into(g, v, S);
      if (deg < (1.0 - eps) * size * p - 1e-9 || deg > (1.0 + eps) * size * p + 1e-9) bad[v] = 1;
    }
  }
  VertexSet out;
  for (Vertex v = 0; v < g.n(); ++v)
    if (bad[v]) out.push_back(v);
  return out;
}

ReducedGraph build_reduced_graph(const Graph& g, const std::vector<VertexSet>& clusters, int k, int r, double d,
                                 double eps, std::uint64_t budget, Seed seed) {
  const int nc = static_cast<int>(clusters.size());
  if (nc != k * r) throw PreconditionError("build_reduced_graph: need k*r clusters");
  ReducedGraph R;
  R.k = k;
  R.r = r;
  R.d = d;
  R.eps = eps;
  R.density.assign(static_cast<std::size_t>(nc * nc), 0.0);
  Rng rng(seed);
  std::vector<Edge> edges;
  for (int a = 0; a < nc; ++a)
    for (int b = a + 1; b < nc; ++b) {
      Seed pair_seed = rng.fork();
      if (clusters[a].empty() || clusters[b].empty()) continue;
      double dens = set_stats(g, clusters[a], clusters[b]).d_XY;
      R.density[static_cast<std::size_t>(a * nc + b)] = R.density[static_cast<std::size_t>(b * nc + a)] = dens;
      if (dens < d) continue;
      if (!check_regularity(g, clusters[a], clusters[b], eps, budget, pair_seed).refuted) edges.emplace_back(a, b);
    }
  R.edges = Graph::from_edges(nc, std::move(edges));
  return R;
}

bool backbone_is_valid(const ReducedGraph& R, const std::vector<int>& backbone) {
  const int nc = R.k * R.r;
  if (static_cast<int>(backbone.size()) != nc) return false;
  std::vector<char> used(static_cast<std::size_t>(nc), 0);
  for (int x : backbone) {
    if (x < 0 || x >= nc || used[x]) return false;
    used[x] = 1;
  }
  Graph C = backbone_graph(R.k, R.r, BackboneKind::C);
  for (auto [u, v] : C.edges())
    if (!R.edges.adjacent(backbone[u], backbone[v])) return false;
  return true;
}

namespace {

class BackboneSearch {
 public:
  BackboneSearch(const ReducedGraph& R, std::uint64_t budget)
      : R_(R), nc_(R.k * R.r), budget_(budget), image_(static_cast<std::size_t>(nc_), -1), used_(static_cast<std::size_t>(nc_), 0) {}

  bool run() { return place(0); }
  const std::vector<int>& image() const { return image_; }

  bool fits(int cell, int x) const {
    const int i = cell / R_.r, j = cell % R_.r;
    for (int j2 = 0; j2 < j; ++j2)
      if (!R_.edges.adjacent(image_[i * R_.r + j2], x)) return false;
    if (i > 0)
      for (int j2 = 0; j2 < R_.r; ++j2)
        if (j2 != j && !R_.edges.adjacent(image_[(i - 1) * R_.r + j2], x)) return false;
    return true;
  }

 private:
  bool place(int cell) {
    if (cell == nc_) return true;
    if (++nodes_ > budget_) throw BudgetExceeded("find_backbone: search budget exhausted");
    for (int x = 0; x < nc_; ++x) {
      if (used_[x] || !fits(cell, x)) continue;
      image_[cell] = x;
      used_[x] = 1;
      if (place(cell + 1)) return true;
      used_[x] = 0;
      image_[cell] = -1;
    }
    return false;
  }

  const ReducedGraph& R_;
  int nc_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<int> image_;
  std::vector<char> used_;
};

}  // namespace

std::vector<int> find_backbone(const ReducedGraph& R, std::uint64_t budget) {
  const int nc = R.k * R.r;
  if (R.edges.n() != nc) throw PreconditionError("find_backbone: R must have k*r vertices");
  if (nc <= 24) {
    BackboneSearch search(R, budget);
    if (!search.run()) throw NoBackbone("find_backbone: R contains no copy of C_k^r (exhaustive)");
    return search.image();
  }
  // Greedy first fit, no backtracking: failure is not a proof.
  std::vector<int> image(static_cast<std::size_t>(nc), -1);
  std::vector<char> used(static_cast<std::size_t>(nc), 0);
  BackboneSearch probe(R, 0);
  for (int cell = 0; cell < nc; ++cell) {
    int pick = -1;
    for (int x = 0; x < nc && pick < 0; ++x) {
      if (used[x]) continue;
      const int i = cell / R.r, j = cell % R.r;
      bool ok = true;
      for (int j2 = 0; j2 < j && ok; ++j2) ok = R.edges.adjacent(image[i * R.r + j2], x);
      if (i > 0)
        for (int j2 = 0; j2 < R.r && ok; ++j2)
          if (j2 != j) ok = R.edges.adjacent(image[(i - 1) * R.r + j2], x);
      if (ok) pick = x;
    }
    if (pick < 0) throw BudgetExceeded("find_backbone: greedy search failed at cell " + std::to_string(cell));
    image[cell] = pick;
    used[pick] = 1;
  }
  return image;
}

InheritanceReport check_min_degree_inheritance(const Graph& gp, const ReducedGraph& R, double alpha, double gamma,
                                               double p) {
  InheritanceReport rep;
  rep.min_degree_R = R.edges.min_degree();
  const int clusters = R.k * R.r;
  rep.threshold = (alpha + 0.75 * gamma) * clusters;
  rep.passes = rep.min_degree_R >= rep.threshold - 1e-9;
  rep.min_degree_host = gp.min_degree();
  rep.host_precondition = rep.min_degree_host >= (alpha + gamma) * gp.n() * p - 1e-9;
  return rep;
}

namespace {

int choose_k(Vertex n, int r, const EngineConfig& cfg) {
  if (cfg.k > 0) return cfg.k;
  int k = std::max(1, static_cast<int>(std::lround(static_cast<double>(n) / (static_cast<double>(r) * cfg.preferred_cluster_size))));
  while (k > 1 && n / (k * r) < cfg.min_cluster_size) --k;
  while (n / (k * r) > cfg.max_cluster_size) ++k;
  while (k > 1 && k * r > cfg.max_clusters) --k;
  return k;
}

// Smallest ratio deg(v, V_{i,j'}) / |V_{i,j'}| over the other parts of column i.
double column_affinity(const Graph& g, Vertex v, const Grid<VertexSet>& V, int i, int skip_j) {
  double worst = 2.0;
  for (int j = 0; j < V.r; ++j) {
    if (j == skip_j || V.at(i, j).empty()) continue;
    worst = std::min(worst, degree_into(g, v, V.at(i, j)) / static_cast<double>(V.at(i, j).size()));
  }
  return worst;
}

}  // namespace

EngineResult build_partition_engine(const Graph& gp, int r, double gamma, double p, double eps, double xi0, Seed seed,
                                    const EngineConfig& cfg) {
  const Vertex n = gp.n();
  if (r < 1 || !(gamma > 0) || !(p > 0 && p <= 1) || !(eps > 0 && eps < 1))
    throw PreconditionError("build_partition_engine: invalid r, gamma, p or eps");
  const double floor_needed = (1.0 - 1.0 / r + gamma) * n * p;
  if (cfg.require_min_degree && gp.min_degree() < floor_needed - 1e-9)
    throw PreconditionError("build_partition_engine: min degree " + std::to_string(gp.min_degree()) + " below " +
                            std::to_string(floor_needed));
  const double d = cfg.d < 0 ? gamma * p / 90.0 : cfg.d;
  const int k = choose_k(n, r, cfg);
  const int nc = k * r;
  if (n < nc) throw PreconditionError("build_partition_engine: fewer vertices than clusters");

  EngineResult res;
  Rng rng(seed);
  std::vector<Vertex> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  Grid<int> sizes = equitable_sizes(n, k, r);
  std::vector<VertexSet> clusters(static_cast<std::size_t>(nc));
  std::size_t at = 0;
  for (int c = 0; c < nc; ++c) {
    clusters[c].assign(order.begin() + static_cast<long>(at), order.begin() + static_cast<long>(at + sizes.cells[c]));
    at += static_cast<std::size_t>(sizes.cells[c]);
    clusters[c] = normalize(std::move(clusters[c]));
  }

  res.realized_density = n > 1 ? 2.0 * static_cast<double>(gp.edge_count()) / (static_cast<double>(n) * (n - 1)) : 0.0;
  VertexSet B = find_bad_set(gp, clusters, cfg.eps_bad, res.realized_density);
  for (auto& c : clusters) c = set_difference(c, B);

  ReducedGraph R0 = build_reduced_graph(gp, clusters, k, r, d, eps, cfg.regularity_budget, rng.fork());
  std::vector<int> backbone;
  try {
    backbone = find_backbone(R0);
  } catch (const Error& e) {
    throw StageError("backbone", e.what());
  }

  // Relabel clusters and R so that cell c is R-vertex backbone[c].
  Grid<VertexSet> U(k, r);
  for (int c = 0; c < nc; ++c) U.cells[c] = clusters[backbone[c]];
  ReducedGraph R = R0;
  {
    std::vector<Edge> edges;
    for (int a = 0; a < nc; ++a)
      for (int b = a + 1; b < nc; ++b)
        if (R0.edges.adjacent(backbone[a], backbone[b])) edges.emplace_back(a, b);
    R.edges = Graph::from_edges(nc, std::move(edges));
    for (int a = 0; a < nc; ++a)
      for (int b = 0; b < nc; ++b) R.density[a * nc + b] = R0.density[backbone[a] * nc + backbone[b]];
    std::vector<int> id(static_cast<std::size_t>(nc));
    std::iota(id.begin(), id.end(), 0);
    R.backbone = id;
  }

  // Super-regularity on K_k^r: drop deficient vertices.
  Graph S = backbone_graph(k, r, BackboneKind::K);
  RestrictResult rs;
  try {
    rs = restrict_to_superregular(gp, U.cells, S, d, eps, false);
  } catch (const StageError& e) {
    throw StageError("superregular", e.what());
  }
  std::vector<Vertex> pool;
  for (int c = 0; c < nc; ++c) {
    U.cells[c] = rs.clusters[c];
    pool.insert(pool.end(), rs.removed[c].begin(), rs.removed[c].end());
    res.deficient_removed += rs.deficient[c].size();
  }
  // Equalize each row to its smallest part; the surplus joins the pool.
  for (int i = 0; i < k; ++i) {
    std::size_t low = U.at(i, 0).size();
    for (int j = 1; j < r; ++j) low = std::min(low, U.at(i, j).size());
    for (int j = 0; j < r; ++j) {
      VertexSet& part = U.at(i, j);
      if (part.size() == low) continue;
      std::vector<std::pair<double, Vertex>> score;
      for (Vertex v : part) score.emplace_back(column_affinity(gp, v, U, i, j), v);
      std::stable_sort(score.begin(), score.end());
      VertexSet keep;
      for (std::size_t t = 0; t < score.size(); ++t) {
        if (t < part.size() - low)
          pool.push_back(score[t].second);
        else
          keep.push_back(score[t].second);
      }
      part = normalize(std::move(keep));
    }
  }
  std::sort(pool.begin(), pool.end());
  VertexSet original;
  for (const auto& part : U.cells) original.insert(original.end(), part.begin(), part.end());
  original = normalize(std::move(original));

  // Send each displaced vertex to a good column (>= d|U_{i,j}| neighbors in every part),
  // least-assigned first, then to the smallest part of that column.
  std::vector<int> assigned(static_cast<std::size_t>(k), 0);
  for (Vertex u : pool) {
    int pick = -1;
    for (int i = 0; i < k; ++i) {
      bool good = true;
      for (int j = 0; j < r && good; ++j) good = degree_into(gp, u, U.at(i, j)) >= d * static_cast<double>(U.at(i, j).size());
      if (good && (pick < 0 || assigned[i] < assigned[pick])) pick = i;
    }
    if (pick < 0) throw StageError("redistribute", "vertex " + std::to_string(u) + " has no good index");
    ++assigned[pick];
    int jbest = 0;
    for (int j = 1; j < r; ++j)
      if (U.at(pick, j).size() < U.at(pick, jbest).size()) jbest = j;
    VertexSet& part = U.at(pick, jbest);
    part.insert(std::upper_bound(part.begin(), part.end(), u), u);
    ++res.redistributed;
  }

  ClusterPartition& P = res.partition;
  P.k = k;
  P.r = r;
  P.B = B;
  P.V = U;
  P.m = Grid<int>(k, r);
  P.core = Grid<VertexSet>(k, r);
  P.d = d;
  P.eps = eps;
  P.xi0 = xi0;
  P.b0 = static_cast<int>(B.size());
  P.K0 = std::max(1, cfg.max_clusters / r);
  for (int c = 0; c < nc; ++c) {
    const VertexSet& part = U.cells[c];
    P.m.cells[c] = static_cast<int>(part.size());
    const std::size_t want = static_cast<std::size_t>(std::ceil((1.0 - eps) * static_cast<double>(part.size()) - 1e-9));
    VertexSet core;
    for (Vertex v : part)
      if (core.size() < want && contains(original, v)) core.push_back(v);
    for (Vertex v : part)
      if (core.size() < want && !contains(original, v)) core.push_back(v);
    P.core.cells[c] = normalize(std::move(core));
  }
  res.R = std::move(R);
  return res;
}

ClusterPartition resize_partition(const Graph& g, const ClusterPartition& part, const Grid<int>& targets,
                                  std::size_t* moves) {
  const int k = part.k, r = part.r;
  if (targets.k != k || targets.r != r) throw PreconditionError("resize_partition: target grid mismatch");
  long long total = 0, available = 0;
  for (int c = 0; c < k * r; ++c) {
    total += targets.cells[c];
    available += static_cast<long long>(part.V.cells[c].size());
    if (std::abs(targets.cells[c] - part.m.cells[c]) > part.xi0 * g.n() + 1e-9)
      throw PreconditionError("resize_partition: target for cell " + std::to_string(c) + " outside the xi0 band");
  }
  if (total > static_cast<long long>(g.n()) - static_cast<long long>(part.B.size()) || total > available)
    throw PreconditionError("resize_partition: targets exceed n - |B|");

  ClusterPartition out = part;
  std::size_t moved = 0;
  auto surplus = [&](int c) { return static_cast<long long>(out.V.cells[c].size()) - targets.cells[c]; };
  const int nc = k * r;
  while (true) {
    int need = -1;
    for (int c = 0; c < nc && need < 0; ++c)
      if (surplus(c) < 0) need = c;
    if (need < 0) break;
    // BFS from the deficient cell over cells in the same or an adjacent column.
    std::vector<int> parent(static_cast<std::size_t>(nc), -2);
    std::vector<int> queue{need};
    parent[need] = -1;
    int source = -1;
    for (std::size_t h = 0; h < queue.size() && source < 0; ++h) {
      int c = queue[h];
      for (int x = 0; x < nc; ++x) {
        if (parent[x] != -2 || std::abs(x / r - c / r) > 1) continue;
        parent[x] = c;
        queue.push_back(x);
        if (surplus(x) > 0 && out.V.cells[x].size() > out.core.cells[x].size()) {
          source = x;
          break;
        }
      }
    }
    if (source < 0) throw StageError("resize", "no cell with movable surplus reaches cell " + std::to_string(need));
    // Move one vertex per hop from source toward `need`.
    for (int from = source; from != need; from = parent[from]) {
      const int to = parent[from];
      const int ti = to / r, tj = to % r;
      Vertex best = -1;
      double best_aff = -1.0;
      for (Vertex v : out.V.cells[from]) {
        if (contains(out.core.cells[from], v)) continue;
        bool ok = true;
        double aff = 2.0;
        for (int j = 0; j < r && ok; ++j) {
          if (j == tj) continue;
          const VertexSet& dest = out.V.at(ti, j);
          int deg = degree_into(g, v, dest);
          ok = deg >= part.d * part.m.at(ti, j);
          if (!dest.empty()) aff = std::min(aff, deg / static_cast<double>(dest.size()));
        }
        if (ok && aff > best_aff) {
          best = v;
          best_aff = aff;
        }
      }
      if (best < 0)
        throw StageError("resize", "no movable vertex from cell " + std::to_string(from) + " to cell " + std::to_string(to));
      auto& src = out.V.cells[from];
      src.erase(std::lower_bound(src.begin(), src.end(), best));
      auto& dst = out.V.cells[to];
      dst.insert(std::upper_bound(dst.begin(), dst.end(), best), best);
      ++moved;
    }
  }
  if (moves) *moves = moved;
  return out;
}

std::string partition_invariant_violation(const Graph& g, const ClusterPartition& part) {
  std::vector<int> owner(static_cast<std::size_t>(g.n()), -1);
  for (Vertex b : part.B) owner[b] = -2;
  long long msum = 0;
  for (int c = 0; c < part.k * part.r; ++c) {
    for (Vertex v : part.V.cells[c]) {
      if (owner[v] != -1) return "vertex " + std::to_string(v) + " appears twice (or in B and a cluster)";
      owner[v] = c;
    }
    if (!set_difference(part.core.cells[c], part.V.cells[c]).empty()) return "core not inside cluster " + std::to_string(c);
    const double need = (1.0 - part.eps) * part.m.cells[c];
    if (static_cast<double>(part.core.cells[c].size()) < need - 1e-9) return "core too small in cluster " + std::to_string(c);
    if (static_cast<int>(part.core.cells[c].size()) > part.m.cells[c]) return "core larger than m in cluster " + std::to_string(c);
    msum += part.m.cells[c];
  }
  for (Vertex v = 0; v < g.n(); ++v)
    if (owner[v] == -1) return "vertex " + std::to_string(v) + " is in no cluster and not in B";
  if (!is_r_equitable(part.m)) return "targets are not r-equitable";
  if (msum + static_cast<long long>(part.B.size()) != g.n()) return "sum of m plus |B| differs from n";
  return "";
}

}  // namespace rgbw
