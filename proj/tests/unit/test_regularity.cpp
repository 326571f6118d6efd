#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rgbw/adversary.hpp"
#include "rgbw/graph.hpp"
#include "rgbw/regularity.hpp"
#include "rgbw/rng.hpp"

using namespace rgbw;

namespace {

VertexSet range(Vertex lo, Vertex hi) {
  VertexSet s(static_cast<std::size_t>(hi - lo));
  std::iota(s.begin(), s.end(), lo);
  return s;
}

// Random bipartite graph between [0, a) and [a, a + b).
Graph random_bipartite(int a, int b, double p, Seed seed) {
  Rng rng(seed);
  std::vector<Edge> e;
  for (int x = 0; x < a; ++x)
    for (int y = 0; y < b; ++y)
      if (rng.bernoulli(p)) e.emplace_back(x, a + y);
  return Graph::from_edges(a + b, e);
}

double density(const Graph& g, const VertexSet& X, const VertexSet& Y) {
  long long e = 0;
  for (Vertex x : X)
    for (Vertex y : Y) e += g.adjacent(x, y);
  return static_cast<double>(e) / (static_cast<double>(X.size()) * static_cast<double>(Y.size()));
}

// Brute force over every subset pair.
double max_deviation_oracle(const Graph& g, const VertexSet& A, const VertexSet& B, double eps) {
  const double d0 = density(g, A, B);
  double best = 0.0;
  for (unsigned ma = 1; ma < (1u << A.size()); ++ma) {
    VertexSet X;
    for (std::size_t t = 0; t < A.size(); ++t)
      if ((ma >> t) & 1u) X.push_back(A[t]);
    if (X.size() < eps * A.size() - 1e-9) continue;
    for (unsigned mb = 1; mb < (1u << B.size()); ++mb) {
      VertexSet Y;
      for (std::size_t t = 0; t < B.size(); ++t)
        if ((mb >> t) & 1u) Y.push_back(B[t]);
      if (Y.size() < eps * B.size() - 1e-9) continue;
      best = std::max(best, std::abs(density(g, X, Y) - d0));
    }
  }
  return best;
}

// Brute force over all bijections.
bool backbone_exists_oracle(const Graph& R, int k, int r) {
  Graph C = backbone_graph(k, r, BackboneKind::C);
  std::vector<int> perm(static_cast<std::size_t>(k * r));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (auto [u, v] : C.edges())
      if (!R.adjacent(perm[u], perm[v])) {
        ok = false;
        break;
      }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

ReducedGraph as_reduced(const Graph& g, int k, int r) {
  ReducedGraph R;
  R.k = k;
  R.r = r;
  R.edges = g;
  return R;
}

}  // namespace

TEST_CASE("min subset size rounds up and is at least one") {
  CHECK(min_subset_size(0.4, 8) == 4);
  CHECK(min_subset_size(0.25, 8) == 2);
  CHECK(min_subset_size(0.01, 8) == 1);
  CHECK(min_subset_size(0.15, 100) == 15);
}

TEST_CASE("complete bipartite pair is exactly unrefuted") {
  Graph g = complete_multipartite({6, 7});
  auto v = check_regularity(g, range(0, 6), range(6, 13), 0.1);
  CHECK_FALSE(v.refuted);
  CHECK(v.mode == CheckMode::Exhaustive);
  CHECK(v.density == doctest::Approx(1.0));
  CHECK(v.max_deviation == doctest::Approx(0.0));
}

TEST_CASE("block-diagonal pair is refuted by the first block") {
  std::vector<Edge> e;
  for (Vertex a = 0; a < 4; ++a)
    for (Vertex b = 8; b < 12; ++b) e.emplace_back(a, b);
  for (Vertex a = 4; a < 8; ++a)
    for (Vertex b = 12; b < 16; ++b) e.emplace_back(a, b);
  Graph g = Graph::from_edges(16, e);
  VertexSet A = range(0, 8), B = range(8, 16);
  auto v = check_regularity(g, A, B, 0.4);
  REQUIRE(v.refuted);
  CHECK(v.mode == CheckMode::Exhaustive);
  CHECK(v.density == doctest::Approx(0.5));
  CHECK(v.witness->first == range(0, 4));
  CHECK(v.witness->second == range(8, 12));
  CHECK(witness_is_valid(g, A, B, 0.4, v));
}

TEST_CASE("exhaustive mode matches a brute-force subset scan") {
  for (std::uint64_t s = 0; s < 12; ++s) {
    Graph g = random_bipartite(5, 6, 0.5, Seed{s});
    VertexSet A = range(0, 5), B = range(5, 11);
    for (double eps : {0.2, 0.35, 0.5}) {
      auto v = check_regularity(g, A, B, eps);
      double oracle = max_deviation_oracle(g, A, B, eps);
      CHECK(v.max_deviation == doctest::Approx(oracle));
      CHECK(v.refuted == (oracle > eps));
      if (v.refuted) CHECK(witness_is_valid(g, A, B, eps, v));
    }
  }
}

TEST_CASE("overlapping or empty sides are rejected") {
  Graph g = complete_graph(6);
  CHECK_THROWS_AS(check_regularity(g, {0, 1, 2}, {2, 3}, 0.3), PreconditionError);
  CHECK_THROWS_AS(check_regularity(g, {}, {2, 3}, 0.3), PreconditionError);
}

TEST_CASE("randomized mode on random bipartite pairs") {
  // Small witness sets in a 100 x 100 pair deviate by about 0.2: eps = 0.15 is
  // refuted with a checkable witness, eps = 0.3 is not.
  int refuted_low = 0, refuted_high = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    Graph g = random_bipartite(100, 100, 0.5, Seed{s});
    VertexSet A = range(0, 100), B = range(100, 200);
    auto low = check_regularity(g, A, B, 0.15, 100000, Seed{s});
    CHECK(low.mode == CheckMode::Randomized);
    if (low.refuted) {
      ++refuted_low;
      CHECK(witness_is_valid(g, A, B, 0.15, low));
    }
    auto high = check_regularity(g, A, B, 0.3, 5000, Seed{s});
    refuted_high += high.refuted;
    CHECK(high.budget_spent <= 5000);
  }
  CHECK(refuted_low == 5);
  CHECK(refuted_high == 0);
}

TEST_CASE("regularity verdicts are reproducible per seed") {
  Graph g = random_bipartite(60, 60, 0.5, Seed{3});
  auto a = check_regularity(g, range(0, 60), range(60, 120), 0.2, 3000, Seed{9});
  auto b = check_regularity(g, range(0, 60), range(60, 120), 0.2, 3000, Seed{9});
  CHECK(a.refuted == b.refuted);
  CHECK(a.budget_spent == b.budget_spent);
  CHECK(a.max_deviation == b.max_deviation);
}

TEST_CASE("super-regularity") {
  Graph g = complete_multipartite({5, 5});
  CHECK(check_super_regularity(g, range(0, 5), range(5, 10), 1.0, 0.2).ok);

  std::vector<Edge> e;
  for (Vertex a = 1; a < 5; ++a)
    for (Vertex b = 5; b < 10; ++b) e.emplace_back(a, b);
  Graph iso = Graph::from_edges(10, e);
  auto v = check_super_regularity(iso, range(0, 5), range(5, 10), 0.1, 0.5);
  CHECK_FALSE(v.ok);
  CHECK_FALSE(v.min_degree_ok);
  CHECK(v.min_degree_violator == 0);

  int pass = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    Graph r = random_bipartite(200, 200, 0.5, Seed{s});
    pass += check_super_regularity(r, range(0, 200), range(200, 400), 0.3, 0.25, 5000, Seed{s}).ok;
  }
  CHECK(pass == 5);
}

TEST_CASE("perturbed parameters") {
  auto [d0, e0] = perturbed_parameters(0.4, 0.2, 0.0, 0.0);
  CHECK(d0 == doctest::Approx(0.4));
  CHECK(e0 == doctest::Approx(0.2));
  auto [d1, e1] = perturbed_parameters(0.5, 0.1, 0.04, 0.09);
  CHECK(d1 == doctest::Approx(0.24));
  CHECK(e1 == doctest::Approx(1.6));
  CHECK_THROWS_AS(perturbed_parameters(0.5, 0.1, -0.1, 0.0), PreconditionError);
  CHECK_THROWS_AS(perturbed_parameters(0.5, 0.1, 0.0, 1.5), PreconditionError);
}

TEST_CASE("perturbing an unrefuted pair keeps it unrefuted at the perturbed parameters") {
  const double eps = 0.25, alpha = 0.04;
  for (std::uint64_t s = 0; s < 4; ++s) {
    // 200 + 8 spare vertices on the A side; swap 8 members of A for the spares.
    Graph g = random_bipartite(208, 200, 0.5, Seed{s});
    VertexSet A = range(0, 200), B = range(208, 408);
    REQUIRE_FALSE(check_regularity(g, A, B, eps, 5000, Seed{s}).refuted);
    VertexSet A2 = set_union(range(8, 200), range(200, 208));
    auto [dh, eh] = perturbed_parameters(0.3, eps, alpha, 0.0);
    CHECK(dh == doctest::Approx(0.22));
    CHECK_FALSE(check_regularity(g, A2, B, std::min(eh, 1.0), 5000, Seed{s}).refuted);
  }
}

TEST_CASE("restrict to super-regular on complete multipartite clusters removes nothing") {
  Graph g = complete_multipartite({20, 20, 20});
  std::vector<VertexSet> clusters{range(0, 20), range(20, 40), range(40, 60)};
  Graph S = complete_graph(3);
  auto res = restrict_to_superregular(g, clusters, S, 0.5, 0.1, false);
  for (int i = 0; i < 3; ++i) {
    CHECK(res.deficient[i].empty());
    CHECK(res.removed[i].empty());
    CHECK(res.clusters[i] == clusters[i]);
  }
  auto padded = restrict_to_superregular(g, clusters, S, 0.5, 0.1, true);
  for (int i = 0; i < 3; ++i) {
    CHECK(padded.deficient[i].empty());
    CHECK(padded.clusters[i].size() == 16);  // ceil((1 - 0.1 * 2) * 20)
  }
}

TEST_CASE("restrict to super-regular removes exactly the planted deficient vertices") {
  const int size = 100;
  const double d = 0.4, eps = 0.1;
  Graph base = generate_gnp(3 * size, 0.5, Seed{21});
  std::vector<VertexSet> clusters{range(0, size), range(size, 2 * size), range(2 * size, 3 * size)};
  // floor(eps * size) vertices of cluster 0 lose all edges into cluster 1.
  VertexSet planted = range(0, 10);
  std::vector<Edge> drop;
  for (Vertex v : planted)
    for (Vertex w : clusters[1])
      if (base.adjacent(v, w)) drop.emplace_back(v, w);
  Graph g = remove_edges(base, drop);
  Graph S = complete_graph(3);
  auto res = restrict_to_superregular(g, clusters, S, d, eps, false);
  CHECK(res.deficient[0] == planted);
  CHECK(res.deficient[1].empty());
  CHECK(res.deficient[2].empty());
  CHECK(res.removed[0] == planted);

  auto padded = restrict_to_superregular(g, clusters, S, d, eps, true);
  const double dd = d - eps * 3;  // d - eps (Delta + 1)
  for (int i = 0; i < 3; ++i) {
    CHECK(padded.clusters[i].size() == 80);
    for (Vertex j : S.neighbors(i))
      for (Vertex v : padded.clusters[i]) CHECK(degree_into(g, v, padded.clusters[j]) >= dd * padded.clusters[j].size());
  }
  for (Vertex v : planted) CHECK_FALSE(contains(padded.clusters[0], v));
}

TEST_CASE("restrict to super-regular rejects too many deficient vertices") {
  std::vector<Edge> e;
  Graph g = complete_multipartite({10, 10});
  std::vector<Edge> drop;
  for (Vertex v = 0; v < 5; ++v)
    for (Vertex w = 10; w < 20; ++w) drop.emplace_back(v, w);
  Graph h = remove_edges(g, drop);
  CHECK_THROWS_AS(restrict_to_superregular(h, {range(0, 10), range(10, 20)}, complete_graph(2), 0.5, 0.1, false),
                  StageError);
}

TEST_CASE("bad set") {
  Graph k = complete_graph(50);
  CHECK(find_bad_set(k, {range(0, 20), range(10, 40)}, 0.01, 1.0).empty());

  Graph g = generate_gnp(1000, 0.5, Seed{5});
  std::vector<VertexSet> sets{range(0, 300), range(300, 600), range(600, 900)};
  std::vector<Edge> drop;
  for (Vertex w : g.neighbors(950))
    if (w < 300) drop.emplace_back(950, w);
  Graph h = remove_edges(g, drop);
  VertexSet B = find_bad_set(h, sets, 0.3, 0.5);
  CHECK(contains(B, 950));
  // Oracle: every member of B violates the band for some set, no other vertex does.
  for (Vertex v = 0; v < h.n(); ++v) {
    bool bad = false;
    for (const auto& S : sets) {
      double size = static_cast<double>(S.size()) - (contains(S, v) ? 1 : 0);
      int deg = 0;
      for (Vertex w : S) deg += h.adjacent(v, w);
      if (deg < 0.7 * size * 0.5 - 1e-9 || deg > 1.3 * size * 0.5 + 1e-9) bad = true;
    }
    CHECK(bad == contains(B, v));
  }
}

TEST_CASE("reduced graph") {
  Graph k = complete_graph(60);
  std::vector<VertexSet> clusters;
  for (int c = 0; c < 6; ++c) clusters.push_back(range(10 * c, 10 * c + 10));
  auto R = build_reduced_graph(k, clusters, 3, 2, 0.5, 0.2);
  CHECK(R.edges.edge_count() == 15);
  CHECK(R.density[1] == doctest::Approx(1.0));

  std::vector<Edge> drop;
  for (Vertex a = 0; a < 10; ++a)
    for (Vertex b = 10; b < 20; ++b) drop.emplace_back(a, b);
  auto R2 = build_reduced_graph(remove_edges(k, drop), clusters, 3, 2, 0.5, 0.2);
  CHECK_FALSE(R2.edges.adjacent(0, 1));
  CHECK(R2.edges.edge_count() == 14);
  CHECK_THROWS_AS(build_reduced_graph(k, clusters, 2, 2, 0.5, 0.2), PreconditionError);
}

TEST_CASE("backbone search") {
  for (int k = 1; k <= 4; ++k)
    for (int r = 1; r <= 4; ++r) {
      auto R = as_reduced(backbone_graph(k, r, BackboneKind::C), k, r);
      auto b = find_backbone(R);
      std::vector<int> id(static_cast<std::size_t>(k * r));
      std::iota(id.begin(), id.end(), 0);
      CHECK(b == id);
      CHECK(backbone_is_valid(R, b));
    }
  auto K = as_reduced(complete_graph(12), 4, 3);
  CHECK(backbone_is_valid(K, find_backbone(K)));
  auto empty = as_reduced(Graph(6), 3, 2);
  CHECK_THROWS_AS(find_backbone(empty), NoBackbone);
  CHECK_THROWS_AS(find_backbone(as_reduced(complete_graph(5), 3, 2)), PreconditionError);
}

TEST_CASE("backbone search agrees with brute force on small reduced graphs") {
  // Complete multipartite minus a perfect matching; vertex v sits in part v % parts.
  for (auto [k, r] : {std::pair{2, 2}, {2, 3}, {3, 2}, {2, 4}, {4, 2}}) {
    const int n = k * r;
    for (int parts : {2, 3, 4}) {
      std::vector<Edge> e;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if (u % parts != v % parts && !(u % 2 == 0 && v == u + 1)) e.emplace_back(u, v);
      auto R = as_reduced(Graph::from_edges(n, e), k, r);
      bool oracle = backbone_exists_oracle(R.edges, k, r);
      try {
        auto b = find_backbone(R);
        CHECK(oracle);
        CHECK(backbone_is_valid(R, b));
      } catch (const NoBackbone&) {
        CHECK_FALSE(oracle);
      }
    }
  }
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto R = as_reduced(generate_gnp(8, 0.75, Seed{s}), 2, 4);
    bool oracle = backbone_exists_oracle(R.edges, 2, 4);
    bool found = true;
    try {
      auto b = find_backbone(R);
      CHECK(backbone_is_valid(R, b));
    } catch (const NoBackbone&) {
      found = false;
    }
    CHECK(found == oracle);
  }
}

TEST_CASE("greedy backbone on large grids") {
  auto R = as_reduced(backbone_graph(7, 4, BackboneKind::C), 7, 4);
  CHECK(backbone_is_valid(R, find_backbone(R)));
}

TEST_CASE("min-degree inheritance on a complete host") {
  Graph k = complete_graph(60);
  std::vector<VertexSet> clusters;
  for (int c = 0; c < 6; ++c) clusters.push_back(range(10 * c, 10 * c + 10));
  auto R = build_reduced_graph(k, clusters, 3, 2, 0.5, 0.2);
  auto rep = check_min_degree_inheritance(k, R, 0.5, 0.1, 1.0);
  CHECK(rep.min_degree_R == 5);
  CHECK(rep.threshold == doctest::Approx(0.575 * 6));
  CHECK(rep.passes);
  CHECK(rep.host_precondition);

  std::vector<Edge> drop;
  for (Vertex a = 0; a < 10; ++a)
    for (Vertex b = 10; b < 20; ++b) drop.emplace_back(a, b);
  auto R2 = build_reduced_graph(remove_edges(k, drop), clusters, 3, 2, 0.5, 0.2);
  CHECK(check_min_degree_inheritance(k, R2, 0.5, 0.1, 1.0).min_degree_R == 4);
}

TEST_CASE("partition engine on a complete host") {
  Graph g = complete_graph(800);
  EngineConfig cfg;
  cfg.k = 2;
  auto res = build_partition_engine(g, 2, 0.1, 1.0, 0.2, 0.05, Seed{1}, cfg);
  const auto& P = res.partition;
  CHECK(P.B.empty());
  CHECK(partition_invariant_violation(g, P) == "");
  CHECK(res.R.edges.edge_count() == 6);
  CHECK(backbone_is_valid(res.R, *res.R.backbone));
  for (int c = 0; c < 4; ++c) CHECK(P.m.cells[c] == 200);
}

TEST_CASE("partition engine on pruned dense random hosts") {
  const Vertex n = 2000;
  const double p = 0.5, gamma = 0.1;
  for (std::uint64_t s = 0; s < 2; ++s) {
    Graph g = generate_gnp(n, p, Seed{s});
    Graph gp = prune_to_floor(g, static_cast<int>(std::ceil(0.6 * n * p)), Seed{s + 100}).graph;
    auto res = build_partition_engine(gp, 2, gamma, p, 0.2, 0.05, Seed{s});
    const auto& P = res.partition;
    CHECK(partition_invariant_violation(gp, P) == "");
    CHECK(backbone_is_valid(res.R, *res.R.backbone));
    CHECK(P.k * P.r == 6);
    CHECK(P.d == doctest::Approx(gamma * p / 90));
    // Min-degree half of super-regularity on every K_k^r pair.
    for (int i = 0; i < P.k; ++i)
      for (int j = 0; j < P.r; ++j)
        for (int j2 = 0; j2 < P.r; ++j2)
          if (j != j2)
            for (Vertex v : P.V.at(i, j)) CHECK(degree_into(gp, v, P.V.at(i, j2)) >= P.d * P.V.at(i, j2).size());
    // Reproducible.
    auto again = build_partition_engine(gp, 2, gamma, p, 0.2, 0.05, Seed{s});
    CHECK(again.partition.V.cells == P.V.cells);
  }
}

TEST_CASE("partition engine checks its preconditions and catches planted bad vertices") {
  const Vertex n = 2000;
  Graph g = generate_gnp(n, 0.5, Seed{8});
  std::vector<Edge> drop;
  for (Vertex w : g.neighbors(0))
    if (w >= n / 2) drop.emplace_back(0, w);
  Graph h = remove_edges(g, drop);
  CHECK_THROWS_AS(build_partition_engine(h, 2, 0.1, 0.5, 0.2, 0.05, Seed{1}), PreconditionError);
  EngineConfig cfg;
  cfg.require_min_degree = false;
  auto res = build_partition_engine(h, 2, 0.1, 0.5, 0.2, 0.05, Seed{1}, cfg);
  CHECK(contains(res.partition.B, 0));
  CHECK(partition_invariant_violation(h, res.partition) == "");
}

TEST_CASE("resize partition") {
  const Vertex n = 1200;
  Graph g = generate_gnp(n, 0.5, Seed{4});
  EngineConfig cfg;
  cfg.k = 2;
  cfg.require_min_degree = false;
  auto res = build_partition_engine(g, 2, 0.1, 0.5, 0.2, 0.05, Seed{2}, cfg);
  const auto& P = res.partition;
  REQUIRE(partition_invariant_violation(g, P) == "");

  std::size_t moves = 99;
  Grid<int> same(P.k, P.r);
  for (int c = 0; c < 4; ++c) same.cells[c] = static_cast<int>(P.V.cells[c].size());
  auto id = resize_partition(g, P, same, &moves);
  CHECK(moves == 0);
  CHECK(id.V.cells == P.V.cells);

  // One vertex from (0,0) to (1,0).
  Grid<int> shifted = same;
  shifted.at(0, 0) -= 1;
  shifted.at(1, 0) += 1;
  auto out = resize_partition(g, P, shifted, &moves);
  CHECK(moves == 1);
  CHECK(out.core.cells == P.core.cells);
  for (int c = 0; c < 4; ++c) {
    CHECK(static_cast<int>(out.V.cells[c].size()) >= shifted.cells[c]);
    CHECK(set_difference(P.core.cells[c], out.V.cells[c]).empty());
  }
  VertexSet moved = set_difference(out.V.at(1, 0), P.V.at(1, 0));
  REQUIRE(moved.size() == 1);
  CHECK(contains(P.V.at(0, 0), moved[0]));
  CHECK(degree_into(g, moved[0], out.V.at(1, 1)) >= P.d * P.m.at(1, 1));

  Grid<int> far = same;
  far.at(0, 0) -= 200;
  far.at(1, 0) += 200;
  CHECK_THROWS_AS(resize_partition(g, P, far), PreconditionError);
}
