// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are pinned below.
#include <CLI11.hpp>
#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "rgbw/adversary.hpp"
#include "rgbw/bandwidth.hpp"
#include "rgbw/embedder.hpp"
#include "rgbw/experiment.hpp"
#include "rgbw/packing.hpp"
#include "rgbw/probharness.hpp"
#include "rgbw/regularity.hpp"
#include "rgbw/rng.hpp"

using namespace rgbw;

namespace {

// ---- pinned tolerances ----
constexpr double kBlockerMaxSeconds = 300.0;   // criterion 1, per seed
constexpr double kPackMaxSeconds = 600.0;      // criterion 2, per seed
constexpr int kSeedsNeeded = 9;                // of 10, criteria 2, 3, 8(i)
constexpr double kOracleEquality = 0.80;       // criterion 5
constexpr double kMixingSlackPerVertex = 1e-6; // criterion 6 (inside expander_mixing_check)
constexpr double kSpectralTol = 1e-6;          // criterion 6
constexpr int kPerturbNeeded = 95;             // of 100, criterion 7
constexpr double kRegularityEps = 0.25;        // criterion 7 base eps at 200x200
constexpr std::size_t kBadSetCap = 20;         // criterion 8
constexpr int kCleanSeedsNeeded = 95;          // of 100, criteria 8 and 9

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::uint64_t derived(std::uint64_t seed, std::uint64_t salt) { return seed * 1000003ULL + salt; }

struct Rows {
  std::ostringstream body;
  void add(int criterion, std::uint64_t seed, const std::string& key, const std::string& value) {
    body << criterion << ',' << seed << ',' << key << ',' << value << '\n';
  }
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

void report(int id, const std::string& name, const Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << name << ": " << o.detail << std::endl;
}

EmbedParams desk_embed(double p, int r) {
  EmbedParams e;
  e.r = r;
  e.gamma = 0.1;
  e.p = p;
  e.eps = 0.2;
  e.plan.beta_xi_constant = 0.5;
  e.plan.min_part_factor = 20;
  e.plan.min_indep_per_column = 64;
  return e;
}

// ---- criterion 1 ----

struct BlockerRun {
  std::size_t blocked = 0;
  std::size_t triangles_at_blocked = 0;
  std::size_t uncovered = 0;
  bool valid = false;
  double seconds = 0.0;
};

BlockerRun run_blocker(std::uint64_t seed) {
  const auto t0 = Clock::now();
  const Vertex n = 4000;
  const double p = 0.2, eps = 0.3;
  Graph g = generate_gnp(n, p, Seed{seed});
  auto blk = triangle_blocker(g, p, eps, Seed{derived(seed, 1)});
  BlockerRun out;
  out.blocked = blk.report.blocked_set.size();
  const Graph& gp = blk.graph;
  for (Vertex x : blk.report.blocked_set) {
    const auto& nb = gp.neighbors(x);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) out.triangles_at_blocked += gp.adjacent(nb[i], nb[j]);
  }
  PackParams pp;
  pp.r = 3;
  pp.gamma = 0.1;
  pp.p = p;
  pp.eps = eps;
  pp.require_min_degree = false;
  pp.embed = desk_embed(p, 3);
  pp.engine.require_min_degree = false;
  auto res = almost_perfect_pack(gp, complete_graph(3), pp, Seed{derived(seed, 2)});
  out.uncovered = res.packing.uncovered.size();
  out.valid = packing_violation(gp, complete_graph(3), res.packing).empty();
  out.seconds = seconds_since(t0);
  return out;
}

Outcome criterion1(Rows& rows, std::vector<std::string>& first_rows) {
  const std::size_t expected = static_cast<std::size_t>(blocked_set_size(0.2, 0.3));
  bool ok = expected == 2;
  double worst = 0.0;
  std::size_t min_unc = ~std::size_t{0};
  for (std::uint64_t s = 1; s <= 10; ++s) {
    BlockerRun r = run_blocker(s);
    ok = ok && r.blocked == expected && r.triangles_at_blocked == 0 && r.uncovered >= expected && r.valid &&
         r.seconds <= kBlockerMaxSeconds;
    worst = std::max(worst, r.seconds);
    min_unc = std::min(min_unc, r.uncovered);
    rows.add(1, s, "blocked", std::to_string(r.blocked));
    rows.add(1, s, "triangles_at_blocked", std::to_string(r.triangles_at_blocked));
    rows.add(1, s, "uncovered", std::to_string(r.uncovered));
    rows.add(1, s, "valid", std::to_string(r.valid));
    if (s == 1) first_rows.push_back(std::to_string(r.blocked) + "," + std::to_string(r.uncovered));
  }
  std::ostringstream d;
  d << "|X| = " << expected << ", min uncovered " << min_unc << " over 10 seeds, worst " << worst << " s/seed";
  return {ok, d.str()};
}

// ---- criterion 2 ----

Graph pruned_host(Vertex n, double p, double factor, std::uint64_t seed) {
  Graph g = generate_gnp(n, p, Seed{seed});
  return prune_to_floor(g, static_cast<int>(std::ceil(factor * n * p)), Seed{derived(seed, 1)}).graph;
}

Outcome criterion2(Rows& rows, std::vector<std::string>& first_rows) {
  int perfect = 0;
  bool ok = true;
  double worst = 0.0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const auto t0 = Clock::now();
    Graph gp = pruned_host(2000, 0.6, 0.6, s);
    PackParams pp;
    pp.r = 2;
    pp.gamma = 0.1;
    pp.p = 0.6;
    pp.embed = desk_embed(0.6, 2);
    std::size_t unc = 2000;
    std::string route = "error";
    bool valid = false;
    try {
      auto res = almost_perfect_pack(gp, cycle_graph(4), pp, Seed{derived(s, 2)});
      unc = res.packing.uncovered.size();
      route = res.report.route;
      valid = packing_violation(gp, cycle_graph(4), res.packing).empty();
    } catch (const Error& e) {
      route = "error";
    }
    const double secs = seconds_since(t0);
    worst = std::max(worst, secs);
    perfect += unc == 0 && valid;
    ok = ok && secs <= kPackMaxSeconds && (valid || route == "error");
    rows.add(2, s, "route", route);
    rows.add(2, s, "uncovered", std::to_string(unc));
    if (s == 1) first_rows.push_back(route + "," + std::to_string(unc));
  }
  std::ostringstream d;
  d << perfect << "/10 perfect (need " << kSeedsNeeded << "), worst " << worst << " s/seed";
  return {ok && perfect >= kSeedsNeeded, d.str()};
}

// ---- criterion 3 ----

Outcome criterion3(Rows& rows, std::vector<std::string>& first_rows) {
  const Vertex n = 2000;
  Graph h = named_graph("C4-factor+path:400", n);
  const int block_bw = labeling_bandwidth(h, Labeling::identity(n));
  int good = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    Graph gp = pruned_host(n, 0.6, 0.6, s);
    std::string verdict;
    try {
      auto res = embed_spanning(gp, h, desk_embed(0.6, 2), Seed{derived(s, 2)});
      verdict = embedding_violation(gp, h, res.embedding.g, true);
      if (verdict.empty()) ++good;
      else verdict = "invalid: " + verdict;
    } catch (const StageError& e) {
      verdict = "stage " + e.stage();
    }
    rows.add(3, s, "result", verdict.empty() ? "ok" : verdict.substr(0, verdict.find(':')));
    if (s == 1) first_rows.push_back(verdict.empty() ? "ok" : verdict);
  }
  std::ostringstream d;
  d << good << "/10 valid total embeddings (need " << kSeedsNeeded << "), block-labeling bandwidth " << block_bw;
  return {good >= kSeedsNeeded && block_bw <= 4, d.str()};
}

// ---- criterion 4 ----

int brute_bandwidth(const Graph& h) {
  std::vector<int> perm(static_cast<std::size_t>(h.n()));
  std::iota(perm.begin(), perm.end(), 0);
  const auto edges = h.edges();
  int best = std::max(0, h.n() - 1);
  do {
    int w = 0;
    for (auto [a, b] : edges) {
      w = std::max(w, std::abs(perm[a] - perm[b]));
      if (w >= best) break;
    }
    best = std::min(best, w);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return edges.empty() ? 0 : best;
}

Outcome criterion4() {
  Rng rng(Seed{4004});
  int agree = 0, heuristic_ok = 0;
  const int total = 200;
  for (int t = 0; t < total; ++t) {
    const Vertex n = 4 + static_cast<Vertex>(rng.below(6));  // 4..9
    const double p = 0.2 + 0.1 * static_cast<double>(rng.below(6));
    Graph g = generate_gnp(n, p, rng.fork());
    const int exact = exact_bandwidth(g).value;
    agree += exact == brute_bandwidth(g);
    heuristic_ok += labeling_bandwidth(g, heuristic_labeling(g)) >= exact;
  }
  const int c8sq = exact_bandwidth(power_of_cycle(8, 2)).value;
  std::ostringstream d;
  d << agree << "/" << total << " exact = brute force, " << heuristic_ok << "/" << total
    << " heuristic >= exact, bw(C8^2) = " << c8sq;
  return {agree == total && heuristic_ok == total && c8sq == 4, d.str()};
}

// ---- criterion 5 ----

Outcome criterion5() {
  int instances = 0, bounded = 0, valid = 0, checked = 0, tri_equal = 0, tri_total = 0;
  Graph k3 = complete_graph(3);
  auto one = [&](const Graph& g, const Graph& h0, std::uint64_t seed, bool triangle_instance) {
    Packing gr = greedy_pack(g, h0, {}, Seed{seed});
    Packing ls = local_search_pack(g, h0, gr);
    Packing ex = exact_max_pack(g, h0);
    ++instances;
    bounded += ls.size() <= ex.size() && gr.size() <= ls.size();
    for (const Packing* p : {&gr, &ls, &ex}) {
      ++checked;
      valid += packing_violation(g, h0, *p).empty();
    }
    if (triangle_instance) {
      ++tri_total;
      tri_equal += ls.size() == ex.size();
    }
  };
  for (std::uint64_t s = 1; s <= 200; ++s) one(generate_gnp(12, 0.5, Seed{derived(s, 5)}), k3, s, true);
  for (std::uint64_t s = 1; s <= 50; ++s)
    one(generate_gnp(11, 0.6, Seed{derived(s, 6)}), cycle_graph(4), s, false);
  const double share = static_cast<double>(tri_equal) / tri_total;
  std::ostringstream d;
  d << instances << " instances, local <= exact on " << bounded << ", validator " << valid << "/" << checked
    << ", equality on " << tri_equal << "/" << tri_total << " G(12,0.5) triangle instances";
  return {instances >= 200 && bounded == instances && valid == checked && share >= kOracleEquality, d.str()};
}

// ---- criterion 6 ----

Outcome criterion6() {
  auto c8 = expander_mixing_check(cycle_graph(8), std::sqrt(2.0), MixingMode::Exhaustive);
  std::size_t violations = c8.check.failures;
  int graphs = 0;
  for (std::uint64_t s = 1; s <= 50; ++s) {
    const Vertex n = static_cast<Vertex>(4 + 2 * (s % 4));  // 4, 6, 8, 10
    Graph g = random_regular(n, 3, Seed{derived(s, 6)});
    auto prof = second_eigenvalue(g);
    violations += expander_mixing_check(g, prof.lambda, MixingMode::Exhaustive).check.failures;
    ++graphs;
  }
  double worst_err = 0.0;
  int spectra = 0;
  for (std::uint64_t s = 1; s <= 40; ++s) {
    const Vertex n = static_cast<Vertex>(5 + s);  // 6..45
    Graph g = s % 2 ? generate_gnp(n, 0.3, Seed{derived(s, 7)})
                    : random_regular(n % 2 ? n + 1 : n, 3 + static_cast<int>(s % 5), Seed{derived(s, 7)});
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(g.n(), g.n());
    for (auto [a, b] : g.edges()) A(a, b) = A(b, a) = 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const auto& ev = es.eigenvalues();
    auto prof = second_eigenvalue(g);
    const double dense_lambda = std::max(ev[g.n() - 2], -ev[0]);
    worst_err = std::max({worst_err, std::abs(prof.lambda - dense_lambda), std::abs(prof.lambda2 - ev[g.n() - 2]),
                          std::abs(prof.lambda_min - ev[0])});
    ++spectra;
  }
  std::ostringstream d;
  d << "C8 + " << graphs << " cubic graphs: " << violations << " violations (slack " << kMixingSlackPerVertex
    << " n); spectral error " << worst_err << " over " << spectra << " graphs";
  return {violations == 0 && worst_err <= kSpectralTol, d.str()};
}

// ---- criterion 7 ----

VertexSet range(Vertex lo, Vertex hi) {
  VertexSet s(static_cast<std::size_t>(hi - lo));
  std::iota(s.begin(), s.end(), lo);
  return s;
}

Graph random_bipartite(int a, int b, double p, Seed seed) {
  Rng rng(seed);
  std::vector<Edge> e;
  for (int x = 0; x < a; ++x)
    for (int y = 0; y < b; ++y)
      if (rng.bernoulli(p)) e.emplace_back(x, a + y);
  return Graph::from_edges(a + b, e);
}

Outcome criterion7() {
  const double eps = kRegularityEps, alpha = 0.04, d = 0.3;
  const std::uint64_t budget = 5000;
  int instances = 0, held = 0, draws = 0;
  for (std::uint64_t s = 1; instances < 100 && draws < 200; ++s, ++draws) {
    Graph g = random_bipartite(208, 200, 0.5, Seed{derived(s, 7)});
    VertexSet A = range(0, 200), B = range(208, 408);
    if (check_regularity(g, A, B, eps, budget, Seed{s}).refuted) continue;
    ++instances;
    // Perturbation: swap alpha|A| = 8 vertices of A.
    VertexSet A2 = set_union(range(8, 200), range(200, 208));
    auto [dh, eh] = perturbed_parameters(d, eps, alpha, 0.0);
    (void)dh;
    bool ok = !check_regularity(g, A2, B, std::min(eh, 1.0), budget, Seed{s}).refuted;
    // Shrink to super-regular on S = K2, check (d - 2 eps, eps / (1 - eps)).
    auto res = restrict_to_superregular(g, {A, B}, complete_graph(2), d, eps, true);
    auto sup = check_super_regularity(g, res.clusters[0], res.clusters[1], d - 2 * eps, eps / (1 - eps), budget, Seed{s});
    ok = ok && sup.ok;
    held += ok;
  }
  // Planted anomalies: exactly the planted vertices are removed / flagged.
  int planted_ok = 0;
  const int planted_runs = 10;
  for (std::uint64_t s = 1; s <= planted_runs; ++s) {
    const int size = 100;
    Graph base = generate_gnp(3 * size, 0.5, Seed{derived(s, 71)});
    std::vector<VertexSet> clusters{range(0, size), range(size, 2 * size), range(2 * size, 3 * size)};
    VertexSet planted = range(0, 10);
    std::vector<Edge> drop;
    for (Vertex v : planted)
      for (Vertex w : clusters[1])
        if (base.adjacent(v, w)) drop.emplace_back(v, w);
    Graph g = remove_edges(base, drop);
    auto res = restrict_to_superregular(g, clusters, complete_graph(3), 0.3, 0.1, false);
    const bool restrict_exact = res.deficient[0] == planted && res.deficient[1].empty() && res.deficient[2].empty();
    VertexSet bad = find_bad_set(g, clusters, 0.3, 0.5);
    const bool bad_has = std::includes(bad.begin(), bad.end(), planted.begin(), planted.end());
    planted_ok += restrict_exact && bad_has;
  }
  std::ostringstream d_;
  d_ << held << "/" << instances << " unrefuted after perturbation and shrink (need " << kPerturbNeeded
     << ", eps " << eps << " at 200x200), planted " << planted_ok << "/" << planted_runs;
  return {instances == 100 && held >= kPerturbNeeded && planted_ok == planted_runs, d_.str()};
}

// ---- criterion 8 ----

Outcome criterion8() {
  const double alpha = 2.0 / 3.0, gamma = 0.1, p = 0.5;
  const int r = 3;
  EngineConfig ec;
  ec.k = 3;  // clusters of ~220; at k = 4 pairs of ~165 are refuted at eps 0.2
  int inherit = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    Graph gp = pruned_host(2000, p, alpha + gamma, s);
    try {
      auto eng = build_partition_engine(gp, r, gamma, p, 0.2, 0.05, Seed{derived(s, 8)}, ec);
      inherit += check_min_degree_inheritance(gp, eng.R, alpha, gamma, p).passes;
    } catch (const Error&) {
    }
  }
  int planted_in_B = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    Graph gp = pruned_host(2000, p, alpha + gamma, s);
    // Vertex 0 loses its edges to half of the vertices.
    std::vector<Edge> drop;
    for (Vertex u : gp.neighbors(0))
      if (u % 2 == 0) drop.emplace_back(0, u);
    Graph planted = remove_edges(gp, drop);
    EngineConfig pc = ec;
    pc.require_min_degree = false;
    bool engine_hit = false;
    try {
      auto eng = build_partition_engine(planted, r, gamma, p, 0.2, 0.05, Seed{derived(s, 8)}, pc);
      engine_hit = contains(eng.partition.B, 0);
    } catch (const Error&) {
    }
    std::vector<VertexSet> halves{range(0, 1000), range(1000, 2000)};
    Graph g = generate_gnp(2000, p, Seed{derived(s, 81)});
    std::vector<Edge> drop2;
    for (Vertex u : g.neighbors(5))
      if (u < 1000) drop2.emplace_back(5, u);
    const bool direct_hit = contains(find_bad_set(remove_edges(g, drop2), halves, 0.1, p), 5);
    planted_in_B += engine_hit && direct_hit;
  }
  int small_B = 0;
  std::size_t worst = 0, total = 0;
  for (std::uint64_t s = 1; s <= 100; ++s) {
    Graph g = generate_gnp(2000, p, Seed{derived(s, 82)});
    Rng rng(Seed{derived(s, 83)});
    std::vector<VertexSet> sets;
    for (int t = 0; t < 10; ++t) sets.push_back(normalize(rng.sample(2000, 400)));
    const std::size_t b = find_bad_set(g, sets, 0.1, p).size();
    small_B += b <= kBadSetCap;
    worst = std::max(worst, b);
    total += b;
  }
  std::ostringstream d;
  d << "inheritance " << inherit << "/10 (need " << kSeedsNeeded << "), planted in B " << planted_in_B
    << "/10, |B| <= " << kBadSetCap << " on " << small_B << "/100 (need " << kCleanSeedsNeeded << "; mean |B| "
    << total / 100.0 << ", max " << worst << ")";
  return {inherit >= kSeedsNeeded && planted_in_B == 10 && small_B >= kCleanSeedsNeeded, d.str()};
}

// ---- criterion 9 ----

Outcome criterion9() {
  Lemma61Config cfg;
  cfg.p = 0.5;
  cfg.alpha = 0.1;
  cfg.set_trials = 0;
  int clean[3] = {0, 0, 0}, all_clean = 0;
  for (std::uint64_t s = 1; s <= 100; ++s) {
    Graph g = generate_gnp(2000, 0.5, Seed{derived(s, 9)});
    auto reps = verify_lemma61(g, cfg, Seed{derived(s, 91)});
    bool all = true;
    for (int i = 0; i < 3; ++i) {
      clean[i] += reps[i].failures == 0;
      all = all && reps[i].failures == 0;
    }
    all_clean += all;
  }
  // Planted anomalies for (iv) and (v), checked against direct counts.
  int planted_ok = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const double p = 0.5, a = 0.1;
    Graph g = generate_gnp(400, p, Seed{derived(s, 92)});
    Rng rng(Seed{derived(s, 93)});
    VertexSet X = normalize(rng.sample(400, 8));
    Vertex v = 0;
    while (contains(X, v)) ++v;
    std::vector<Edge> drop;
    for (Vertex x : X)
      if (g.adjacent(v, x)) drop.emplace_back(std::min(v, x), std::max(v, x));
    Graph h = remove_edges(g, drop);
    VertexSet viol = lemma61_iv_violators(h, X, p, a);
    VertexSet direct;
    for (Vertex u = 0; u < h.n(); ++u) {
      if (contains(X, u)) continue;
      int deg = 0;
      for (Vertex x : X) deg += h.adjacent(u, x);
      if (deg < (1 - a) * X.size() * p || deg > (1 + a) * X.size() * p) direct.push_back(u);
    }
    // (v): an edge {v, w} with w outside X; v has no X-neighbors left.
    Vertex w = -1;
    for (Vertex u : h.neighbors(v))
      if (!contains(X, u)) {
        w = u;
        break;
      }
    auto bad_edges = lemma61_v_violators(h, X, p, a);
    const Edge planted_edge{std::min(v, w), std::max(v, w)};
    std::size_t direct_v = 0;
    for (auto [y, z] : h.edges()) {
      if (contains(X, y) || contains(X, z)) continue;
      int common = 0;
      for (Vertex x : X) common += h.adjacent(y, x) && h.adjacent(z, x);
      direct_v += common < (1 - a) * X.size() * p * p;
    }
    planted_ok += contains(viol, v) && viol == direct && w >= 0 &&
                  std::find(bad_edges.begin(), bad_edges.end(), planted_edge) != bad_edges.end() &&
                  bad_edges.size() == direct_v;
  }
  auto ch = chernoff_tail_check(100, 0.5, 15.0, 100000, Seed{909});
  std::ostringstream d;
  d << "(i) " << clean[0] << "/100, (ii) " << clean[1] << "/100, (iii) " << clean[2] << "/100 clean, all three "
    << all_clean << "/100 (need " << kCleanSeedsNeeded << "); planted (iv)/(v) " << planted_ok
    << "/10; Chernoff empirical " << ch.empirical << " vs exact " << ch.exact_tail << " (se " << ch.std_error << ")";
  return {all_clean >= kCleanSeedsNeeded && planted_ok == 10 && ch.matches_exact, d.str()};
}

// ---- criterion 10 ----

Outcome criterion10(const std::vector<std::string>& first_rows) {
  std::vector<std::string> configs = {
      "command = pack\nn = 4000\np = 0.2\nh0 = K3\nadversary = triangle_blocker\neps = 0.3\nseeds = 1..2\n",
      "command = pack\nn = 2000\np = 0.6\nr = 2\nh0 = C4\nadversary = prune_to_floor\nseeds = 1..2\n",
      "command = embed\nn = 2000\np = 0.6\nr = 2\nh = C4-factor+path:400\nadversary = prune_to_floor\nseeds = 1..2\n",
      "command = verify\ncheck = lemma61\nn = 1000\np = 0.5\nseeds = 1..2\n",
      "command = verify\ncheck = chernoff\nn = 100\np = 0.5\nlambda = 15\ntrials = 20000\nseeds = 1..3\n",
  };
  int identical = 0;
  for (const auto& text : configs) {
    ExperimentConfig a = default_config("pack");
    apply_config_text(a, text);
    ExperimentConfig b = default_config("pack");
    apply_config_text(b, text);
    identical += run_experiment(a).csv == run_experiment(b).csv;
  }
  // The suite's own first-seed rows, recomputed.
  std::vector<std::string> again;
  BlockerRun r1 = run_blocker(1);
  again.push_back(std::to_string(r1.blocked) + "," + std::to_string(r1.uncovered));
  const bool own = first_rows.empty() || first_rows[0] == again[0];
  std::ostringstream d;
  d << identical << "/" << configs.size() << " experiment CSV bodies byte-identical on rerun, suite rows "
    << (own ? "identical" : "differ");
  return {identical == static_cast<int>(configs.size()) && own, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::vector<int> only;
  std::string csv_path = "acceptance.csv";
  app.add_option("--only", only, "criteria to run (default: all)")->delimiter(',');
  app.add_option("--csv", csv_path, "per-seed rows (deterministic body)");
  CLI11_PARSE(app, argc, argv);
  auto want = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

  Rows rows;
  std::vector<std::string> first_rows;
  bool all = true;
  auto run = [&](int id, const std::string& name, const std::function<Outcome()>& f) {
    if (!want(id)) return;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    o.detail += "  [" + std::to_string(static_cast<int>(seconds_since(t0))) + " s]";
    report(id, name, o);
    all = all && o.pass;
  };
  run(1, "blocker soundness", [&] { return criterion1(rows, first_rows); });
  run(2, "perfect C4 packing", [&] { return criterion2(rows, first_rows); });
  run(3, "spanning embedding", [&] { return criterion3(rows, first_rows); });
  run(4, "bandwidth oracle", criterion4);
  run(5, "packing oracle", criterion5);
  run(6, "expander mixing and spectrum", criterion6);
  run(7, "regularity perturbation", criterion7);
  run(8, "degree inheritance and bad set", criterion8);
  run(9, "random graph properties", criterion9);
  run(10, "reproducibility", [&] { return criterion10(first_rows); });

  std::ofstream(csv_path) << "criterion,seed,key,value\n" << rows.body.str();
  return all ? 0 : 1;
}
