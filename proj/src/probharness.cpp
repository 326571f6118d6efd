#include "rgbw/probharness.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "rgbw/bandwidth.hpp"
#include "rgbw/bitset.hpp"
#include "rgbw/packing.hpp"
#include "rgbw/regularity.hpp"
#include "rgbw/rng.hpp"

namespace rgbw {

double binomial_two_sided_tail(int n, double p, double lambda) {
  if (n < 0 || p < 0.0 || p > 1.0) throw PreconditionError("binomial_two_sided_tail: bad parameters");
  const double mean = n * p;
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    if (std::abs(k - mean) < lambda - 1e-9) continue;
    double logpmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    if (k > 0) logpmf += k * std::log(p);
    if (k < n) logpmf += (n - k) * std::log1p(-p);
    if ((p == 0.0 && k > 0) || (p == 1.0 && k < n)) continue;
    total += std::exp(logpmf);
  }
  return std::min(1.0, total);
}

ChernoffReport chernoff_tail_check(int n, double p, double lambda_dev, std::size_t trials, Seed seed) {
  if (lambda_dev < 0.0 || lambda_dev > n * p) throw PreconditionError("chernoff_tail_check: need 0 <= lambda <= np");
  if (trials == 0) throw PreconditionError("chernoff_tail_check: no trials");
  ChernoffReport rep;
  rep.check.property = "chernoff";
  rep.check.trials = trials;
  rep.check.seed = seed.value;
  Rng rng(seed);
  const double mean = n * p;
  for (std::size_t t = 0; t < trials; ++t) {
    int x = 0;
    for (int i = 0; i < n; ++i) x += rng.bernoulli(p);
    const double dev = std::abs(x - mean);
    rep.check.worst_deviation = std::max(rep.check.worst_deviation, dev);
    if (dev >= lambda_dev - 1e-9) ++rep.hits;
  }
  rep.empirical = static_cast<double>(rep.hits) / static_cast<double>(trials);
  rep.std_error = std::sqrt(rep.empirical * (1.0 - rep.empirical) / static_cast<double>(trials));
  rep.bound = mean > 0.0 ? std::exp(-lambda_dev * lambda_dev / (3.0 * mean)) : 1.0;
  rep.exact_tail = binomial_two_sided_tail(n, p, lambda_dev);
  rep.exceeds_bound = rep.empirical > rep.bound + 2.0 * rep.std_error;
  const double exact_se = std::sqrt(rep.exact_tail * (1.0 - rep.exact_tail) / static_cast<double>(trials));
  rep.matches_exact = std::abs(rep.empirical - rep.exact_tail) <= 2.0 * exact_se + 1e-12;
  rep.check.failures = rep.exceeds_bound ? 1 : 0;
  rep.check.violations = rep.hits;
  return rep;
}

VertexSet lemma61_iv_violators(const Graph& g, const VertexSet& X, double p, double alpha) {
  const double target = static_cast<double>(X.size()) * p;
  VertexSet out;
  std::vector<char> inX(static_cast<std::size_t>(g.n()), 0);
  for (Vertex x : X) inX[x] = 1;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (inX[v]) continue;
    const int deg = degree_into(g, v, X);
    if (deg < (1.0 - alpha) * target - 1e-9 || deg > (1.0 + alpha) * target + 1e-9) out.push_back(v);
  }
  return out;
}

std::vector<Edge> lemma61_v_violators(const Graph& g, const VertexSet& X, double p, double alpha) {
  const double floor = (1.0 - alpha) * static_cast<double>(X.size()) * p * p;
  // Neighborhood in X as a bitset over positions of X.
  std::vector<Bitset> nx(static_cast<std::size_t>(g.n()), Bitset(X.size()));
  std::vector<char> inX(static_cast<std::size_t>(g.n()), 0);
  for (std::size_t i = 0; i < X.size(); ++i) {
    inX[X[i]] = 1;
    for (Vertex u : g.neighbors(X[i])) nx[u].set(static_cast<Vertex>(i));
  }
  std::vector<Edge> out;
  for (auto [v, w] : g.edges()) {
    if (inX[v] || inX[w]) continue;
    if (static_cast<double>(nx[v].and_count(nx[w])) < floor - 1e-9) out.emplace_back(v, w);
  }
  return out;
}

std::vector<CheckReport> verify_lemma61(const Graph& g, const Lemma61Config& cfg, Seed seed) {
  const Vertex n = g.n();
  const double p = cfg.p, a = cfg.alpha;
  auto base = [&](const std::string& id) {
    CheckReport r;
    r.property = id;
    r.alpha = a;
    r.C = cfg.C;
    r.seed = seed.value;
    return r;
  };
  std::vector<CheckReport> out;

  CheckReport r1 = base("i");
  const double deg_target = n * p;
  for (Vertex v = 0; v < n; ++v) {
    const double dev = std::abs(g.degree(v) - deg_target) / deg_target;
    r1.worst_deviation = std::max(r1.worst_deviation, dev);
    if (dev > a + 1e-12) ++r1.failures;
  }
  r1.trials = static_cast<std::size_t>(n);
  r1.violations = r1.failures;
  out.push_back(r1);

  CheckReport r2 = base("ii");
  const auto adj = g.adjacency_bits();
  const double co_target = n * p * p;
  for (Vertex v = 0; v < n; ++v)
    for (Vertex w = v + 1; w < n; ++w) {
      const double dev = std::abs(static_cast<double>(adj[v].and_count(adj[w])) - co_target) / co_target;
      r2.worst_deviation = std::max(r2.worst_deviation, dev);
      if (dev > a + 1e-12) ++r2.failures;
    }
  r2.trials = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  r2.violations = r2.failures;
  out.push_back(r2);

  Rng rng(seed);
  CheckReport r3 = base("iii");
  const Vertex lo = std::max<Vertex>(1, (n + 9) / 10), hi = std::max<Vertex>(lo, n / 2);
  for (std::size_t t = 0; t < cfg.pair_trials; ++t) {
    const Vertex sx = lo + static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
    const Vertex sy = lo + static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
    std::vector<Vertex> perm(static_cast<std::size_t>(n));
    for (Vertex v = 0; v < n; ++v) perm[v] = v;
    rng.shuffle(perm);
    VertexSet X = normalize(VertexSet(perm.begin(), perm.begin() + sx));
    VertexSet Y = normalize(VertexSet(perm.begin() + sx, perm.begin() + std::min<Vertex>(n, sx + sy)));
    if (Y.empty()) continue;
    const double target = static_cast<double>(X.size()) * static_cast<double>(Y.size()) * p;
    const Bitset ybits(static_cast<std::size_t>(n), Y);
    std::size_t e = 0;
    for (Vertex x : X) e += adj[x].and_count(ybits);
    const double dev = std::abs(static_cast<double>(e) - target) / target;
    r3.worst_deviation = std::max(r3.worst_deviation, dev);
    if (dev > a + 1e-12) ++r3.failures;
    ++r3.trials;
  }
  r3.violations = r3.failures;
  out.push_back(r3);

  // (iv) and (v) carry no failure count: the bound's constant is unspecified.
  const Vertex cap = std::clamp<Vertex>(static_cast<Vertex>(std::floor(cfg.C / (p * p))), 1, std::max<Vertex>(1, n / 2));
  CheckReport r4 = base("iv"), r5 = base("v");
  double rate4 = 0.0, rate5 = 0.0;
  const double edge_scale = static_cast<double>(n) * n * p;
  for (std::size_t t = 0; t < cfg.set_trials; ++t) {
    const Vertex s = 1 + static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(cap)));
    VertexSet X = normalize(rng.sample(n, static_cast<std::size_t>(s)));
    const std::size_t c4 = lemma61_iv_violators(g, X, p, a).size();
    const std::size_t c5 = lemma61_v_violators(g, X, p, a).size();
    r4.violations += c4;
    r5.violations += c5;
    r4.worst_deviation = std::max(r4.worst_deviation, static_cast<double>(c4) / n);
    r5.worst_deviation = std::max(r5.worst_deviation, static_cast<double>(c5) / edge_scale);
    rate4 += -std::log(std::max<double>(static_cast<double>(c4), 0.5) / n) / (s * p);
    rate5 += -std::log(std::max<double>(static_cast<double>(c5), 0.5) / edge_scale) / (s * p * p);
  }
  r4.trials = r5.trials = cfg.set_trials;
  if (cfg.set_trials > 0) {
    r4.fitted_rate = rate4 / static_cast<double>(cfg.set_trials);
    r5.fitted_rate = rate5 / static_cast<double>(cfg.set_trials);
  }
  out.push_back(r4);
  out.push_back(r5);
  return out;
}

namespace {

int chromatic(const Graph& h) {
  if (h.edge_count() == 0) return 1;
  for (int r = 2; r <= h.n(); ++r) {
    try {
      proper_coloring(h, r);
      return r;
    } catch (const NoColoringExists&) {
    }
  }
  return h.n();
}

}  // namespace

TuranReport random_turan_check(const Graph& g, const Graph& h, double p, double gamma, Seed adversary_seed,
                               std::uint64_t budget) {
  if (h.n() > 8) throw PreconditionError("random_turan_check: H must have at most 8 vertices");
  TuranReport rep;
  rep.chi = chromatic(h);
  const double n = g.n();
  const double frac = rep.chi >= 2 ? 1.0 - 1.0 / (rep.chi - 1) + gamma : gamma;
  rep.threshold = static_cast<std::size_t>(std::ceil(frac * n * n * p / 2.0));
  rep.edges_before = g.edge_count();
  std::vector<Edge> edges = g.edges();
  Graph pruned = g;
  if (edges.size() <= rep.threshold) {
    rep.below_threshold = true;
  } else {
    Rng rng(adversary_seed);
    rng.shuffle(edges);
    edges.resize(rep.threshold);
    pruned = Graph::from_edges(g.n(), std::move(edges));
  }
  rep.edges_after = pruned.edge_count();
  auto res = find_copy_avoiding(pruned, h, std::nullopt, {}, budget);
  rep.found = res.copy.has_value();
  rep.exhausted = res.exhausted;
  return rep;
}

namespace {

using Vec = Eigen::VectorXd;

void adjacency_apply(const Graph& g, const Vec& x, Vec& y) {
  for (Vertex v = 0; v < g.n(); ++v) {
    double s = 0.0;
    for (Vertex u : g.neighbors(v)) s += x[u];
    y[v] = s;
  }
}

struct PowerResult {
  double value = 0.0;  // eigenvalue of the unshifted operator sign * A
  Vec vector;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Top eigenpair of sign * A + shift * I, optionally orthogonal to `deflate`.
PowerResult power_iteration(const Graph& g, double sign, double shift, const Vec* deflate, double tol, int max_iter,
                            Seed seed) {
  const Vertex n = g.n();
  Rng rng(seed);
  Vec v(n), w(n);
  for (Vertex i = 0; i < n; ++i) v[i] = rng.uniform() - 0.5;
  auto project = [&](Vec& x) {
    if (deflate) x -= deflate->dot(x) * *deflate;
  };
  project(v);
  if (v.norm() == 0.0) v.setOnes(), project(v);
  PowerResult res;
  if (v.norm() == 0.0) return res;  // n = 1 with deflation
  v.normalize();
  for (int it = 1; it <= max_iter; ++it) {
    adjacency_apply(g, v, w);
    w *= sign;
    const double theta = v.dot(w);
    res.residual = (w - theta * v).norm();
    res.value = theta;
    res.iterations = it;
    if (res.residual <= tol) {
      res.converged = true;
      break;
    }
    w += shift * v;
    project(w);
    const double norm = w.norm();
    if (norm == 0.0) {
      res.converged = true;
      break;
    }
    v = w / norm;
  }
  res.vector = v;
  return res;
}

}  // namespace

SpectralProfile second_eigenvalue(const Graph& g, double tol, int max_iter) {
  if (g.n() == 0) throw PreconditionError("second_eigenvalue: empty graph");
  SpectralProfile prof;
  const Vertex n = g.n();
  prof.n = n;
  const int dmax = g.max_degree();
  prof.regular = g.min_degree() == dmax;
  prof.d = dmax;
  const double shift = std::max(1, dmax);
  Vec top;
  int iters = 0;
  bool ok = true;
  double residual = 0.0;
  if (prof.regular) {
    top = Vec::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    prof.lambda1 = dmax;
  } else {
    auto r1 = power_iteration(g, 1.0, shift, nullptr, tol * 1e-2, max_iter, Seed{0x5eed0001});
    top = r1.vector;
    prof.lambda1 = r1.value;
    iters += r1.iterations;
    ok = ok && r1.converged;
    residual = std::max(residual, r1.residual);
  }
  if (n == 1) {
    prof.lambda2 = prof.lambda_min = prof.lambda1;
    prof.lambda = 0.0;
    prof.converged = ok;
    return prof;
  }
  auto r2 = power_iteration(g, 1.0, shift, &top, tol, max_iter, Seed{0x5eed0002});
  auto rn = power_iteration(g, -1.0, shift, nullptr, tol, max_iter, Seed{0x5eed0003});
  prof.lambda2 = r2.value;
  prof.lambda_min = -rn.value;
  prof.lambda = std::max(prof.lambda2, -prof.lambda_min);
  prof.iterations = iters + r2.iterations + rn.iterations;
  prof.residual = std::max({residual, r2.residual, rn.residual});
  prof.converged = ok && r2.converged && rn.converged;
  return prof;
}

MixingReport expander_mixing_check(const Graph& g, double lambda, MixingMode mode, std::size_t trials, Seed seed) {
  const Vertex n = g.n();
  MixingReport rep;
  rep.check.property = "mixing";
  rep.check.seed = seed.value;
  rep.regular = n > 0 && g.min_degree() == g.max_degree();
  rep.d_used = rep.regular ? g.max_degree() : (n > 0 ? 2.0 * g.edge_count() / n : 0.0);
  rep.lambda_used = lambda;
  const double slack = 1e-6 * n;
  auto record = [&](std::size_t e, std::size_t x, std::size_t y) {
    ++rep.check.trials;
    if (x == 0 || y == 0) return;
    const double dev = std::abs(static_cast<double>(e) - rep.d_used * x * y / n);
    const double root = std::sqrt(static_cast<double>(x) * y);
    rep.worst_ratio = std::max(rep.worst_ratio, dev / root);
    if (dev > lambda * root + slack) ++rep.check.failures;
  };
  if (mode == MixingMode::Exhaustive) {
    if (n > 12) throw PreconditionError("expander_mixing_check: exhaustive mode needs n <= 12");
    std::vector<std::uint32_t> nb(static_cast<std::size_t>(n), 0);
    for (Vertex v = 0; v < n; ++v)
      for (Vertex u : g.neighbors(v)) nb[v] |= 1u << u;
    std::function<void(Vertex, std::uint32_t, std::uint32_t, std::size_t)> rec = [&](Vertex v, std::uint32_t X,
                                                                                   std::uint32_t Y, std::size_t e) {
      if (v == n) {
        record(e, static_cast<std::size_t>(std::popcount(X)), static_cast<std::size_t>(std::popcount(Y)));
        return;
      }
      rec(v + 1, X, Y, e);
      rec(v + 1, X | (1u << v), Y, e + static_cast<std::size_t>(std::popcount(nb[v] & Y)));
      rec(v + 1, X, Y | (1u << v), e + static_cast<std::size_t>(std::popcount(nb[v] & X)));
    };
    rec(0, 0, 0, 0);
  } else {
    Rng rng(seed);
    std::vector<Vertex> perm(static_cast<std::size_t>(n));
    for (Vertex v = 0; v < n; ++v) perm[v] = v;
    for (std::size_t t = 0; t < trials && n >= 2; ++t) {
      rng.shuffle(perm);
      const Vertex sx = 1 + static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n - 1)));
      const Vertex sy = 1 + static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n - sx)));
      VertexSet X = normalize(VertexSet(perm.begin(), perm.begin() + sx));
      VertexSet Y = normalize(VertexSet(perm.begin() + sx, perm.begin() + sx + sy));
      record(edges_between(g, X, Y), X.size(), Y.size());
    }
  }
  rep.check.worst_deviation = rep.worst_ratio;
  rep.check.violations = rep.check.failures;
  return rep;
}

PseudoBadSetReport pseudo_bad_set(const Graph& g, const std::vector<VertexSet>& sets, double eps,
                                  const SpectralProfile& profile) {
  const Vertex n = g.n();
  if (n == 0 || eps <= 0.0) throw PreconditionError("pseudo_bad_set: need n > 0 and eps > 0");
  for (const auto& S : sets)
    if (static_cast<double>(S.size()) < eps * n - 1e-9) throw PreconditionError("pseudo_bad_set: set smaller than eps n");
  const double p = profile.d / n;
  PseudoBadSetReport rep;
  rep.B = find_bad_set(g, sets, eps, p);
  rep.b0 = 2.0 * static_cast<double>(sets.size()) * 2.0 / (eps * eps * p);
  rep.bound = rep.b0 * profile.lambda;
  rep.within = static_cast<double>(rep.B.size()) <= rep.bound;
  return rep;
}

}  // namespace rgbw
