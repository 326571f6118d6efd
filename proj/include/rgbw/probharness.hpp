#pragma once

#include <string>
#include <vector>

#include "rgbw/graph.hpp"

namespace rgbw {

struct CheckReport {
  std::string property;
  std::size_t trials = 0;
  std::size_t failures = 0;
  /// Largest normalized deviation seen; property-specific (relative for (i)-(iii)).
  double worst_deviation = 0.0;
  std::size_t violations = 0;  // raw violator count summed over trials
  double fitted_rate = 0.0;    // (iv)/(v): mean of -ln(violators / scale) / exponent
  double alpha = 0.0;
  double C = 0.0;
  double eps = 0.0;
  std::uint64_t seed = 0;
};

struct ChernoffReport {
  CheckReport check;
  std::size_t hits = 0;
  double empirical = 0.0;
  double std_error = 0.0;
  double bound = 0.0;       // exp(-lambda^2 / (3np))
  double exact_tail = 0.0;  // P(|Bi(n,p) - np| >= lambda) by summation
  bool exceeds_bound = false;   // empirical > bound + 2 se
  bool matches_exact = false;   // |empirical - exact| <= 2 se (se from the exact tail)
};

/// P(|Bi(n,p) - np| >= lambda), summed in log space.
double binomial_two_sided_tail(int n, double p, double lambda);

/// Monte Carlo frequency of |Bi(n,p) - np| >= lambda_dev against the bound.
ChernoffReport chernoff_tail_check(int n, double p, double lambda_dev, std::size_t trials, Seed seed);

/// Vertices outside X with deg(v, X) outside [(1-a)|X|p, (1+a)|X|p].
VertexSet lemma61_iv_violators(const Graph& g, const VertexSet& X, double p, double alpha);

/// Edges of G[V \ X] whose ends have fewer than (1-a)|X|p^2 common neighbors in X.
std::vector<Edge> lemma61_v_violators(const Graph& g, const VertexSet& X, double p, double alpha);

struct Lemma61Config {
  double p = 0.5;
  double alpha = 0.1;
  double C = 1.0;
  std::size_t pair_trials = 200;  // (iii)
  std::size_t set_trials = 50;    // (iv), (v)
};

/// One report per property (i)..(v). (i) and (ii) are exact scans.
std::vector<CheckReport> verify_lemma61(const Graph& g, const Lemma61Config& cfg, Seed seed);

struct TuranReport {
  std::size_t threshold = 0;       // ceil((1 - 1/(chi-1) + gamma) n^2 p / 2)
  std::size_t edges_before = 0;
  std::size_t edges_after = 0;
  bool below_threshold = false;    // input already at or below the threshold
  bool found = false;
  bool exhausted = false;
  int chi = 0;
};

/// Deletes seeded random edges down to the edge threshold, then searches for H.
TuranReport random_turan_check(const Graph& g, const Graph& h, double p, double gamma, Seed adversary_seed,
                               std::uint64_t budget = 10'000'000);

struct SpectralProfile {
  Vertex n = 0;
  double d = 0.0;        // the degree if regular, else the maximum degree
  bool regular = false;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda_min = 0.0;
  double lambda = 0.0;   // max(lambda2, -lambda_min)
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Power iteration on shifted adjacency operators: top pair, then deflated for
/// lambda2, and on the negated operator for lambda_min.
SpectralProfile second_eigenvalue(const Graph& g, double tol = 1e-10, int max_iter = 200'000);

enum class MixingMode { Exhaustive, Sampled };

struct MixingReport {
  CheckReport check;
  bool regular = false;
  double d_used = 0.0;
  double lambda_used = 0.0;
  double worst_ratio = 0.0;  // max |e(X,Y) - d|X||Y|/n| / sqrt(|X||Y|)
};

/// |e(X,Y) - (d/n)|X||Y|| <= lambda sqrt(|X||Y|) over disjoint pairs; exhaustive
/// (all 3^n assignments, n <= 12) or `trials` seeded pairs. Slack 1e-6 n.
MixingReport expander_mixing_check(const Graph& g, double lambda, MixingMode mode, std::size_t trials = 10'000,
                                   Seed seed = Seed{0});

struct PseudoBadSetReport {
  VertexSet B;
  double b0 = 0.0;      // 2T * 2 / (eps^2 p)
  double bound = 0.0;   // b0 * lambda
  bool within = false;
};

/// Bad set of the degree band for an (n, d, lambda)-graph, p = d / n.
PseudoBadSetReport pseudo_bad_set(const Graph& g, const std::vector<VertexSet>& sets, double eps,
                                  const SpectralProfile& profile);

}  // namespace rgbw
