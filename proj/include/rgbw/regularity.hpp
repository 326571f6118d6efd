#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rgbw/graph.hpp"
#include "rgbw/grid.hpp"

namespace rgbw {

enum class CheckMode { Exhaustive, Randomized };

struct RegularityVerdict {
  bool refuted = false;
  /// (A', B') with |A'| >= eps|A|, |B'| >= eps|B| and |d(A',B') - d(A,B)| > eps.
  std::optional<std::pair<VertexSet, VertexSet>> witness;
  std::uint64_t budget_spent = 0;
  CheckMode mode = CheckMode::Randomized;
  double density = 0.0;        // d(A, B)
  double max_deviation = 0.0;  // largest |d(A',B') - d(A,B)| seen
};

/// Smallest admissible subset size: ceil(eps * size), at least 1.
int min_subset_size(double eps, std::size_t size);

/// Searches for an eps-irregularity witness. When the smaller side has at most
/// 12 vertices every subset of it is enumerated, and for each subset and size
/// the extreme subsets of the other side are taken by degree, so the verdict is
/// exact. Otherwise `budget` candidate pairs are examined, built from degree
/// outliers, neighborhoods and uniform samples refined by alternating best
/// responses; an unrefuted randomized verdict is evidence, not proof.
RegularityVerdict check_regularity(const Graph& g, const VertexSet& A, const VertexSet& B, double eps,
                                   std::uint64_t budget = 100'000, Seed seed = {});

/// Recomputes a refuted verdict's witness inequalities from scratch.
bool witness_is_valid(const Graph& g, const VertexSet& A, const VertexSet& B, double eps, const RegularityVerdict& v);

struct SuperRegularityVerdict {
  bool ok = false;
  bool density_ok = false;     // d(A,B) >= d
  bool min_degree_ok = false;  // deg_B(a) >= d|B| and deg_A(b) >= d|A| for all a, b
  Vertex min_degree_violator = -1;
  RegularityVerdict regularity;
};

SuperRegularityVerdict check_super_regularity(const Graph& g, const VertexSet& A, const VertexSet& B, double d,
                                              double eps, std::uint64_t budget = 100'000, Seed seed = {});

/// (d - 2(alpha + beta), eps + 3(sqrt(alpha) + sqrt(beta))).
std::pair<double, double> perturbed_parameters(double d, double eps, double alpha_hat, double beta_hat);

struct RestrictResult {
  std::vector<VertexSet> clusters;    // V_i'
  std::vector<VertexSet> deficient;   // removed for low degree toward an S-neighbor
  std::vector<VertexSet> removed;     // all removed vertices (deficient plus padding)
};

/// Shrinks clusters so that S-edges satisfy the min-degree part of
/// (d - eps(Delta+1))-super-regularity. Vertices with deg(v, V_j) < (d - eps)|V_j|
/// toward some S-neighbor j are removed; with `pad` the removal is topped up by
/// lowest normalized degree until |V_i'| = ceil((1 - eps Delta)|V_i|).
/// Throws StageError if a cluster has more deficient vertices than that allows.
RestrictResult restrict_to_superregular(const Graph& g, const std::vector<VertexSet>& clusters, const Graph& S, double d,
                                        double eps, bool pad = true);

/// All v with deg(v, V_i) outside [(1-eps)s p, (1+eps)s p] for some i, where
/// s = |V_i|, or |V_i| - 1 when v itself lies in V_i.
VertexSet find_bad_set(const Graph& g, const std::vector<VertexSet>& sets, double eps, double p);

struct ReducedGraph {
  int k = 0;
  int r = 0;
  Graph edges;  // on k*r vertices
  double d = 0.0;
  double eps = 0.0;
  std::vector<double> density;  // row-major (k r) x (k r)
  /// backbone[cell] = R-vertex playing grid cell i*r+j; every C_k^r edge maps to an R-edge.
  std::optional<std::vector<int>> backbone;
};

/// Edge {a, b} iff d(V_a, V_b) >= d and check_regularity is unrefuted.
ReducedGraph build_reduced_graph(const Graph& g, const std::vector<VertexSet>& clusters, int k, int r, double d,
                                 double eps, std::uint64_t budget = 100'000, Seed seed = {});

/// Thrown when exhaustive backbone search proves no embedding of C_k^r exists.
class NoBackbone : public Error {
 public:
  using Error::Error;
};

/// Bijection cell -> R-vertex under which every C_k^r edge is an R-edge.
/// Backtracking (exact, with node budget) when k r <= 24, else greedy row by row.
std::vector<int> find_backbone(const ReducedGraph& R, std::uint64_t budget = 10'000'000);

/// True iff every C_k^r edge maps to an R-edge under `backbone`.
bool backbone_is_valid(const ReducedGraph& R, const std::vector<int>& backbone);

struct InheritanceReport {
  int min_degree_R = 0;
  double threshold = 0.0;  // (alpha + 3 gamma / 4) * (number of clusters)
  bool passes = false;
  int min_degree_host = 0;
  bool host_precondition = false;  // delta(G') >= (alpha + gamma) n p
};

InheritanceReport check_min_degree_inheritance(const Graph& gp, const ReducedGraph& R, double alpha, double gamma,
                                               double p);

struct ClusterPartition {
  int k = 0;
  int r = 0;
  VertexSet B;
  Grid<VertexSet> V;
  Grid<VertexSet> core;
  Grid<int> m;
  double d = 0.0;
  double eps = 0.0;
  double xi0 = 0.0;
  int b0 = 0;   // cap reported for B (informational)
  int K0 = 0;   // cap on k (informational)
};

struct EngineConfig {
  int k = 0;                         // 0: choose from cluster size
  int preferred_cluster_size = 400;
  int min_cluster_size = 200;
  int max_cluster_size = 2000;
  int max_clusters = 24;
  double d = -1.0;                   // < 0: gamma p / 90
  double eps_bad = 0.3;              // band for the bad set, relative to the realized density of G'
  std::uint64_t regularity_budget = 2000;
  bool require_min_degree = true;    // throw when delta(G') < (1 - 1/r + gamma) n p
};

struct EngineResult {
  ClusterPartition partition;
  ReducedGraph R;  // relabeled to the grid: vertex i*r+j is cluster (i, j)
  std::size_t redistributed = 0;
  std::size_t deficient_removed = 0;
  double realized_density = 0.0;
};

/// Random r-equitable partition, bad set, reduced graph and backbone, then
/// super-regularity on K_k^r with displaced vertices sent to good indices.
EngineResult build_partition_engine(const Graph& gp, int r, double gamma, double p, double eps, double xi0, Seed seed,
                                    const EngineConfig& cfg = {});

/// Moves non-core vertices along adjacent columns until |V(i,j)| >= targets(i,j).
/// A vertex entering (i,j) needs >= d m(i,j') neighbors in every (i,j'), j' != j.
ClusterPartition resize_partition(const Graph& g, const ClusterPartition& part, const Grid<int>& targets,
                                  std::size_t* moves = nullptr);

/// Checks the partition invariants: disjointness, coverage of V \ B, cores inside
/// clusters with |V*| >= (1 - eps) m, r-equitable m summing to n - |B|. Returns
/// an empty string or a description of the first violation.
std::string partition_invariant_violation(const Graph& g, const ClusterPartition& part);

}  // namespace rgbw
