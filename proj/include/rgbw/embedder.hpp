#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rgbw/bandwidth.hpp"
#include "rgbw/graph.hpp"
#include "rgbw/plan.hpp"
#include "rgbw/regularity.hpp"

namespace rgbw {

/// Partial injective map V(H) -> V(G') with candidate sets for constrained,
/// not yet embedded H-vertices.
struct Embedding {
  std::vector<Vertex> g;                  // per H-vertex; -1 when unembedded
  std::map<Vertex, VertexSet> candidates; // C_w
  VertexSet Z;                            // W_B plus its neighborhood
  VertexSet W_B;                          // preimage of the bad set
  std::vector<std::pair<Vertex, Vertex>> bad_assignment;  // (b, h_b)

  Embedding() = default;
  explicit Embedding(Vertex h_order) : g(static_cast<std::size_t>(h_order), -1) {}

  bool embedded(Vertex w) const { return g[w] >= 0; }
  std::size_t embedded_count() const;
  bool is_total() const { return embedded_count() == g.size(); }
  /// Sorted images of all embedded vertices.
  VertexSet image() const;
};

struct EmbedParams {
  int r = 2;
  double gamma = 0.1;
  double p = 0.5;
  double eps = 0.2;
  double xi0 = 0.05;
  double beta = 0.0;   // <= 0: bandwidth(H) / n
  double xi = 0.1;
  double c = -1.0;     // < 0: (d/8)^Delta
  int max_degree = 0;  // Delta; 0: read off H
  double buffer_fraction = 0.25;  // share of each cluster completed by matching
  int blowup_attempts = 4;
  bool require_min_degree = true;
  EngineConfig engine;
  PlanConfig plan;
};

/// Resolved constant c for a partition density d and maximum degree Delta.
double embedding_constant(const EmbedParams& params, double d, int delta);

/// Claim-5.2 style pre-embedding: every b in B receives a far-apart H-vertex h_b
/// with an independent neighborhood; N(h_b) goes to neighbors of b in a core
/// with large common neighborhoods in column s'. Second neighbors get C_w.
/// Throws StageError("pre_embed_B") naming b on failure.
Embedding pre_embed_B(const Graph& gp, const ClusterPartition& part, const ReducedGraph& R, const Graph& h,
                      const HPlan& plan, const EmbedParams& params);

/// Checks clauses (i)-(iii) of the pre-embedding; returns "" or the first violation.
std::string pre_embedding_violation(const Graph& gp, const ClusterPartition& part, const Graph& h, const HPlan& plan,
                                    const Embedding& emb, double c);

/// Greedy embedding of X in label order into its clusters, keeping the
/// candidate sets of Y = N(X) \ X as large as possible. Throws StageError
/// ("partial_embed_X") with a constraint trace when a candidate set empties.
Embedding partial_embed_X(const Graph& gp, const ClusterPartition& part, const ReducedGraph& R, const Graph& h,
                          const HPlan& plan, const Embedding& emb, const EmbedParams& params);

/// Completion per column: a buffer of pairwise non-adjacent H-vertices per
/// cluster is held back, the rest is embedded greedily (descending degree, ties
/// by label, seeded choice among candidates), and the buffers are matched
/// exactly. Throws StageError("blowup") with a Hall-violating set on failure.
/// `column_order` (default 0..k-1) fixes the processing order.
Embedding blowup_embed(const Graph& gp, const ClusterPartition& part, const Graph& h, const HPlan& plan,
                       const Embedding& emb, const EmbedParams& params, Seed seed,
                       std::optional<std::vector<int>> column_order = std::nullopt);

/// Independent validator: injective, homomorphic on every H-edge with both ends
/// embedded; when `spanning`, total and onto V(G'). Returns "" or a description.
std::string embedding_violation(const Graph& gp, const Graph& h, const std::vector<Vertex>& g, bool spanning);

struct PaddedGraph {
  Graph graph;
  Labeling labeling;
  VertexSet inserted;  // new vertex ids
};

/// Inserts an isolated vertex after every interval of ceil(beta^2 n) - 1
/// labels (the final partial interval included). With fill_to_target, further
/// isolated vertices are appended until the order is n_target.
PaddedGraph pad_with_isolates(const Graph& h, const Labeling& L, double beta, Vertex n_target,
                              bool fill_to_target = false);

struct SpanningResult {
  Embedding embedding;
  ClusterPartition partition;
  HPlan plan;
  Labeling labeling;
  Coloring coloring;
  std::size_t resize_moves = 0;
  double c = 0.0;
};

/// Full pipeline: label and color H, build the partition, plan H, pre-embed B,
/// resize to the n_{i,j} accounting, embed X, complete per column, validate.
/// Every failure is a StageError tagged with its stage.
SpanningResult embed_spanning(const Graph& gp, const Graph& h, const EmbedParams& params, Seed seed);

}  // namespace rgbw
