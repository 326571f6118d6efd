#pragma once

#include <string>
#include <vector>

#include "rgbw/bandwidth.hpp"
#include "rgbw/graph.hpp"
#include "rgbw/grid.hpp"

namespace rgbw {

struct PlanConfig {
  /// beta <= xi^2 / (beta_xi_constant * r^3).
  double beta_xi_constant = 3026.0;
  /// m(i,j) >= min_part_factor * beta * n.
  double min_part_factor = 200.0;
  /// Independent-neighborhood vertices each column must own; 0 means ceil(1/beta), negative means none.
  int min_indep_per_column = 0;
};

struct HPlan {
  int k = 0;
  int r = 0;
  double beta = 0.0;
  double xi = 0.0;
  std::vector<Cell> f;            // per H-vertex
  VertexSet X;                    // special vertices
  Grid<VertexSet> W;              // f^{-1}(i, j)
  std::vector<VertexSet> indep;   // per column i: independent-neighborhood vertices outside N^{<=3}(X)
  std::vector<int> cuts;          // last label of each segment (k entries, the last is n)
  Labeling labeling;              // the labeling the plan was cut from
};

/// A plan clause (a)-(e), or a precondition, failed. clause() is the letter or "pre".
class ClauseViolation : public Error {
 public:
  ClauseViolation(std::string clause, const std::string& detail)
      : Error("clause (" + clause + "): " + detail), clause_(std::move(clause)) {}
  const std::string& clause() const { return clause_; }

 private:
  std::string clause_;
};

/// Interval-cutting planner. Labels are cut into k consecutive segments with
/// lengths near the row totals of m; each cut is moved within +-floor(xi n / 4)
/// to the position crossed by the fewest edges (ties: nearest the ideal
/// position, then earliest). A vertex at
/// label t in segment i with color c maps to (i, c). X is the set of left
/// endpoints of edges crossing a cut. The result is checked by validate_plan.
HPlan plan_H(const Graph& h, const Labeling& L, const Coloring& C, int k, const Grid<int>& m, double beta, double xi,
             const PlanConfig& cfg = {});

/// Independent checker for clauses (a)-(e). Throws ClauseViolation naming the clause.
void validate_plan(const Graph& h, const HPlan& plan, const Grid<int>& m, const PlanConfig& cfg = {});

}  // namespace rgbw
