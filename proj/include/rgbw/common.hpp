#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgbw {

using Vertex = std::int32_t;

/// Sorted, duplicate-free sequence of vertex indices.
using VertexSet = std::vector<Vertex>;

/// Seed for the deterministic pseudo-random stream.
struct Seed {
  std::uint64_t value = 0;
};

/// Sorts and deduplicates in place; returns the normalized set.
VertexSet normalize(VertexSet s);
bool is_normalized(const VertexSet& s);
bool contains(const VertexSet& s, Vertex v);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
bool disjoint(const VertexSet& a, const VertexSet& b);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A search gave up before finishing; the answer is unknown, not negative.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A pipeline stage could not complete. `stage()` names it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& detail)
      : Error(stage + ": " + detail), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace rgbw
