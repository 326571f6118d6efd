#pragma once

#include <vector>

namespace rgbw {

/// Cell (i, j) of the [k] x [r] grid, 0-based; serializes to i*r + j.
struct Cell {
  int i = 0;
  int j = 0;
  bool operator==(const Cell&) const = default;
};

/// Dense k x r table, row-major.
template <typename T>
struct Grid {
  int k = 0;
  int r = 0;
  std::vector<T> cells;

  Grid() = default;
  Grid(int k_, int r_, T init = T{}) : k(k_), r(r_), cells(static_cast<std::size_t>(k_ * r_), init) {}

  T& at(int i, int j) { return cells[static_cast<std::size_t>(i * r + j)]; }
  const T& at(int i, int j) const { return cells[static_cast<std::size_t>(i * r + j)]; }
  T& at(Cell c) { return at(c.i, c.j); }
  const T& at(Cell c) const { return at(c.i, c.j); }
  std::size_t size() const { return cells.size(); }
};

/// Sizes with |m(i,j) - m(i,j')| <= 1 in every row.
inline bool is_r_equitable(const Grid<int>& m) {
  for (int i = 0; i < m.k; ++i)
    for (int j = 0; j < m.r; ++j)
      for (int j2 = 0; j2 < m.r; ++j2)
        if (m.at(i, j) - m.at(i, j2) > 1) return false;
  return true;
}

/// r-equitable split of `total` into k rows of r cells; rows differ by at most one
/// cell unit, larger cells first.
inline Grid<int> equitable_sizes(int total, int k, int r) {
  Grid<int> m(k, r);
  const int cells = k * r;
  for (int c = 0; c < cells; ++c) m.cells[static_cast<std::size_t>(c)] = total / cells + (c < total % cells ? 1 : 0);
  return m;
}

}  // namespace rgbw
