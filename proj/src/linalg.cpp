#include "lacunary/linalg.hpp"

namespace lacunary::linalg {

std::vector<std::size_t> rref(Matrix& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t pick = row;
    while (pick < a.size() && a[pick][col] == 0) ++pick;
    if (pick == a.size()) continue;
    std::swap(a[row], a[pick]);
    const Rat inv = 1 / a[row][col];
    for (std::size_t j = col; j < cols; ++j) a[row][j] *= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == row || a[i][col] == 0) continue;
      const Rat factor = a[i][col];
      for (std::size_t j = col; j < cols; ++j) {
        if (a[row][j] != 0) a[i][j] -= factor * a[row][j];
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::optional<std::vector<Rat>> kernel_vector(Matrix a, std::size_t cols) {
  const auto pivots = rref(a, cols);
  if (pivots.size() == cols) return std::nullopt;
  std::size_t free_col = 0;
  for (std::size_t r = 0; r <= pivots.size(); ++r, ++free_col) {
    if (r == pivots.size() || pivots[r] != free_col) break;
  }
  std::vector<Rat> x(cols, Rat(0));
  x[free_col] = 1;
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -a[r][free_col];
  for (const Rat& v : x) {
    if (v == 0) continue;
    const Rat scale = 1 / v;
    for (Rat& w : x) w *= scale;
    break;
  }
  return x;
}

std::optional<std::vector<Rat>> solve(Matrix a, std::size_t cols, const std::vector<Rat>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i].push_back(b[i]);
  const auto pivots = rref(a, cols + 1);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  std::vector<Rat> x(cols, Rat(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = a[r][cols];
  return x;
}

}  // namespace lacunary::linalg
