#pragma once

// Dense exact linear algebra over Q, just enough for rank and kernel work.

#include <cstddef>
#include <optional>
#include <vector>

#include "lacunary/sparse_poly.hpp"

namespace lacunary::linalg {

using Matrix = std::vector<std::vector<Rat>>;

/// Reduces `a` in place to reduced row echelon form and returns the pivot
/// column of each nonzero row.
std::vector<std::size_t> rref(Matrix& a, std::size_t cols);

/// A nonzero vector x with A x = 0 (first nonzero entry 1), if any.
std::optional<std::vector<Rat>> kernel_vector(Matrix a, std::size_t cols);

/// Some x with A x = b (free variables zero), if the system is consistent.
std::optional<std::vector<Rat>> solve(Matrix a, std::size_t cols, const std::vector<Rat>& b);

}  // namespace lacunary::linalg
