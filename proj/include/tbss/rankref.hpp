#pragma once
// Tabulated generic ranks, solution-manifold dimensions and cubic orbit
// classes, kept as static data for tests and the CLI.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tbss/poly.hpp"
#include "tbss/tensor.hpp"

namespace tbss {

struct RankTableEntry {
  int order;
  int dim;
  int generic_rank;
  int manifold_dim;
};

/// Rows for order 3 then 4, dimensions 2..8.
std::span<const RankTableEntry> rank_table();

/// Throws std::out_of_range ("not tabulated") outside d in {3, 4}, n in 2..8.
int generic_rank(int d, int n);
int manifold_dim(int d, int n);

/// Fixed-width text rendering of both tables, used by `tbss tables`.
std::string format_rank_tables();

struct OrbitClass {
  std::string_view label;
  int nvars;
  int rank;
  bool generic;
};

std::span<const OrbitClass> binary_cubic_orbits();
std::span<const OrbitClass> ternary_cubic_orbits();

/// The literal representative polynomial of a tabulated label in `nvars`
/// variables (x, y, z). The generic ternary family is instantiated at a = b = 1.
/// Throws std::invalid_argument for an unknown label or too few variables.
HomogPoly orbit_polynomial(std::string_view label, int nvars);
SymTensor orbit_representative(std::string_view label, int nvars);

/// max over i != j of n_i n_j; requires at least two dimensions.
std::uint64_t howell_bound(std::span<const std::size_t> dims);
/// binom(n + d - 2, d - 1).
std::uint64_t reznick_bound(int n, int d);

}  // namespace tbss
