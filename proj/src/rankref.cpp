#include "tbss/rankref.hpp"

#include <array>
#include <cstdio>
#include <stdexcept>

namespace tbss {

namespace {

// Generic rank and manifold dimension of symmetric tensors, order d, dimension n.
constexpr std::array<RankTableEntry, 14> kRankTable{{
    {3, 2, 2, 0}, {3, 3, 4, 2}, {3, 4, 5, 0}, {3, 5, 8, 5}, {3, 6, 10, 4}, {3, 7, 12, 0}, {3, 8, 15, 0},
    {4, 2, 3, 1}, {4, 3, 6, 3}, {4, 4, 10, 5}, {4, 5, 15, 5}, {4, 6, 22, 6}, {4, 7, 30, 0}, {4, 8, 42, 6},
}};

constexpr std::array<OrbitClass, 3> kBinaryCubics{{
    {"x^3", 2, 1, false},
    {"x^3+y^3", 2, 2, true},
    {"x^2y", 2, 3, false},
}};

constexpr std::array<OrbitClass, 8> kTernaryCubics{{
    {"x^3", 3, 1, false},
    {"x^3+y^3", 3, 2, false},
    {"x^2y", 3, 3, false},
    {"x^3+3y^2z", 3, 4, false},
    {"x^3+y^3+6xyz", 3, 4, false},
    {"x^3+6xyz", 3, 4, false},
    {"a(x^3+y^3+z^3)+6bxyz", 3, 4, true},
    {"x^2y+xz^2", 3, 5, false},
}};

const RankTableEntry& lookup(int d, int n) {
  for (const auto& e : kRankTable)
    if (e.order == d && e.dim == n) return e;
  throw std::out_of_range("not tabulated: order " + std::to_string(d) + ", dimension " + std::to_string(n));
}

struct Term {
  double coeff;
  std::array<int, 3> exps;  // powers of x, y, z
};

std::vector<Term> terms_of(std::string_view label) {
  if (label == "x^3") return {{1, {3, 0, 0}}};
  if (label == "x^3+y^3") return {{1, {3, 0, 0}}, {1, {0, 3, 0}}};
  if (label == "x^2y") return {{1, {2, 1, 0}}};
  if (label == "x^3+3y^2z") return {{1, {3, 0, 0}}, {3, {0, 2, 1}}};
  if (label == "x^3+y^3+6xyz") return {{1, {3, 0, 0}}, {1, {0, 3, 0}}, {6, {1, 1, 1}}};
  if (label == "x^3+6xyz") return {{1, {3, 0, 0}}, {6, {1, 1, 1}}};
  if (label == "a(x^3+y^3+z^3)+6bxyz") return {{1, {3, 0, 0}}, {1, {0, 3, 0}}, {1, {0, 0, 3}}, {6, {1, 1, 1}}};
  if (label == "x^2y+xz^2") return {{1, {2, 1, 0}}, {1, {1, 0, 2}}};
  throw std::invalid_argument("unknown orbit label '" + std::string(label) + "'");
}

}  // namespace

std::span<const RankTableEntry> rank_table() { return kRankTable; }

int generic_rank(int d, int n) { return lookup(d, n).generic_rank; }
int manifold_dim(int d, int n) { return lookup(d, n).manifold_dim; }

std::string format_rank_tables() {
  std::string out;
  char buf[64];
  for (const char* title : {"generic rank", "manifold dimension"}) {
    const bool rank = title[0] == 'g';
    out += title;
    out += "\n d\\n";
    for (int n = 2; n <= 8; ++n) {
      std::snprintf(buf, sizeof buf, "%4d", n);
      out += buf;
    }
    out += "\n";
    for (int d = 3; d <= 4; ++d) {
      std::snprintf(buf, sizeof buf, "%4d", d);
      out += buf;
      for (int n = 2; n <= 8; ++n) {
        std::snprintf(buf, sizeof buf, "%4d", rank ? generic_rank(d, n) : manifold_dim(d, n));
        out += buf;
      }
      out += "\n";
    }
  }
  return out;
}

std::span<const OrbitClass> binary_cubic_orbits() { return kBinaryCubics; }
std::span<const OrbitClass> ternary_cubic_orbits() { return kTernaryCubics; }

HomogPoly orbit_polynomial(std::string_view label, int nvars) {
  if (nvars < 2 || nvars > 3) throw std::invalid_argument("orbit_polynomial: nvars must be 2 or 3");
  HomogPoly p(nvars, 3);
  for (const auto& t : terms_of(label)) {
    MultiIndex j(t.exps.begin(), t.exps.begin() + nvars);
    if (nvars == 2 && t.exps[2] != 0)
      throw std::invalid_argument("orbit label '" + std::string(label) + "' needs three variables");
    p.add_monomial(j, t.coeff);
  }
  return p;
}

SymTensor orbit_representative(std::string_view label, int nvars) {
  return poly_to_tensor(orbit_polynomial(label, nvars));
}

std::uint64_t howell_bound(std::span<const std::size_t> dims) {
  if (dims.size() < 2) throw std::invalid_argument("howell_bound: need at least two dimensions");
  std::uint64_t best = 0;
  for (std::size_t i = 0; i < dims.size(); ++i)
    for (std::size_t j = i + 1; j < dims.size(); ++j) best = std::max<std::uint64_t>(best, dims[i] * dims[j]);
  return best;
}

std::uint64_t reznick_bound(int n, int d) {
  if (n < 1 || d < 1) throw std::invalid_argument("reznick_bound: need n, d >= 1");
  return binomial(n + d - 2, d - 1);
}

}  // namespace tbss
