#include "tbss/multi_index.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tbss {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::uint64_t factorial(int n) {
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

std::size_t sym_size(int n, int d) {
  if (n <= 0) return d == 0 ? 1 : 0;
  return static_cast<std::size_t>(binomial(n + d - 1, d));
}

std::uint64_t multiplicity(std::span<const int> j) {
  // Product of binomials avoids overflowing |j|! for moderate degrees.
  std::uint64_t r = 1;
  int acc = 0;
  for (int jk : j) {
    acc += jk;
    r *= binomial(acc, jk);
  }
  return r;
}

MultiIndex index_map(std::span<const int> i, int n) {
  MultiIndex j(static_cast<std::size_t>(n), 0);
  for (int v : i) {
    if (v < 0 || v >= n)
      throw std::out_of_range("index_map: index " + std::to_string(v) + " outside [0, " +
                              std::to_string(n) + ")");
    ++j[static_cast<std::size_t>(v)];
  }
  return j;
}

std::vector<int> sorted_indices(std::span<const int> j) {
  std::vector<int> out;
  for (std::size_t k = 0; k < j.size(); ++k)
    for (int c = 0; c < j[k]; ++c) out.push_back(static_cast<int>(k));
  return out;
}

namespace {

void enumerate_rec(int k, int remaining, MultiIndex& cur, std::vector<MultiIndex>& out) {
  const int n = static_cast<int>(cur.size());
  if (k == n - 1) {
    cur[static_cast<std::size_t>(k)] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[static_cast<std::size_t>(k)] = v;
    enumerate_rec(k + 1, remaining - v, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multi_indices(int n, int d) {
  std::vector<MultiIndex> out;
  if (n <= 0) return out;
  out.reserve(sym_size(n, d));
  MultiIndex cur(static_cast<std::size_t>(n), 0);
  enumerate_rec(0, d, cur, out);
  return out;
}

std::size_t multi_index_rank(std::span<const int> j) {
  const int n = static_cast<int>(j.size());
  int remaining = std::accumulate(j.begin(), j.end(), 0);
  std::size_t pos = 0;
  for (int k = 0; k + 1 < n; ++k) {
    const int parts = n - k - 1;
    // Every j' agreeing on 0..k-1 with a larger k-th entry precedes j.
    for (int v = j[static_cast<std::size_t>(k)] + 1; v <= remaining; ++v)
      pos += static_cast<std::size_t>(binomial(remaining - v + parts - 1, parts - 1));
    remaining -= j[static_cast<std::size_t>(k)];
  }
  return pos;
}

}  // namespace tbss
