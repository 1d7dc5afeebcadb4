#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tbss {

/// Exponent vector j of a monomial x^j; |j| is the sum of its entries.
using MultiIndex = std::vector<int>;

std::uint64_t binomial(int n, int k);
std::uint64_t factorial(int n);

/// Number of distinct entries of a symmetric order-d tensor in dimension n.
std::size_t sym_size(int n, int d);

/// c(j) = |j|! / prod_k j_k!, the number of tensor entries sharing multi-index j.
std::uint64_t multiplicity(std::span<const int> j);

/// f(i): counts how often each variable 0..n-1 occurs in the index tuple i.
/// Throws std::out_of_range when an entry is outside [0, n).
MultiIndex index_map(std::span<const int> i, int n);

/// Inverse of index_map up to permutation: the sorted index tuple of j.
std::vector<int> sorted_indices(std::span<const int> j);

/// All j with |j| = d over n variables, lexicographically descending
/// ([d,0,..,0] first, [0,..,0,d] last). This is the packed storage order.
std::vector<MultiIndex> enumerate_multi_indices(int n, int d);

/// Position of j in enumerate_multi_indices(j.size(), |j|).
std::size_t multi_index_rank(std::span<const int> j);

}  // namespace tbss
