#pragma once

// Internal bit-embedding helpers shared by the dense kernels. Qubit s of an
// n-qubit register is bit s of the basis index throughout.

#include <cstdint>
#include <vector>

namespace hamlow::detail {

inline std::vector<int> complement(const std::vector<int>& positions, int n) {
  std::vector<char> used(n, 0);
  for (int q : positions) used[q] = 1;
  std::vector<int> rest;
  rest.reserve(n - positions.size());
  for (int q = 0; q < n; ++q)
    if (!used[q]) rest.push_back(q);
  return rest;
}

/// Spreads the low bits of `local` onto the listed bit positions.
inline std::uint64_t spread_bits(std::uint64_t local, const std::vector<int>& positions) {
  std::uint64_t out = 0;
  for (std::size_t j = 0; j < positions.size(); ++j)
    out |= ((local >> j) & 1ULL) << positions[j];
  return out;
}

/// Collects the bits of `bits` at the listed positions into a local index.
inline std::uint64_t extract_bits(std::uint64_t bits, const std::vector<int>& positions) {
  std::uint64_t out = 0;
  for (std::size_t j = 0; j < positions.size(); ++j)
    out |= ((bits >> positions[j]) & 1ULL) << j;
  return out;
}

/// Offsets of all 2^t local patterns embedded on the listed positions.
inline std::vector<std::uint64_t> embedding_offsets(const std::vector<int>& positions) {
  const std::uint64_t count = 1ULL << positions.size();
  std::vector<std::uint64_t> offsets(count);
  for (std::uint64_t l = 0; l < count; ++l) offsets[l] = spread_bits(l, positions);
  return offsets;
}

}  // namespace hamlow::detail
