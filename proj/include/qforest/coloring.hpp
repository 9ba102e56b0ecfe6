#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace qforest {

inline int label_bits(int n) {
  if (n < 1) throw std::invalid_argument("need at least one vertex");
  int m = 0;
  while ((1 << m) < n + 1) ++m;
  return m;  // ceil(log2(n+1)): labels 1..n fit in m bits
}

// Two-coloring h(x) = <a,x> xor b drawn from a pairwise independent family.
struct VertexColoring {
  int m_bits = 0;
  std::uint32_t a = 0;
  int b = 0;

  int color(int label) const {
    if (label < 1 || label >= (1 << m_bits))
      throw std::out_of_range("label outside the coloring domain");
    return (std::popcount(a & static_cast<std::uint32_t>(label)) + b) & 1;
  }
};

inline VertexColoring sample_coloring(int n, std::mt19937_64& rng) {
  int m = label_bits(n);
  std::uniform_int_distribution<std::uint32_t> mask(0, (1u << m) - 1);
  std::uniform_int_distribution<int> bit(0, 1);
  return VertexColoring{m, mask(rng), bit(rng)};
}

// All 2^(m+1) members, fixed order: a ascending, then b.
inline std::vector<VertexColoring> coloring_family(int n) {
  int m = label_bits(n);
  std::vector<VertexColoring> fam;
  fam.reserve(std::size_t{2} << m);
  for (std::uint32_t a = 0; a < (1u << m); ++a)
    for (int b = 0; b < 2; ++b) fam.push_back(VertexColoring{m, a, b});
  return fam;
}

}  // namespace qforest
