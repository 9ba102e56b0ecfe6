#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qforest/graph.hpp"

namespace qforest {

enum class GadgetVariant { CycleTest, BipartiteTest };

// Hard family for the deciders: two tracks of column vertices v(i,b) wired
// column to column, the bit x_i deciding whether track b connects straight
// across or crosses to track 1-b. The cycle structure of the result encodes
// the parity of x.
struct ParityGadget {
  GadgetVariant variant = GadgetVariant::CycleTest;
  int p = 0;                 // requested width
  std::vector<int> bits;     // wiring bits, possibly with the appended pad
  int parity = 0;            // parity of the requested bits
  AdjacencyArray arr;

  int columns() const { return static_cast<int>(bits.size()); }
  int vertex(int i, int b) const {
    if (i < 0 || i >= columns() || b < 0 || b > 1)
      throw std::out_of_range("gadget coordinates outside the column grid");
    return 2 * i + b + 1;
  }
};

// Builds the gadget for bit string x of length p.
//
// CycleTest: p columns wired cyclically, then the edge {v(0,0), v(1,x_0)}
// removed; the survivor contains a cycle iff parity(x) is even. The corner
// p = 2 with x_0 == x_1 would need parallel edges and is rejected.
//
// BipartiteTest: a pad bit 0 is appended when p is even so the column count
// is always odd; nothing is removed. Even parity yields two odd cycles (not
// bipartite), odd parity one even cycle (bipartite).
inline ParityGadget parity_gadget(int p, const std::vector<int>& x, GadgetVariant variant) {
  if (p < 2) throw std::invalid_argument("gadget needs p >= 2");
  if (static_cast<int>(x.size()) != p)
    throw std::invalid_argument("expected " + std::to_string(p) + " bits");
  for (int b : x)
    if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0 or 1");

  ParityGadget g;
  g.variant = variant;
  g.p = p;
  g.bits = x;
  for (int b : x) g.parity ^= b;
  if (variant == GadgetVariant::BipartiteTest && p % 2 == 0) g.bits.push_back(0);
  if (variant == GadgetVariant::CycleTest && p == 2 && x[0] == x[1])
    throw std::domain_error("p = 2 with equal bits degenerates to parallel edges");

  int cols = g.columns();
  g.arr.n = 2 * cols;
  g.arr.nbr.assign(g.arr.n + 1, {});
  for (int i = 0; i < cols; ++i) {
    int succ = (i + 1) % cols, pred = (i + cols - 1) % cols;
    for (int b = 0; b < 2; ++b) {
      // Slot 1 runs forward along the wiring, slot 2 backward.
      g.arr.nbr[g.vertex(i, b)] = {g.vertex(succ, b ^ g.bits[i]),
                                   g.vertex(pred, b ^ g.bits[pred])};
    }
  }
  if (variant == GadgetVariant::CycleTest) {
    int a = g.vertex(0, 0), b = g.vertex(1, g.bits[0]);
    for (int v : {a, b}) {
      auto& list = g.arr.nbr[v];
      int other = (v == a) ? b : a;
      list.erase(std::find(list.begin(), list.end(), other));
    }
  }
  g.arr.validate();
  return g;
}

}  // namespace qforest
