#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qforest/coloring.hpp"
#include "qforest/graph.hpp"
#include "qforest/oracles.hpp"

namespace qforest {

// Vertex of the ancillary graph H: residue copies (v, b) of base vertices
// plus the two endpoints. v == 0 encodes the endpoints (b 0 = source S,
// b 1 = sink T).
struct HVertex {
  int v = 0;
  int b = 0;
  bool operator==(const HVertex&) const = default;
};

inline constexpr HVertex kSourceH{0, 0};
inline constexpr HVertex kSinkH{0, 1};

// Base graph plus the lift parameters. s_mod = 3 decides forests (cycle
// imbalance mod 3), s_mod = 2 decides bipartiteness (path parity).
struct AncillarySpec {
  AdjacencyArray base;
  int s_mod = 3;
  int k = 1;
  std::optional<VertexColoring> coloring;

  int n() const { return base.n; }
  int h_vertex_count() const { return s_mod * base.n + 2; }

  void validate() const {
    base.validate();
    if (s_mod != 2 && s_mod != 3) throw std::invalid_argument("s_mod must be 2 or 3");
    base.check_vertex(k);
    if (coloring && (1 << coloring->m_bits) <= base.n)
      throw std::invalid_argument("coloring domain too small for the graph");
  }
};

inline AncillarySpec make_spec(const Graph& g, int s_mod, int k,
                               std::optional<VertexColoring> coloring = std::nullopt) {
  AncillarySpec spec{AdjacencyArray::from_graph(g), s_mod, k, std::move(coloring)};
  spec.validate();
  return spec;
}

// True if the edge {u,v} is directed u -> v. Base rule: toward the larger
// label. With a coloring, edges at the anchor k flip when the other endpoint
// is colored 1 (only meaningful for s_mod = 3; harmless otherwise).
inline bool directed_towards(const AncillarySpec& spec, int u, int v) {
  spec.base.check_vertex(u);
  spec.base.check_vertex(v);
  if (u == v) throw std::invalid_argument("orientation needs distinct endpoints");
  bool forward = u < v;
  if (spec.coloring && spec.s_mod == 3 && (u == spec.k) != (v == spec.k)) {
    int other = (u == spec.k) ? v : u;
    if (spec.coloring->color(other) == 1) forward = !forward;
  }
  return forward;
}

inline std::pair<int, int> orient_edge(const AncillarySpec& spec, int u, int v) {
  return directed_towards(spec, u, v) ? std::pair{u, v} : std::pair{v, u};
}

inline void check_h_vertex(const AncillarySpec& spec, HVertex x) {
  if (x.v == 0) {
    if (x.b != 0 && x.b != 1) throw std::out_of_range("endpoint index must be 0 or 1");
    return;
  }
  spec.base.check_vertex(x.v);
  if (x.b < 0 || x.b >= spec.s_mod) throw std::out_of_range("residue outside 0..s-1");
}

inline int ancillary_degree(const AncillarySpec& spec, HVertex x) {
  check_h_vertex(spec, x);
  if (x.v == 0) return 1;
  int d = spec.base.degree(x.v);
  if (x.v == spec.k && x.b <= 1) ++d;  // extra slot to S (b=0) or T (b=1)
  return d;
}

// Adjacency test in H. Costs at most one base adjacency consultation,
// reported through `queries` when given.
inline bool ancillary_edge_query(const AncillarySpec& spec, HVertex x, HVertex y,
                                 long long* queries = nullptr) {
  check_h_vertex(spec, x);
  check_h_vertex(spec, y);
  if (x == y) return false;
  if (x.v == 0 && y.v == 0) return false;  // S and T are not adjacent
  if (x.v == 0 || y.v == 0) {
    HVertex end = (x.v == 0) ? x : y;
    HVertex other = (x.v == 0) ? y : x;
    return other.v == spec.k && other.b == end.b;  // S meets k_0, T meets k_1
  }
  if (x.v == y.v) return false;
  // Residue compatibility first: edges step the counter by +1 along the
  // orientation. This part needs no base access.
  bool forward = directed_towards(spec, x.v, y.v);
  int from_b = forward ? x.b : y.b;
  int to_b = forward ? y.b : x.b;
  if ((from_b + 1) % spec.s_mod != to_b) return false;
  if (queries) ++(*queries);
  const auto& list = spec.base.nbr[x.v];
  return std::find(list.begin(), list.end(), y.v) != list.end();
}

// Neighbor slot map in H (array model). Slots 1..d(v) follow the base
// array's order; the anchor's copies k_0, k_1 expose one extra final slot
// leading to S and T. Exactly one base array read per call.
inline HVertex ancillary_neighbors(const AncillarySpec& spec, HVertex x, int j) {
  check_h_vertex(spec, x);
  if (x.v == 0) {
    if (j != 1) throw std::out_of_range("endpoints have a single slot");
    return HVertex{spec.k, x.b};
  }
  int d = spec.base.degree(x.v);
  if (j >= 1 && j <= d) {
    int v = spec.base.neighbor(x.v, j);
    int step = directed_towards(spec, x.v, v) ? 1 : spec.s_mod - 1;
    return HVertex{v, (x.b + step) % spec.s_mod};
  }
  if (j == d + 1 && x.v == spec.k && x.b <= 1) return HVertex{0, x.b};
  throw std::out_of_range("slot " + std::to_string(j) + " not present in H");
}

// Explicit numbering: S = 1, T = 2, (v,b) = 2 + (v-1)*s_mod + b + 1.
inline int h_vertex_id(const AncillarySpec& spec, HVertex x) {
  check_h_vertex(spec, x);
  if (x.v == 0) return 1 + x.b;
  return 2 + (x.v - 1) * spec.s_mod + x.b + 1;
}

inline HVertex h_vertex_of(const AncillarySpec& spec, int id) {
  if (id == 1) return kSourceH;
  if (id == 2) return kSinkH;
  if (id < 3 || id > spec.h_vertex_count()) throw std::out_of_range("H id outside range");
  int off = id - 3;
  return HVertex{off / spec.s_mod + 1, off % spec.s_mod};
}

// Materializes H. Refuses graphs past 2^12 lifted vertices.
inline Graph build_ancillary_explicit(const AncillarySpec& spec) {
  spec.validate();
  if (spec.h_vertex_count() > (1 << 12))
    throw std::length_error("explicit ancillary graph capped at 4096 vertices");
  Graph h(spec.h_vertex_count());
  h.add_edge(h_vertex_id(spec, kSourceH), h_vertex_id(spec, HVertex{spec.k, 0}));
  h.add_edge(h_vertex_id(spec, kSinkH), h_vertex_id(spec, HVertex{spec.k, 1}));
  for (int u = 1; u <= spec.n(); ++u) {
    for (int v : spec.base.nbr[u]) {
      if (u > v) continue;
      auto [from, to] = orient_edge(spec, u, v);
      for (int b = 0; b < spec.s_mod; ++b)
        h.add_edge(h_vertex_id(spec, HVertex{from, b}),
                   h_vertex_id(spec, HVertex{to, (b + 1) % spec.s_mod}));
    }
  }
  return h;
}

struct ImbalanceCount {
  int with_orientation = 0;
  int against = 0;
  int s_mod = 3;
  int imbalance() const { return with_orientation - against; }
  int imbalance_mod() const {
    return ((imbalance() % s_mod) + s_mod) % s_mod;
  }
};

// Walks the cycle once and counts edges traversed along vs against their
// orientation.
inline ImbalanceCount cycle_imbalance(const AncillarySpec& spec, const CycleWitness& w) {
  if (w.length() < 3) throw std::invalid_argument("cycle must have length >= 3");
  ImbalanceCount c;
  c.s_mod = spec.s_mod;
  for (int i = 0; i < w.length(); ++i) {
    int u = w.vertices[i], v = w.vertices[(i + 1) % w.length()];
    if (directed_towards(spec, u, v))
      ++c.with_orientation;
    else
      ++c.against;
  }
  return c;
}

// True iff some simple cycle in the anchor's component has imbalance != 0
// mod s. For s = 3 this is exactly S-T connectivity of H: a closed walk
// from k can wind any such cycle until the residues land on +1, and cycles
// in other components are unreachable. Exhaustive, so capped like the
// enumerator.
inline bool lemma1_predicate(const AncillarySpec& spec) {
  Graph g = spec.base.to_graph();
  for (const auto& cyc : enumerate_simple_cycles(g)) {
    CycleWitness w{cyc};
    if (cycle_imbalance(spec, w).imbalance_mod() != 0 && st_connected(g, spec.k, cyc[0]))
      return true;
  }
  return false;
}

// Bipartite double cover with copies (v, side), side flipping across every
// edge. Vertex ids: (v, side) = v + side * n.
struct DoubledGraph {
  Graph g2;
  int base_n = 0;
  int copy(int v, int side) const {
    if (v < 1 || v > base_n || side < 0 || side > 1)
      throw std::out_of_range("bad doubled-vertex coordinates");
    return v + side * base_n;
  }
};

inline DoubledGraph bipartite_double(const Graph& g) {
  DoubledGraph d;
  d.base_n = g.vertex_count();
  d.g2 = Graph(2 * d.base_n);
  for (auto [u, v] : g.edges()) {
    d.g2.add_edge(d.copy(u, 0), d.copy(v, 1));
    d.g2.add_edge(d.copy(v, 0), d.copy(u, 1));
  }
  return d;
}

}  // namespace qforest
