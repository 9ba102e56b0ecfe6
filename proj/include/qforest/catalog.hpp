#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "qforest/graph.hpp"

namespace qforest {

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n + 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

inline std::vector<std::pair<int, int>> vertex_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) pairs.emplace_back(u, v);
  return pairs;
}

}  // namespace detail

inline Graph graph_from_mask(int n, std::uint64_t mask) {
  auto pairs = detail::vertex_pairs(n);
  Graph g(n);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (mask >> i & 1) g.add_edge(pairs[i].first, pairs[i].second);
  return g;
}

inline bool graph_connected(const Graph& g) {
  int n = g.vertex_count();
  if (n <= 1) return true;
  detail::UnionFind uf(n);
  int parts = n;
  for (auto [u, v] : g.edges())
    if (uf.unite(u, v)) --parts;
  return parts == 1;
}

// Every labeled connected graph on exactly n vertices. Exhaustive over edge
// subsets, so capped at 7 vertices (2^21 masks).
inline std::vector<Graph> connected_graphs_exhaustive(int n) {
  if (n < 1 || n > 7) throw std::length_error("exhaustive catalog capped at 7 vertices");
  int slots = n * (n - 1) / 2;
  std::vector<Graph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots); ++mask) {
    Graph g = graph_from_mask(n, mask);
    if (graph_connected(g)) out.push_back(std::move(g));
  }
  return out;
}

inline Graph sample_graph(int n, double edge_prob, std::mt19937_64& rng) {
  std::bernoulli_distribution flip(edge_prob);
  Graph g(n);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      if (flip(rng)) g.add_edge(u, v);
  return g;
}

inline Graph sample_connected_graph(int n, double edge_prob, std::mt19937_64& rng) {
  for (int tries = 0; tries < 100000; ++tries) {
    Graph g = sample_graph(n, edge_prob, rng);
    if (graph_connected(g)) return g;
  }
  throw std::runtime_error("connected sample did not land; raise edge_prob");
}

inline Graph path_graph(int len_vertices) {
  Graph g(len_vertices);
  for (int u = 1; u < len_vertices; ++u) g.add_edge(u, u + 1);
  return g;
}

inline Graph cycle_graph(const std::vector<int>& order) {
  if (order.size() < 3) throw std::invalid_argument("cycle needs >= 3 vertices");
  int n = static_cast<int>(order.size());
  Graph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(order[i], order[(i + 1) % n]);
  return g;
}

}  // namespace qforest
