#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qforest {

// Simple undirected graph on vertices 1..n. Adjacency lists are kept sorted;
// parallel edges and self loops are rejected.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : n_(n), adj_(static_cast<std::size_t>(n) + 1) {
    if (n < 0) throw std::invalid_argument("vertex count must be nonnegative");
  }

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  void check_vertex(int u) const {
    if (u < 1 || u > n_)
      throw std::out_of_range("vertex " + std::to_string(u) + " outside 1.." +
                              std::to_string(n_));
  }

  void add_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("self loop rejected");
    if (has_edge(u, v)) throw std::invalid_argument("parallel edge rejected");
    auto insert_sorted = [](std::vector<int>& list, int w) {
      list.insert(std::lower_bound(list.begin(), list.end(), w), w);
    };
    insert_sorted(adj_[u], v);
    insert_sorted(adj_[v], u);
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }

  bool has_edge(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    const auto& list = adj_[u];
    return std::binary_search(list.begin(), list.end(), v);
  }

  int degree(int u) const {
    check_vertex(u);
    return static_cast<int>(adj_[u].size());
  }

  // Sorted ascending.
  const std::vector<int>& neighbors(int u) const {
    check_vertex(u);
    return adj_[u];
  }

  // Each edge once, as (min,max), in insertion order.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  std::vector<std::pair<int, int>> sorted_edges() const {
    auto e = edges_;
    std::sort(e.begin(), e.end());
    return e;
  }

 private:
  int n_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<std::pair<int, int>> edges_;
};

// Adjacency-array access model: per-vertex neighbor lists with meaningful
// slot order (slot j returns the j-th stored neighbor, 1-based).
struct AdjacencyArray {
  int n = 0;
  std::vector<std::vector<int>> nbr;  // nbr[u] for u in 1..n; nbr[0] unused

  static AdjacencyArray from_graph(const Graph& g) {
    AdjacencyArray a;
    a.n = g.vertex_count();
    a.nbr.resize(static_cast<std::size_t>(a.n) + 1);
    for (int u = 1; u <= a.n; ++u) a.nbr[u] = g.neighbors(u);
    return a;
  }

  int degree(int u) const {
    check_vertex(u);
    return static_cast<int>(nbr[u].size());
  }

  // 1-based slot; throws out_of_range past the degree.
  int neighbor(int u, int j) const {
    check_vertex(u);
    if (j < 1 || j > degree(u))
      throw std::out_of_range("slot " + std::to_string(j) + " outside 1..d(" +
                              std::to_string(u) + ")");
    return nbr[u][static_cast<std::size_t>(j) - 1];
  }

  void check_vertex(int u) const {
    if (u < 1 || u > n)
      throw std::out_of_range("vertex " + std::to_string(u) + " outside 1.." +
                              std::to_string(n));
  }

  // Entries in range, no self loops, no duplicate slots, lists symmetric.
  void validate() const {
    if (n < 0) throw std::invalid_argument("vertex count must be nonnegative");
    if (nbr.size() != static_cast<std::size_t>(n) + 1)
      throw std::invalid_argument("neighbor table size mismatch");
    for (int u = 1; u <= n; ++u) {
      std::vector<int> seen;
      for (int v : nbr[u]) {
        if (v < 1 || v > n)
          throw std::invalid_argument("neighbor out of range at vertex " +
                                      std::to_string(u));
        if (v == u) throw std::invalid_argument("self loop at vertex " + std::to_string(u));
        seen.push_back(v);
        const auto& back = nbr[v];
        if (std::find(back.begin(), back.end(), u) == back.end())
          throw std::invalid_argument("asymmetric adjacency at edge " +
                                      std::to_string(u) + "-" + std::to_string(v));
      }
      std::sort(seen.begin(), seen.end());
      if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw std::invalid_argument("duplicate neighbor at vertex " + std::to_string(u));
    }
  }

  Graph to_graph() const {
    validate();
    Graph g(n);
    for (int u = 1; u <= n; ++u)
      for (int v : nbr[u])
        if (u < v) g.add_edge(u, v);
    return g;
  }
};

struct EdgeCount {
  long long m = 0;
  bool dense = false;  // m >= n: cannot be a forest
};

// Sums array degrees; throws on an odd handshake sum.
inline EdgeCount edge_count(const AdjacencyArray& a) {
  long long total = 0;
  for (int u = 1; u <= a.n; ++u) total += a.degree(u);
  if (total % 2 != 0) throw std::invalid_argument("odd degree sum: broken adjacency");
  EdgeCount ec;
  ec.m = total / 2;
  ec.dense = ec.m >= a.n;
  return ec;
}

}  // namespace qforest
