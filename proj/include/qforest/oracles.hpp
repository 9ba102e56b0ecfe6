#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qforest/graph.hpp"

namespace qforest {

struct CycleWitness {
  std::vector<int> vertices;  // in cycle order, no repeat of the start
  int length() const { return static_cast<int>(vertices.size()); }
};

// Checks that the witness is a simple cycle of g.
inline bool cycle_witness_valid(const Graph& g, const CycleWitness& w) {
  int len = w.length();
  if (len < 3) return false;
  std::vector<int> sorted = w.vertices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (int i = 0; i < len; ++i) {
    int u = w.vertices[i], v = w.vertices[(i + 1) % len];
    if (u < 1 || u > g.vertex_count() || !g.has_edge(u, v)) return false;
  }
  return true;
}

// DFS cycle finder. Deterministic: roots and neighbors are scanned in
// ascending order, so the same graph always yields the same witness.
inline std::optional<CycleWitness> has_cycle(const Graph& g) {
  int n = g.vertex_count();
  std::vector<char> visited(n + 1, 0);
  std::vector<int> parent(n + 1, 0);
  for (int root = 1; root <= n; ++root) {
    if (visited[root]) continue;
    // Iterative DFS; stack frames carry the neighbor cursor.
    std::vector<std::pair<int, std::size_t>> stack;
    std::vector<int> path;
    std::vector<char> on_path(n + 1, 0);
    visited[root] = 1;
    stack.push_back({root, 0});
    path.push_back(root);
    on_path[root] = 1;
    while (!stack.empty()) {
      auto& [u, cursor] = stack.back();
      const auto& nb = g.neighbors(u);
      if (cursor == nb.size()) {
        on_path[u] = 0;
        path.pop_back();
        stack.pop_back();
        continue;
      }
      int v = nb[cursor++];
      if (v == parent[u]) continue;
      if (on_path[v]) {
        CycleWitness w;
        auto it = std::find(path.begin(), path.end(), v);
        w.vertices.assign(it, path.end());
        return w;
      }
      if (!visited[v]) {
        visited[v] = 1;
        parent[v] = u;
        stack.push_back({v, 0});
        path.push_back(v);
        on_path[v] = 1;
      }
    }
  }
  return std::nullopt;
}

struct BipartiteResult {
  std::optional<std::vector<int>> coloring;  // [0]=unused, entries 0/1
  std::optional<CycleWitness> odd_cycle;
  bool bipartite() const { return coloring.has_value(); }
};

// BFS two-coloring; on failure extracts an odd cycle through the offending
// edge via the BFS parent paths to their lowest common ancestor.
inline BipartiteResult is_bipartite(const Graph& g) {
  int n = g.vertex_count();
  std::vector<int> color(n + 1, -1), parent(n + 1, 0), depth(n + 1, 0);
  for (int root = 1; root <= n; ++root) {
    if (color[root] != -1) continue;
    color[root] = 0;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : g.neighbors(u)) {
        if (color[v] == -1) {
          color[v] = color[u] ^ 1;
          parent[v] = u;
          depth[v] = depth[u] + 1;
          queue.push_back(v);
        } else if (color[v] == color[u]) {
          std::vector<int> up_u{u}, up_v{v};
          int a = u, b = v;
          while (depth[a] > depth[b]) up_u.push_back(a = parent[a]);
          while (depth[b] > depth[a]) up_v.push_back(b = parent[b]);
          while (a != b) {
            up_u.push_back(a = parent[a]);
            up_v.push_back(b = parent[b]);
          }
          // up_u ends at the LCA, up_v stops just before it.
          CycleWitness w;
          w.vertices = up_u;
          up_v.pop_back();
          w.vertices.insert(w.vertices.end(), up_v.rbegin(), up_v.rend());
          BipartiteResult r;
          r.odd_cycle = std::move(w);
          return r;
        }
      }
    }
  }
  BipartiteResult r;
  r.coloring = std::move(color);
  return r;
}

// BFS distance, or nullopt if t is unreachable from s.
inline std::optional<int> st_distance(const Graph& g, int s, int t) {
  g.check_vertex(s);
  g.check_vertex(t);
  if (s == t) return 0;
  std::vector<int> dist(g.vertex_count() + 1, -1);
  dist[s] = 0;
  std::deque<int> queue{s};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : g.neighbors(u)) {
      if (dist[v] != -1) continue;
      dist[v] = dist[u] + 1;
      if (v == t) return dist[v];
      queue.push_back(v);
    }
  }
  return std::nullopt;
}

inline bool st_connected(const Graph& g, int s, int t) {
  return st_distance(g, s, t).has_value();
}

// Every simple cycle, each listed once: the smallest vertex first, second
// entry smaller than the last (kills the reversed duplicate). Intended for
// exhaustive checks; refuses graphs past 12 vertices.
inline std::vector<std::vector<int>> enumerate_simple_cycles(const Graph& g) {
  int n = g.vertex_count();
  if (n > 12) throw std::length_error("cycle enumeration capped at 12 vertices");
  std::vector<std::vector<int>> cycles;
  std::vector<int> path;
  std::vector<char> used(n + 1, 0);
  auto dfs = [&](auto&& self, int start, int u) -> void {
    for (int v : g.neighbors(u)) {
      if (v == start && path.size() >= 3) {
        if (path[1] < path.back()) cycles.push_back(path);
      } else if (v > start && !used[v]) {
        used[v] = 1;
        path.push_back(v);
        self(self, start, v);
        path.pop_back();
        used[v] = 0;
      }
    }
  };
  for (int start = 1; start <= n; ++start) {
    path = {start};
    used.assign(n + 1, 0);
    used[start] = 1;
    dfs(dfs, start, start);
  }
  return cycles;
}

}  // namespace qforest
