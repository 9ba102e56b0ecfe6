#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>

#include "qforest/ancillary.hpp"
#include "qforest/coloring.hpp"
#include "qforest/constants.hpp"
#include "qforest/graph.hpp"
#include "qforest/oracles.hpp"
#include "qforest/qsearch.hpp"
#include "qforest/span_program.hpp"
#include "qforest/walk.hpp"

namespace qforest {

enum class Verdict { Forest, HasCycle, Bipartite, OddCycle };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Forest: return "forest";
    case Verdict::HasCycle: return "has-cycle";
    case Verdict::Bipartite: return "bipartite";
    case Verdict::OddCycle: return "odd-cycle";
  }
  return "unknown";
}

struct OracleCounter {
  long long edge_queries = 0;        // adjacency matrix probes
  long long array_queries = 0;       // adjacency array slot reads
  long long grover_iterations = 0;
  long long walk_steps = 0;
  long long span_phase_queries = 0;  // walk-operator applications in phase sampling
};

struct DecisionReport {
  Verdict verdict = Verdict::Forest;
  int cycle_vertex = 0;  // anchor found by the search, when any
  int detection_d = 0;   // length guess at detection
  std::optional<std::vector<int>> cycle_witness;
  std::optional<std::vector<int>> two_coloring;
  std::optional<std::vector<int>> odd_cycle;
  OracleCounter counters;
  std::vector<RoundTrace> rounds;
  std::uint64_t seed = 0;
  double epsilon = 0;
  int votes = 0;
};

// ---------------------------------------------------------------------------
// Per-anchor subroutine probabilities

inline double span_alpha(int d, const Constants& cst) {
  return cst.alpha_factor * std::sqrt(2.0 * d + 2.0);
}

inline double span_theta(int d, int n_h, const Constants& cst) {
  double w1 = 2.0 * d + 2.0;
  double w0 = 0.5 * n_h * (n_h - 1.0);
  return 1.0 / (cst.c_prime * std::sqrt(w1 * w0));
}

struct SpanCall {
  double probability = 0;
  int n_h = 0;
  double theta = 0;
  long long phase_queries = 0;  // U applications a phase measurement costs
};

// Acceptance probability of the connectivity program on the anchored
// ancillary graph: the matrix-model cycle test for one (k, d) guess.
inline SpanCall span_cycle_probability(const Graph& g, int k, int d, int s_mod,
                                       const std::optional<VertexColoring>& coloring,
                                       const Constants& cst) {
  AncillarySpec spec = make_spec(g, s_mod, k, coloring);
  Graph h = build_ancillary_explicit(spec);
  SpanCall out;
  out.n_h = h.vertex_count();
  out.theta = span_theta(d, out.n_h, cst);
  STProgram program(out.n_h, h_vertex_id(spec, kSourceH), h_vertex_id(spec, kSinkH),
                    span_alpha(d, cst));
  out.probability = acceptance_probability_fast(program, h, out.theta);
  out.phase_queries = static_cast<long long>(std::ceil(1.0 / out.theta));
  return out;
}

struct WalkCall {
  double probability = 0;
  int n_h = 0;
  int d_guess = 0;
  int max_degree = 0;
  long long steps = 0;
};

// Walk detection probability on the lifted graph: the array-model cycle
// test for one (k, d) guess. The S-T distance bound 2d+2 becomes the
// walk's length guess.
inline WalkCall walk_cycle_probability(const Graph& g, int k, int d,
                                       const std::optional<VertexColoring>& coloring,
                                       const Constants& cst) {
  AncillarySpec spec = make_spec(g, 3, k, coloring);
  Graph h = build_ancillary_explicit(spec);
  WalkCall out;
  out.n_h = h.vertex_count();
  out.d_guess = 2 * d + 2;
  WalkSpace w = make_walk_space(h, h_vertex_id(spec, kSourceH),
                                h_vertex_id(spec, kSinkH), out.d_guess, cst.walk_weight);
  out.probability = walk_phase_mass(w, walk_threshold(out.d_guess, out.n_h, cst));
  for (int u = 1; u <= w.hprime.vertex_count(); ++u)
    out.max_degree =
        std::max(out.max_degree, static_cast<int>(w.incident[static_cast<std::size_t>(u)].size()));
  out.steps = walk_step_count(out.d_guess, out.n_h, cst);
  return out;
}

// Orientation flips only touch edges at the anchor, so a coloring matters
// to the lift only through the colors of the anchor's neighbors.
inline std::uint64_t neighbor_color_pattern(const Graph& g, int k,
                                            const VertexColoring& coloring) {
  std::uint64_t pattern = 0;
  const auto& nbrs = g.neighbors(k);
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    if (coloring.color(nbrs[i]) == 1) pattern |= 1ull << i;
  return pattern;
}

// ---------------------------------------------------------------------------
// Deciders

namespace detail {

struct SpanDecider {
  const Graph& g;
  int s_mod;
  const Constants& cst;
  std::mt19937_64& rng;
  OracleCounter& counters;
  std::map<std::tuple<int, int, std::uint64_t>, SpanCall> cache;

  bool operator()(int k, int d) {
    std::optional<VertexColoring> coloring;
    std::uint64_t pattern = 0;
    if (s_mod == 3) {
      coloring = sample_coloring(g.vertex_count(), rng);
      pattern = neighbor_color_pattern(g, k, *coloring);
    }
    auto key = std::tuple{k, d, pattern};
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, span_cycle_probability(g, k, d, s_mod, coloring, cst)).first;
    counters.span_phase_queries += it->second.phase_queries;
    counters.edge_queries += it->second.phase_queries;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return unif(rng) < it->second.probability;
  }
};

struct WalkDecider {
  const Graph& g;
  const Constants& cst;
  std::mt19937_64& rng;
  OracleCounter& counters;
  std::map<std::tuple<int, int, std::uint64_t>, WalkCall> cache;

  bool operator()(int k, int d) {
    VertexColoring coloring = sample_coloring(g.vertex_count(), rng);
    std::uint64_t pattern = neighbor_color_pattern(g, k, coloring);
    auto key = std::tuple{k, d, pattern};
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, walk_cycle_probability(g, k, d, coloring, cst)).first;
    counters.walk_steps += it->second.steps;
    counters.array_queries += it->second.steps * walk_queries_per_step(it->second.max_degree);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return unif(rng) < it->second.probability;
  }
};

inline void attach_cycle_witness(const Graph& g, DecisionReport& report) {
  if (auto cyc = has_cycle(g)) report.cycle_witness = cyc->vertices;
}

}  // namespace detail

inline DecisionReport decide_forest_matrix(const Graph& g, std::uint64_t seed,
                                           double epsilon, const Constants& cst) {
  DecisionReport report;
  report.seed = seed;
  report.epsilon = epsilon;
  report.votes = amplify_rounds(epsilon, cst);
  std::mt19937_64 rng(seed);
  if (g.vertex_count() <= 2 || g.edge_count() == 0) return report;  // no room for a cycle
  detail::SpanDecider decider{g, 3, cst, rng, report.counters, {}};
  auto boosted = [&](int k, int d) {
    return amplified_vote([&] { return decider(k, d); }, report.votes, cst);
  };
  DoublingResult r = doubling_search(g.vertex_count(), boosted, rng, cst);
  report.rounds = r.rounds;
  report.counters.grover_iterations = r.total_iterations;
  if (r.found) {
    report.verdict = Verdict::HasCycle;
    report.cycle_vertex = r.found->first;
    report.detection_d = r.found->second;
    detail::attach_cycle_witness(g, report);
  }
  return report;
}

inline DecisionReport decide_bipartite_matrix(const Graph& g, std::uint64_t seed,
                                              double epsilon, const Constants& cst) {
  DecisionReport report;
  report.verdict = Verdict::Bipartite;
  report.seed = seed;
  report.epsilon = epsilon;
  report.votes = amplify_rounds(epsilon, cst);
  std::mt19937_64 rng(seed);
  BipartiteResult oracle = is_bipartite(g);
  if (g.vertex_count() <= 2 || g.edge_count() == 0) {
    report.two_coloring = oracle.coloring;
    return report;
  }
  detail::SpanDecider decider{g, 2, cst, rng, report.counters, {}};
  auto boosted = [&](int k, int d) {
    return amplified_vote([&] { return decider(k, d); }, report.votes, cst);
  };
  DoublingResult r = doubling_search(g.vertex_count(), boosted, rng, cst);
  report.rounds = r.rounds;
  report.counters.grover_iterations = r.total_iterations;
  if (r.found) {
    report.verdict = Verdict::OddCycle;
    report.cycle_vertex = r.found->first;
    report.detection_d = r.found->second;
    if (oracle.odd_cycle) report.odd_cycle = oracle.odd_cycle;
  } else if (oracle.coloring) {
    report.two_coloring = oracle.coloring;
  }
  return report;
}

inline DecisionReport decide_forest_array(const AdjacencyArray& arr, std::uint64_t seed,
                                          double epsilon, const Constants& cst) {
  arr.validate();
  DecisionReport report;
  report.seed = seed;
  report.epsilon = epsilon;
  report.votes = amplify_rounds(epsilon, cst);
  Graph g = arr.to_graph();
  // A graph with as many edges as vertices must contain a cycle: reject
  // before any quantum work.
  if (edge_count(arr).dense) {
    report.verdict = Verdict::HasCycle;
    detail::attach_cycle_witness(g, report);
    return report;
  }
  std::mt19937_64 rng(seed);
  if (g.vertex_count() <= 2 || g.edge_count() == 0) return report;
  detail::WalkDecider decider{g, cst, rng, report.counters, {}};
  auto boosted = [&](int k, int d) {
    return amplified_vote([&] { return decider(k, d); }, report.votes, cst);
  };
  DoublingResult r = doubling_search(g.vertex_count(), boosted, rng, cst);
  report.rounds = r.rounds;
  report.counters.grover_iterations = r.total_iterations;
  if (r.found) {
    report.verdict = Verdict::HasCycle;
    report.cycle_vertex = r.found->first;
    report.detection_d = r.found->second;
    detail::attach_cycle_witness(g, report);
  }
  return report;
}

}  // namespace qforest
