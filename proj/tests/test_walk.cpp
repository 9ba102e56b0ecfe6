#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qforest/catalog.hpp"
#include "qforest/oracles.hpp"
#include "qforest/walk.hpp"

using namespace qforest;

namespace {

Constants defaults;

// Random graph with m < n so the walk regime applies.
Graph sample_sparse(int n, std::mt19937_64& rng) {
  for (;;) {
    Graph g = sample_graph(n, 1.6 / n, rng);
    if (g.edge_count() < g.vertex_count()) return g;
  }
}

}  // namespace

TEST_CASE("walk space layout over a path") {
  Graph p3 = path_graph(3);
  WalkSpace w = make_walk_space(p3, 1, 3, 2, 4.0);
  REQUIRE(w.dim() == 5);  // four double-cover edges plus the probe
  REQUIRE(w.s_prime == 1);
  REQUIRE(w.t0 == 3);
  REQUIRE(w.t1 == 6);
  REQUIRE(w.edge_weight == 8.0);
  REQUIRE(w.hprime.vertex_count() == 6);
  REQUIRE(w.edges[0] == std::pair{0, 1});

  // Probe weight 1 against weighted degree 1 + deg * C * d.
  REQUIRE(w.weighted_degree(1) == 9.0);
  RVec z = w.zeta(1);
  REQUIRE(z(0) == Catch::Approx(1.0 / 3.0));
  REQUIRE(z.norm() == Catch::Approx(1.0));

  REQUIRE_THROWS_AS(make_walk_space(p3, 1, 1, 2, 4.0), std::invalid_argument);
  REQUIRE_THROWS_AS(make_walk_space(p3, 1, 3, 0, 4.0), std::invalid_argument);

  // Isolated vertices carry no star state.
  Graph with_iso(4);
  with_iso.add_edge(1, 2);
  WalkSpace wi = make_walk_space(with_iso, 1, 2, 1, 4.0);
  REQUIRE_THROWS_AS(wi.zeta(3), std::invalid_argument);
  REQUIRE_THROWS_AS(wi.zeta(7), std::invalid_argument);
}

TEST_CASE("diffusion operators are reflections and marked blocks are identity") {
  Graph g(4);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  WalkSpace w = make_walk_space(g, 1, 4, 3, 4.0);
  for (int u = 1; u <= w.hprime.vertex_count(); ++u) {
    RMat d = walk_diffusion(w, u);
    REQUIRE((d * d - RMat::Identity(w.dim(), w.dim())).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE((d - d.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    if (w.marked(u))
      REQUIRE((d - RMat::Identity(w.dim(), w.dim())).cwiseAbs().maxCoeff() == 0.0);
    // Prepare-flip-unprepare builds the same operator.
    RMat via = walk_diffusion_via_prepare(w, u);
    REQUIRE((d - via).cwiseAbs().maxCoeff() < 1e-9);
  }
  REQUIRE(is_unitary(walk_unitary(w), 1e-10));
}

TEST_CASE("single edge holds the frozen zero-phase mass") {
  Graph k2(2);
  k2.add_edge(1, 2);
  for (int d : {1, 2, 4}) {
    WalkSpace w = make_walk_space(k2, 1, 2, d, 4.0);
    double expect = 4.0 * d / (4.0 * d + 1.0);
    REQUIRE(walk_phase_mass(w, 1e-6) == Catch::Approx(expect).margin(1e-9));
    REQUIRE(walk_phase_mass_dense(w, 1e-6) == Catch::Approx(expect).margin(1e-9));
  }
  // Severed edge: the probe state is exactly orthogonal to every
  // small-phase eigenvector.
  Graph bare(2);
  WalkSpace w = make_walk_space(bare, 1, 2, 2, 4.0);
  REQUIRE(walk_phase_mass(w, 1e-6) == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(walk_phase_mass(w, 3.0) == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(walk_phase_mass(w, 3.2) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("fast and dense phase masses agree on random sparse graphs") {
  std::mt19937_64 rng(911);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 5 + static_cast<int>(rng() % 4);
    Graph g = sample_sparse(n, rng);
    int s = 1 + static_cast<int>(rng() % n);
    int t = 1 + static_cast<int>(rng() % n);
    if (s == t) continue;
    WalkSpace w = make_walk_space(g, s, t, 2 + static_cast<int>(rng() % 4), 4.0);
    for (double theta : {1e-6, 0.1, 0.5, 2.0, 3.2}) {
      double fast = walk_phase_mass(w, theta);
      double dense = walk_phase_mass_dense(w, theta);
      REQUIRE(fast == Catch::Approx(dense).margin(1e-9));
    }
    REQUIRE(walk_phase_mass(w, 3.2) == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("zero-phase mass equals the resistance formula") {
  std::mt19937_64 rng(323);
  int positives = 0, negatives = 0;
  while (positives < 12 || negatives < 12) {
    int n = 4 + static_cast<int>(rng() % 5);
    Graph g = sample_sparse(n, rng);
    int s = 1 + static_cast<int>(rng() % n);
    int t = 1 + static_cast<int>(rng() % n);
    if (s == t) continue;
    WalkSpace w = make_walk_space(g, s, t, 3, 4.0);
    double r = resistance_to_marked(w);
    double mass = walk_phase_mass(w, 1e-6);
    if (std::isinf(r)) {
      ++negatives;
      REQUIRE(mass == Catch::Approx(0.0).margin(1e-10));
    } else {
      ++positives;
      REQUIRE(mass == Catch::Approx(1.0 / (1.0 + r)).margin(1e-9));
    }
  }
}

TEST_CASE("statistic is invariant under vertex relabeling") {
  std::mt19937_64 rng(77);
  Graph g(6);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  g.add_edge(4, 5);
  g.add_edge(2, 6);
  std::vector<int> perm{3, 5, 1, 6, 2, 4};  // image of each vertex
  Graph h(6);
  for (auto [u, v] : g.edges())
    h.add_edge(perm[static_cast<std::size_t>(u) - 1], perm[static_cast<std::size_t>(v) - 1]);
  WalkSpace wg = make_walk_space(g, 1, 5, 4, 4.0);
  WalkSpace wh = make_walk_space(h, perm[0], perm[4], 4, 4.0);
  for (double theta : {1e-6, 0.2, 1.0}) {
    REQUIRE(walk_phase_mass(wg, theta) ==
            Catch::Approx(walk_phase_mass(wh, theta)).margin(1e-9));
  }
}

TEST_CASE("path families meet the detection contract") {
  std::mt19937_64 rng(2026);
  for (int len = 2; len <= 5; ++len) {
    Graph pos = path_graph(len + 1);
    WalkSpace wp = make_walk_space(pos, 1, len + 1, len, defaults.walk_weight);
    WalkDetection dp = walk_detect(wp, 200, rng, defaults);
    REQUIRE(dp.probability >= 2.0 / 3.0);
    REQUIRE(std::abs(dp.empirical - dp.probability) < 0.15);
    REQUIRE(dp.steps ==
            200ll * walk_step_count(len, len + 1, defaults));

    // Middle edge removed: rejection must be just as reliable.
    Graph neg(len + 1);
    int skip = len / 2 + 1;
    for (int v = 1; v <= len; ++v)
      if (v != skip) neg.add_edge(v, v + 1);
    WalkSpace wn = make_walk_space(neg, 1, len + 1, len, defaults.walk_weight);
    WalkDetection dn = walk_detect(wn, 200, rng, defaults);
    REQUIRE(dn.probability <= 1.0 / 3.0);
  }
}

TEST_CASE("lifted instances keep the contract through the reduction") {
  // A triangle's lift connects S to T; the walk sees it within d = 2c+2.
  Graph tri = cycle_graph({1, 2, 3});
  AncillarySpec spec = make_spec(tri, 3, 1);
  Graph h = build_ancillary_explicit(spec);
  int s_id = h_vertex_id(spec, kSourceH);
  int t_id = h_vertex_id(spec, kSinkH);
  std::mt19937_64 rng(5);
  WalkSpace wp = make_walk_space(h, s_id, t_id, 8, defaults.walk_weight);
  WalkDetection dp = walk_detect(wp, 200, rng, defaults);
  REQUIRE(dp.probability >= 2.0 / 3.0);

  // A path's lift never connects them.
  Graph p4 = path_graph(4);
  AncillarySpec spec2 = make_spec(p4, 3, 2);
  Graph h2 = build_ancillary_explicit(spec2);
  WalkSpace wn = make_walk_space(h2, h_vertex_id(spec2, kSourceH),
                                 h_vertex_id(spec2, kSinkH), 8, defaults.walk_weight);
  WalkDetection dn = walk_detect(wn, 200, rng, defaults);
  REQUIRE(dn.probability <= 1.0 / 3.0);
}

TEST_CASE("query schedule stays within the square-root budget") {
  REQUIRE(aa_iterations(1) == 0);
  REQUIRE(aa_iterations(2) == 1);
  REQUIRE(aa_iterations(4) == 1);
  for (int d = 1; d <= 64; ++d) {
    int m = aa_iterations(d);
    int low = static_cast<int>(std::floor(std::numbers::pi / 4.0 * std::sqrt(d))) - 1;
    int high = static_cast<int>(std::ceil(std::numbers::pi / 4.0 * std::sqrt(d))) + 1;
    REQUIRE(m >= std::max(0, low));
    REQUIRE(m <= high);
    REQUIRE(walk_queries_per_step(d) == 8ll * m + 8ll);
    REQUIRE(static_cast<double>(walk_queries_per_step(d)) <= 12.0 * std::sqrt(d));
  }
}

TEST_CASE("amplitude amplification lands exactly on the star state") {
  // Star K_{1,4} plus padding: every degree/padding combination lands with
  // fidelity indistinguishable from 1.
  Graph star(5);
  for (int v = 2; v <= 5; ++v) star.add_edge(1, v);
  AdjacencyArray arr = AdjacencyArray::from_graph(star);
  for (int pad : {4, 5, 8, 16}) {
    AaPreparation prep = aa_prepare_phi(arr, 1, pad);
    REQUIRE(prep.fidelity >= 1.0 - 1e-9);
    REQUIRE(prep.state.norm() == Catch::Approx(1.0));
    REQUIRE(prep.queries == 2ll * prep.iterations + 2ll);
  }
  // Degree-1 vertex amplified out of a 64-slot register: the hard ratio.
  AaPreparation hard = aa_prepare_phi(arr, 2, 64);
  REQUIRE(hard.fidelity >= 1.0 - 1e-9);
  REQUIRE(hard.iterations == aa_iterations(64));

  REQUIRE_THROWS_AS(aa_prepare_phi(arr, 1, 3), std::invalid_argument);
  AdjacencyArray with_iso;
  with_iso.n = 3;
  with_iso.nbr = {{}, {2}, {1}, {}};
  REQUIRE_THROWS_AS(aa_prepare_phi(with_iso, 3, 4), std::invalid_argument);
}

TEST_CASE("iteration counts grow like the square root of the padding") {
  Graph k2(2);
  k2.add_edge(1, 2);
  AdjacencyArray arr = AdjacencyArray::from_graph(k2);
  for (int d = 1; d <= 64; ++d) {
    AaPreparation prep = aa_prepare_phi(arr, 1, d);
    REQUIRE(prep.fidelity >= 1.0 - 1e-9);
    REQUIRE(prep.iterations == aa_iterations(d));
  }
}
