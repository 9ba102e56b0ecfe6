#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "qforest/ancillary.hpp"
#include "qforest/constants.hpp"
#include "qforest/graph.hpp"
#include "qforest/linalg.hpp"

namespace qforest {

// Edge-space quantum walk deciding whether s reaches t in a sparse graph.
// The graph is replaced by its bipartite double cover so the two diffusion
// rounds alternate over the two sides; both copies of t are marked so a
// path of either parity is caught. The basis has one state per double-cover
// edge plus a dangling probe edge hanging off s's side-0 copy. Real edges
// get weight C*d (C the walk weight constant, d the length guess), the
// probe edge weight 1.
struct WalkSpace {
  Graph hprime;
  int base_n = 0;
  int s_prime = 0;  // copy (s, 0)
  int t0 = 0, t1 = 0;
  int d_guess = 0;
  double edge_weight = 1.0;
  std::vector<std::pair<int, int>> edges;  // index 1.., edge 0 is the probe
  std::vector<std::vector<int>> incident;  // edge indices per H' vertex

  int dim() const { return static_cast<int>(edges.size()); }
  bool side_a(int u) const { return u <= base_n; }
  bool marked(int u) const { return u == t0 || u == t1; }

  double weighted_degree(int u) const {
    double sum = 0;
    for (int e : incident[static_cast<std::size_t>(u)]) sum += e == 0 ? 1.0 : edge_weight;
    return sum;
  }

  // Star state of an H' vertex over the full edge basis.
  RVec zeta(int u) const {
    const auto& star = incident[static_cast<std::size_t>(u)];
    if (star.empty()) throw std::invalid_argument("isolated vertex has no star state");
    RVec z = RVec::Zero(dim());
    double norm = std::sqrt(weighted_degree(u));
    for (int e : star) z(e) = std::sqrt(e == 0 ? 1.0 : edge_weight) / norm;
    return z;
  }
};

inline WalkSpace make_walk_space(const Graph& h, int s, int t, int d, double weight_c) {
  h.check_vertex(s);
  h.check_vertex(t);
  if (s == t) throw std::invalid_argument("walk endpoints must differ");
  if (d < 1) throw std::invalid_argument("length guess must be positive");
  if (2 * h.edge_count() + 1 > 4096)
    throw std::length_error("walk space too large for dense simulation");
  WalkSpace w;
  DoubledGraph dg = bipartite_double(h);
  w.hprime = dg.g2;
  w.base_n = h.vertex_count();
  w.s_prime = dg.copy(s, 0);
  w.t0 = dg.copy(t, 0);
  w.t1 = dg.copy(t, 1);
  w.d_guess = d;
  w.edge_weight = weight_c * d;
  w.edges.emplace_back(0, w.s_prime);  // probe
  for (auto [u, v] : w.hprime.sorted_edges()) w.edges.emplace_back(u, v);
  w.incident.assign(static_cast<std::size_t>(w.hprime.vertex_count()) + 1, {});
  w.incident[static_cast<std::size_t>(w.s_prime)].push_back(0);
  for (int e = 1; e < w.dim(); ++e) {
    w.incident[static_cast<std::size_t>(w.edges[static_cast<std::size_t>(e)].first)]
        .push_back(e);
    w.incident[static_cast<std::size_t>(w.edges[static_cast<std::size_t>(e)].second)]
        .push_back(e);
  }
  return w;
}

// Diffusion at one H' vertex: identity when marked, otherwise the
// reflection through the star state's hyperplane.
inline RMat walk_diffusion(const WalkSpace& w, int u) {
  w.hprime.check_vertex(u);
  RMat d = RMat::Identity(w.dim(), w.dim());
  if (w.marked(u) || w.incident[static_cast<std::size_t>(u)].empty()) return d;
  RVec z = w.zeta(u);
  return d - 2.0 * z * z.transpose();
}

// Same operator through the prepare-reflect-unprepare route: conjugate the
// flip of an anchor edge state by a unitary sending the anchor to the star.
inline RMat walk_diffusion_via_prepare(const WalkSpace& w, int u) {
  w.hprime.check_vertex(u);
  if (w.marked(u) || w.incident[static_cast<std::size_t>(u)].empty())
    return RMat::Identity(w.dim(), w.dim());
  int anchor = w.incident[static_cast<std::size_t>(u)].front();
  RVec z = w.zeta(u);
  RVec e0 = RVec::Zero(w.dim());
  e0(anchor) = 1.0;
  RMat prep = RMat::Identity(w.dim(), w.dim());
  RVec diff = e0 - z;
  if (diff.norm() > 1e-14) {
    diff.normalize();
    prep -= 2.0 * diff * diff.transpose();
  }
  RMat s0 = RMat::Identity(w.dim(), w.dim());
  s0 -= 2.0 * e0 * e0.transpose();
  return prep * s0 * prep.transpose();
}

// One side's full diffusion round: product of the per-vertex reflections,
// which commute because the stars are edge-disjoint.
inline RMat walk_side_reflection(const WalkSpace& w, bool side_a) {
  RMat r = RMat::Identity(w.dim(), w.dim());
  for (int u = 1; u <= w.hprime.vertex_count(); ++u) {
    if (w.side_a(u) != side_a || w.marked(u)) continue;
    if (w.incident[static_cast<std::size_t>(u)].empty()) continue;
    RVec z = w.zeta(u);
    r -= 2.0 * z * z.transpose();
  }
  return r;
}

inline Mat walk_unitary(const WalkSpace& w) {
  return (walk_side_reflection(w, true) * walk_side_reflection(w, false))
      .cast<std::complex<double>>();
}

// Probe-edge mass on eigenphases within theta, dense reference route.
inline double walk_phase_mass_dense(const WalkSpace& w, double theta) {
  SpectralDecomposition sd = unitary_phases(walk_unitary(w));
  Vec e0 = Vec::Zero(w.dim());
  e0(0) = 1.0;
  return phase_mass(sd, e0, theta + 1e-12);
}

// Same number from the singular values of the cross-side overlap matrix:
// each singular pair spans a rotation plane with phases +-2 arccos sigma,
// the probe state's plane masses follow from its star-basis coordinates,
// and whatever is left of the probe state sits at phase 0.
inline double walk_phase_mass(const WalkSpace& w, double theta) {
  std::vector<int> side_a, side_b;
  for (int u = 1; u <= w.hprime.vertex_count(); ++u) {
    if (w.marked(u) || w.incident[static_cast<std::size_t>(u)].empty()) continue;
    (w.side_a(u) ? side_a : side_b).push_back(u);
  }
  int na = static_cast<int>(side_a.size());
  int nb = static_cast<int>(side_b.size());
  double gamma = 1.0 / std::sqrt(w.weighted_degree(w.s_prime));
  int s_row = -1;
  for (int i = 0; i < na; ++i)
    if (side_a[static_cast<std::size_t>(i)] == w.s_prime) s_row = i;
  if (s_row < 0) throw std::logic_error("probe vertex missing from its side");
  double mass = 0;
  double accounted = 0;
  if (nb == 0) {
    // No B-side reflections: the probe's star-state component sits in a
    // plane against nothing, phase pi; the rest is untouched.
    if (theta + 1e-12 >= std::numbers::pi) mass += gamma * gamma;
    accounted = gamma * gamma;
  } else {
    RMat d = RMat::Zero(na, nb);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j) {
        int u = side_a[static_cast<std::size_t>(i)], v = side_b[static_cast<std::size_t>(j)];
        if (w.hprime.has_edge(u, v))
          d(i, j) = w.edge_weight / std::sqrt(w.weighted_degree(u) * w.weighted_degree(v));
      }
    Eigen::JacobiSVD<RMat> svd(d, Eigen::ComputeFullU);
    for (int j = 0; j < na; ++j) {
      double c = gamma * svd.matrixU()(s_row, j);
      double sigma = j < std::min(na, nb) ? svd.singularValues()(j) : 0.0;
      sigma = std::clamp(sigma, 0.0, 1.0);
      double m, phase;
      if (sigma >= 1.0 - 1e-9) {
        phase = 0.0;
        m = c * c;
      } else {
        phase = 2.0 * std::acos(sigma);
        m = c * c / (1.0 - sigma * sigma);
      }
      accounted += m;
      if (phase <= theta + 1e-12) mass += m;
    }
  }
  // Probe mass outside every rotation plane is fixed by both rounds.
  mass += std::max(0.0, 1.0 - accounted);
  return mass;
}

// Classical anchor for the zero-phase mass: effective resistance from the
// probe's vertex to the marked set, all real edges at the walk weight.
// Infinite when no marked vertex shares the component.
inline double resistance_to_marked(const WalkSpace& w) {
  int n = w.hprime.vertex_count();
  std::vector<char> in_comp(static_cast<std::size_t>(n) + 1, 0);
  std::deque<int> queue{w.s_prime};
  in_comp[static_cast<std::size_t>(w.s_prime)] = 1;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : w.hprime.neighbors(u))
      if (!in_comp[static_cast<std::size_t>(v)]) {
        in_comp[static_cast<std::size_t>(v)] = 1;
        queue.push_back(v);
      }
  }
  if (!in_comp[static_cast<std::size_t>(w.t0)] && !in_comp[static_cast<std::size_t>(w.t1)])
    return std::numeric_limits<double>::infinity();
  // Merge marked vertices into a grounded node and solve the Laplacian.
  std::vector<int> index(static_cast<std::size_t>(n) + 1, -1);
  int count = 0;
  for (int u = 1; u <= n; ++u)
    if (in_comp[static_cast<std::size_t>(u)] && !w.marked(u)) index[static_cast<std::size_t>(u)] = count++;
  if (index[static_cast<std::size_t>(w.s_prime)] < 0) return 0.0;
  RMat lap = RMat::Zero(count, count);
  for (auto [u, v] : w.hprime.sorted_edges()) {
    if (!in_comp[static_cast<std::size_t>(u)]) continue;
    int iu = index[static_cast<std::size_t>(u)], iv = index[static_cast<std::size_t>(v)];
    if (iu >= 0) lap(iu, iu) += w.edge_weight;
    if (iv >= 0) lap(iv, iv) += w.edge_weight;
    if (iu >= 0 && iv >= 0) {
      lap(iu, iv) -= w.edge_weight;
      lap(iv, iu) -= w.edge_weight;
    }
  }
  RVec rhs = RVec::Zero(count);
  rhs(index[static_cast<std::size_t>(w.s_prime)]) = 1.0;
  RVec pot = lap.ldlt().solve(rhs);
  return pot(index[static_cast<std::size_t>(w.s_prime)]);
}

// ---------------------------------------------------------------------------
// Query accounting

// Amplitude amplification schedule for landing on a state of overlap
// 1/sqrt(d): smallest m with (2m+1) asin(1/sqrt(d)) >= pi/2.
inline int aa_iterations(int d) {
  if (d < 1) throw std::invalid_argument("degree must be positive");
  double theta0 = std::asin(1.0 / std::sqrt(static_cast<double>(d)));
  int m = static_cast<int>(std::ceil(std::numbers::pi / (4.0 * theta0) - 0.5 - 1e-12));
  return std::max(0, m);
}

// A diffusion round is prepare + flip + unprepare; the prepare unitary
// spends one query per amplification reflection pair plus setup.
inline long long walk_queries_per_reflection(int d_max) {
  return 2ll * (2ll * aa_iterations(d_max) + 2ll);
}

inline long long walk_queries_per_step(int d_max) {
  return 4ll * (2ll * aa_iterations(d_max) + 2ll);
}

inline long long walk_step_count(int d, int n, const Constants& cst) {
  return static_cast<long long>(
      std::ceil(cst.c_walk_steps * std::sqrt(static_cast<double>(d) * n)));
}

inline double walk_threshold(int d, int n, const Constants& cst) {
  return cst.c_theta / std::sqrt(static_cast<double>(d) * n);
}

// ---------------------------------------------------------------------------
// Detection

struct WalkDetection {
  double probability = 0;   // exact phase mass inside the window
  double empirical = 0;     // fraction of sampled trials that landed inside
  long long steps = 0;      // walk steps charged across the trials
  long long queries = 0;    // adjacency array queries those steps cost
};

// Phase-sampling detection: each trial draws an eigenphase of the walk
// operator from the probe state's spectral measure and declares a path
// when the draw lands within the resolution window. The exact mass is
// computed spectrally; trials are Bernoulli draws against it.
inline WalkDetection walk_detect(const WalkSpace& w, int trials, std::mt19937_64& rng,
                                 const Constants& cst) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  WalkDetection out;
  double theta = walk_threshold(w.d_guess, w.base_n, cst);
  out.probability = walk_phase_mass(w, theta);
  long long per_trial = walk_step_count(w.d_guess, w.base_n, cst);
  int max_deg = 1;
  for (int u = 1; u <= w.hprime.vertex_count(); ++u)
    max_deg = std::max(max_deg, static_cast<int>(w.incident[static_cast<std::size_t>(u)].size()));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int hits = 0;
  for (int i = 0; i < trials; ++i)
    if (unif(rng) < out.probability) ++hits;
  out.empirical = static_cast<double>(hits) / trials;
  out.steps = per_trial * trials;
  out.queries = out.steps * walk_queries_per_step(max_deg);
  return out;
}

// ---------------------------------------------------------------------------
// Exact amplitude amplification for star-state preparation

struct AaPreparation {
  RVec state;       // final register state, slot-major
  RVec target;      // uniform superposition over the valid slots
  double fidelity = 0;
  int iterations = 0;
  long long queries = 0;
};

// Prepares the uniform superposition over a vertex's valid adjacency-array
// slots, data register loaded, inside a register padded to d_max slots.
// Start: uniform over all padded slots (invalid ones hold the sentinel).
// Grover rotations lift the valid-slot amplitude; the final step reflects
// through the bisector of the current state and the target, landing
// exactly. Register layout: slot i, data x -> i*(n+1)+x, sentinel x = 0.
inline AaPreparation aa_prepare_phi(const AdjacencyArray& arr, int v, int d_max) {
  arr.check_vertex(v);
  int d_v = arr.degree(v);
  if (d_v < 1) throw std::invalid_argument("vertex has no neighbors to prepare");
  if (d_max < d_v) throw std::invalid_argument("padding below the degree");
  int data_dim = arr.n + 1;
  auto idx = [&](int slot, int x) { return slot * data_dim + x; };
  RVec psi = RVec::Zero(static_cast<Eigen::Index>(d_max) * data_dim);
  for (int i = 0; i < d_max; ++i) {
    int x = i < d_v ? arr.neighbor(v, i + 1) : 0;
    psi(idx(i, x)) = 1.0 / std::sqrt(static_cast<double>(d_max));
  }
  AaPreparation out;
  out.target = RVec::Zero(psi.size());
  for (int i = 0; i < d_v; ++i)
    out.target(idx(i, arr.neighbor(v, i + 1))) = 1.0 / std::sqrt(static_cast<double>(d_v));
  RVec psi0 = psi;
  auto flip_valid = [&](RVec& x) {
    for (int i = 0; i < d_v; ++i)
      for (int c = 0; c < data_dim; ++c) x(idx(i, c)) = -x(idx(i, c));
  };
  double theta0 = std::asin(std::sqrt(static_cast<double>(d_v) / d_max));
  int m = 0;
  if (d_max > d_v) {
    m = std::max(0, static_cast<int>(std::ceil(
                        std::numbers::pi / (4.0 * theta0) - 0.5 - 1e-12)));
    for (int it = 0; it < m; ++it) {
      flip_valid(psi);
      psi = 2.0 * psi0.dot(psi) * psi0 - psi;
    }
    // One adjusted reflection through the bisector lands on the target.
    RVec h = psi + out.target;
    if (h.norm() > 1e-14) {
      h.normalize();
      psi = 2.0 * h.dot(psi) * h - psi;
    }
  }
  out.state = psi;
  out.fidelity = std::pow(out.target.dot(out.state), 2);
  out.iterations = m;
  out.queries = 2ll * m + 2ll;
  return out;
}

}  // namespace qforest
