#pragma once

#include <cmath>
#include <deque>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qforest/graph.hpp"
#include "qforest/linalg.hpp"

namespace qforest {

// Span program deciding s-t connectivity of a graph on n vertices given by
// edge availability. Slots: 0 carries the scaled target (always available),
// 1 is its shadow (never available), then every unordered pair except {s,t}
// in lexicographic order. The input vector of pair {x,y}, x < y, is
// e_y - e_x; slot 0 holds (e_t - e_s)/alpha and slot 1 the complementary
// sqrt(1 - 1/alpha^2) (e_t - e_s), so the columns jointly satisfy
// M M^T = n I - J no matter what alpha is.
class STProgram {
 public:
  STProgram(int n, int s, int t, double alpha) : n_(n), s_(s), t_(t), alpha_(alpha) {
    if (n < 3) throw std::invalid_argument("program needs at least 3 vertices");
    if (s < 1 || s > n || t < 1 || t > n || s == t)
      throw std::invalid_argument("bad terminal pair");
    if (alpha < 1.0) throw std::domain_error("alpha must be >= 1");
    for (int x = 1; x <= n; ++x)
      for (int y = x + 1; y <= n; ++y)
        if (!(x == std::min(s, t) && y == std::max(s, t))) pairs_.emplace_back(x, y);
  }

  int n() const { return n_; }
  int s() const { return s_; }
  int t() const { return t_; }
  double alpha() const { return alpha_; }
  int slot_count() const { return static_cast<int>(pairs_.size()) + 2; }

  std::pair<int, int> pair_of_slot(int j) const {
    if (j < 2 || j >= slot_count()) throw std::out_of_range("no pair at this slot");
    return pairs_[static_cast<std::size_t>(j) - 2];
  }

  int slot_of_pair(int x, int y) const {
    if (x > y) std::swap(x, y);
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::pair{x, y});
    if (it == pairs_.end() || *it != std::pair{x, y})
      throw std::out_of_range("pair has no ordinary slot");
    return static_cast<int>(it - pairs_.begin()) + 2;
  }

  RVec target() const {
    RVec tau = RVec::Zero(n_);
    tau(t_ - 1) = 1.0;
    tau(s_ - 1) = -1.0;
    return tau;
  }

  RVec input_vector(int j) const {
    if (j == 0) return target() / alpha_;
    if (j == 1) return std::sqrt(1.0 - 1.0 / (alpha_ * alpha_)) * target();
    auto [x, y] = pair_of_slot(j);
    RVec v = RVec::Zero(n_);
    v(y - 1) = 1.0;
    v(x - 1) = -1.0;
    return v;
  }

  RMat m_tilde() const {
    RMat m(n_, slot_count());
    for (int j = 0; j < slot_count(); ++j) m.col(j) = input_vector(j);
    return m;
  }

  // The unmodified program: every pair, {s,t} included, is an ordinary
  // input. Used for the negative witness size convention.
  RMat m_plain() const {
    RMat m = RMat::Zero(n_, n_ * (n_ - 1) / 2);
    int col = 0;
    for (int x = 1; x <= n_; ++x)
      for (int y = x + 1; y <= n_; ++y) {
        m(y - 1, col) = 1.0;
        m(x - 1, col) = -1.0;
        ++col;
      }
    return m;
  }

  void check_input(const Graph& x) const {
    if (x.vertex_count() != n_) throw std::invalid_argument("input graph size mismatch");
    if (x.has_edge(s_, t_))
      throw std::invalid_argument("terminals must not be directly adjacent");
  }

  // Slot indices lit by the input: slot 0 plus one per edge.
  std::vector<int> available_slots(const Graph& x) const {
    check_input(x);
    std::vector<int> out{0};
    for (auto [u, v] : x.sorted_edges()) out.push_back(slot_of_pair(u, v));
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  int n_, s_, t_;
  double alpha_;
  std::vector<std::pair<int, int>> pairs_;
};

// ---------------------------------------------------------------------------
// Witnesses

struct PositiveWitness {
  RVec coefficients;  // one per available ordinary slot, matching order below
  std::vector<int> slots;
  double w1 = 0;
};

// Minimal-norm solution of (available edge vectors) w = e_t - e_s. Exists
// iff s and t are connected in x; w1 is then the effective resistance.
inline std::optional<PositiveWitness> positive_witness(const STProgram& p, const Graph& x) {
  p.check_input(x);
  std::vector<int> slots;
  for (auto [u, v] : x.sorted_edges()) slots.push_back(p.slot_of_pair(u, v));
  std::sort(slots.begin(), slots.end());
  RMat cols(p.n(), slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) cols.col(i) = p.input_vector(slots[i]);
  RVec tau = p.target();
  if (slots.empty()) return std::nullopt;
  Eigen::CompleteOrthogonalDecomposition<RMat> cod(cols);
  RVec w = cod.solve(tau);
  if ((cols * w - tau).norm() > 1e-7 * tau.norm()) return std::nullopt;
  PositiveWitness out;
  out.coefficients = w;
  out.slots = slots;
  out.w1 = w.squaredNorm();
  return out;
}

// Unit coefficients along an explicit s-t path.
inline PositiveWitness positive_witness_from_path(const STProgram& p,
                                                  const std::vector<int>& path) {
  if (path.size() < 2 || path.front() != p.s() || path.back() != p.t())
    throw std::invalid_argument("path must run from s to t");
  PositiveWitness out;
  out.coefficients = RVec(path.size() - 1);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    int a = path[i], b = path[i + 1];
    out.slots.push_back(p.slot_of_pair(a, b));
    out.coefficients(i) = a < b ? 1.0 : -1.0;
  }
  out.w1 = static_cast<double>(path.size() - 1);
  return out;
}

struct NegativeWitness {
  RVec vertex_weights;  // indicator of t's side of the cut
  double w0_plain = 0;
  double w0_modified = 0;
};

// Indicator of t's component; orthogonal to every available edge vector,
// unit pairing with the target. w0 sums the squared pairings over the
// unavailable slots: for the plain program that is |C|(n - |C|), for the
// modified one the same minus 1/alpha^2 (the shadow slot replaces {s,t}).
inline std::optional<NegativeWitness> negative_witness(const STProgram& p, const Graph& x) {
  p.check_input(x);
  std::vector<char> in_c(p.n() + 1, 0);
  std::deque<int> queue{p.t()};
  in_c[p.t()] = 1;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : x.neighbors(u))
      if (!in_c[v]) {
        in_c[v] = 1;
        queue.push_back(v);
      }
  }
  if (in_c[p.s()]) return std::nullopt;
  NegativeWitness out;
  out.vertex_weights = RVec::Zero(p.n());
  for (int v = 1; v <= p.n(); ++v) out.vertex_weights(v - 1) = in_c[v] ? 1.0 : 0.0;
  double cross = 0;
  for (int u = 1; u <= p.n(); ++u)
    for (int v = u + 1; v <= p.n(); ++v)
      if (in_c[u] != in_c[v]) {
        if (x.has_edge(u, v)) throw std::logic_error("edge crossing the cut");
        cross += 1.0;
      }
  out.w0_plain = cross;
  out.w0_modified = cross - 1.0 / (p.alpha() * p.alpha());
  return out;
}

inline bool evaluate_st(const STProgram& p, const Graph& x) {
  return positive_witness(p, x).has_value();
}

// ---------------------------------------------------------------------------
// Operators

// Projector onto ker(m_tilde), in closed form: M M^T = n I - J makes
// M^T M / n idempotent.
inline RMat kernel_projector(const STProgram& p) {
  RMat m = p.m_tilde();
  RMat lambda = RMat::Identity(p.slot_count(), p.slot_count()) - m.transpose() * m / p.n();
  double drift = (lambda * lambda - lambda).cwiseAbs().maxCoeff();
  if (drift > 1e-10) throw std::runtime_error("kernel projector drifted");
  return lambda;
}

inline RMat availability_projector(const STProgram& p, const Graph& x) {
  RMat pi = RMat::Zero(p.slot_count(), p.slot_count());
  for (int j : p.available_slots(x)) pi(j, j) = 1.0;
  return pi;
}

inline Mat build_unitary(const STProgram& p, const Graph& x) {
  RMat lambda = kernel_projector(p);
  RMat pi = availability_projector(p, x);
  int m = p.slot_count();
  RMat u = (2.0 * lambda - RMat::Identity(m, m)) * (2.0 * pi - RMat::Identity(m, m));
  return u.cast<std::complex<double>>();
}

// Mass of the slot-0 basis state on eigenphases within theta. The dense
// reference route.
inline double acceptance_probability_dense(const STProgram& p, const Graph& x, double theta) {
  Mat u = build_unitary(p, x);
  SpectralDecomposition sd = unitary_phases(u);
  Vec e0 = Vec::Zero(p.slot_count());
  e0(0) = 1.0;
  return phase_mass(sd, e0, theta + 1e-12);
}

// Same number via the Jordan reduction: restrict the kernel projector to
// the available slots and read phases 2 arccos sqrt(eigenvalue). The
// restricted matrix has closed-form entries, so the eigenproblem is
// (a+1)-dimensional instead of (binom(n,2)+1)-dimensional.
inline double acceptance_probability_fast(const STProgram& p, const Graph& x, double theta) {
  auto slots = p.available_slots(x);
  int a = static_cast<int>(slots.size());
  RMat gram(a, a);
  for (int i = 0; i < a; ++i) {
    RVec vi = p.input_vector(slots[i]);
    for (int j = i; j < a; ++j) {
      RVec vj = p.input_vector(slots[j]);
      double val = (i == j ? 1.0 : 0.0) - vi.dot(vj) / p.n();
      gram(i, j) = val;
      gram(j, i) = val;
    }
  }
  Eigen::SelfAdjointEigenSolver<RMat> eig(gram);
  if (eig.info() != Eigen::Success) throw std::runtime_error("gram eigensolver failed");
  double mass = 0;
  for (int j = 0; j < a; ++j) {
    double lam = std::clamp(eig.eigenvalues()(j), 0.0, 1.0);
    // arccos amplifies eigenvalue noise near 1; snap those to exact phase 0.
    double phase = lam >= 1.0 - 1e-9 ? 0.0 : 2.0 * std::acos(std::sqrt(lam));
    if (phase <= theta + 1e-12) mass += eig.eigenvectors()(0, j) * eig.eigenvectors()(0, j);
  }
  return mass;
}

// ---------------------------------------------------------------------------
// Canonical factorization into local reflections

// The program space embeds into vertex x slot registers: A's column for
// vertex x spreads over x's slots with weight 1/sqrt(n-1) (the {s,t} pair
// splitting its weight 1/alpha, sqrt(1-1/alpha^2) over slots 0 and 1), B's
// column for slot j sits on the pair's two vertex rows. Then
// A^T B = m_tilde / sqrt(2(n-1)) and both are isometries.
struct Factorization {
  RMat a;  // n(m+1) x n
  RMat b;  // n(m+1) x (m+1)
  int slot_dim = 0;
  int idx(int vertex, int j) const { return (vertex - 1) * slot_dim + j; }
};

// Slot-space profile of vertex x: the unit vector A embeds at x's block.
inline RVec vertex_profile(const STProgram& p, int x) {
  RVec c = RVec::Zero(p.slot_count());
  double scale = 1.0 / std::sqrt(p.n() - 1.0);
  if (x == p.s() || x == p.t()) {
    c(0) = scale / p.alpha();
    c(1) = scale * std::sqrt(1.0 - 1.0 / (p.alpha() * p.alpha()));
  }
  for (int j = 2; j < p.slot_count(); ++j) {
    auto [u, v] = p.pair_of_slot(j);
    if (u == x || v == x) c(j) = scale;
  }
  return c;
}

inline Factorization factorize(const STProgram& p) {
  int m1 = p.slot_count();
  Factorization f;
  f.slot_dim = m1;
  f.a = RMat::Zero(p.n() * m1, p.n());
  f.b = RMat::Zero(p.n() * m1, m1);
  for (int x = 1; x <= p.n(); ++x) {
    RVec c = vertex_profile(p, x);
    for (int j = 0; j < m1; ++j) f.a(f.idx(x, j), x - 1) = c(j);
  }
  double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (int j = 0; j < m1; ++j) {
    int u = j <= 1 ? p.s() : p.pair_of_slot(j).first;
    int v = j <= 1 ? p.t() : p.pair_of_slot(j).second;
    f.b(f.idx(v, j), j) = inv_sqrt2;
    f.b(f.idx(u, j), j) = -inv_sqrt2;
  }
  return f;
}

// Eigenvalues of the normalized Gram M' M'^T, M' = m_tilde / sqrt(2(n-1)).
inline RVec delta_spectrum(const STProgram& p) {
  RMat m = p.m_tilde() / std::sqrt(2.0 * (p.n() - 1.0));
  Eigen::SelfAdjointEigenSolver<RMat> eig(m * m.transpose());
  return eig.eigenvalues();
}

// B-side reflection built slot block by slot block: a negated swap on the
// pair's two rows, minus identity elsewhere.
inline RMat negated_swap_reflection(const STProgram& p) {
  int m1 = p.slot_count();
  Factorization f = factorize(p);
  RMat r = -RMat::Identity(p.n() * m1, p.n() * m1);
  for (int j = 0; j < m1; ++j) {
    int u = j <= 1 ? p.s() : p.pair_of_slot(j).first;
    int v = j <= 1 ? p.t() : p.pair_of_slot(j).second;
    int iu = f.idx(u, j), iv = f.idx(v, j);
    r(iu, iu) = 0.0;
    r(iv, iv) = 0.0;
    r(iu, iv) = -1.0;
    r(iv, iu) = -1.0;
  }
  return r;
}

// Reflection about vertex x's profile, assembled from the primitive
// gadgets: L reflects about the anchor slot, F fans the anchor out to the
// uniform profile, and for the terminals K rotates the fan's target-slot
// share into the slot pair {0,1} with weights (1/alpha,
// sqrt(1-1/alpha^2)). The composite K F L F^T K^T equals
// 2 c_x c_x^T - I on the slot register.
inline RMat local_reflection(const STProgram& p, int x) {
  int m1 = p.slot_count();
  bool terminal = (x == p.s() || x == p.t());
  int anchor = -1;
  std::vector<int> fan;
  for (int j = 2; j < m1; ++j) {
    auto [u, v] = p.pair_of_slot(j);
    if (u == x || v == x) fan.push_back(j);
  }
  if (terminal) {
    anchor = 0;
    fan.insert(fan.begin(), 0);
  } else {
    if (fan.empty()) throw std::logic_error("isolated vertex in the program");
    anchor = fan.front();
  }
  RVec uniform = RVec::Zero(m1);
  for (int j : fan) uniform(j) = 1.0 / std::sqrt(static_cast<double>(fan.size()));
  RMat fmat = RMat::Identity(m1, m1);
  RVec diff = RVec::Zero(m1);
  diff(anchor) = 1.0;
  diff -= uniform;
  if (diff.norm() > 1e-14) {
    diff.normalize();
    fmat -= 2.0 * diff * diff.transpose();
  }
  RMat kmat = RMat::Identity(m1, m1);
  if (terminal) {
    double c = 1.0 / p.alpha();
    double q = std::sqrt(1.0 - c * c);
    kmat(0, 0) = c;
    kmat(1, 0) = q;
    kmat(0, 1) = -q;
    kmat(1, 1) = c;
  }
  RMat lmat = -RMat::Identity(m1, m1);
  lmat(anchor, anchor) = 1.0;
  return kmat * fmat * lmat * fmat.transpose() * kmat.transpose();
}

// A-side reflection as the direct sum of the per-vertex gadgets.
inline RMat local_reflection_sum(const STProgram& p) {
  int m1 = p.slot_count();
  RMat r = RMat::Zero(p.n() * m1, p.n() * m1);
  for (int x = 1; x <= p.n(); ++x)
    r.block((x - 1) * m1, (x - 1) * m1, m1, m1) = local_reflection(p, x);
  return r;
}

// Rebuilds 2 Lambda - I through the embedded two-reflection walk: the -1
// eigenspace of R_B R_A pulled back through B recovers the kernel
// projector. Returns the maximum entrywise deviation from the closed form.
inline double kernel_reflection_via_embedding(const STProgram& p, RMat* out = nullptr) {
  Factorization f = factorize(p);
  Mat ra = f.a.cast<std::complex<double>>();
  Mat rb = f.b.cast<std::complex<double>>();
  Mat u = reflect_about_columns(rb) * reflect_about_columns(ra);
  SpectralDecomposition sd = unitary_phases(u);
  Mat p_minus = Mat::Zero(u.rows(), u.rows());
  for (std::size_t i = 0; i < sd.phases.size(); ++i)
    if (std::abs(std::abs(sd.phases[i]) - std::numbers::pi) < 1e-7)
      p_minus += sd.basis.col(i) * sd.basis.col(i).adjoint();
  Mat rtilde = 2.0 * p_minus - Mat::Identity(u.rows(), u.rows());
  Mat pulled = rb.adjoint() * rtilde * rb;
  RMat lambda = kernel_projector(p);
  RMat expected = 2.0 * lambda - RMat::Identity(p.slot_count(), p.slot_count());
  double dev = (pulled - expected.cast<std::complex<double>>()).cwiseAbs().maxCoeff();
  if (out) *out = pulled.real();
  return dev;
}

}  // namespace qforest
