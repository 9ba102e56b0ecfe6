#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace qforest {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline bool is_unitary(const Mat& u, double tol = 1e-9) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - Mat::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_isometry(const Mat& a, double tol = 1e-9) {
  return (a.adjoint() * a - Mat::Identity(a.cols(), a.cols())).cwiseAbs().maxCoeff() <= tol;
}

// 2 A A^dagger - I; columns must be orthonormal.
inline Mat reflect_about_columns(const Mat& a, double tol = 1e-9) {
  if (!is_isometry(a, tol)) throw std::invalid_argument("reflection needs orthonormal columns");
  return 2.0 * (a * a.adjoint()) - Mat::Identity(a.rows(), a.rows());
}

inline Mat random_isometry(int rows, int cols, std::mt19937_64& rng) {
  if (cols > rows) throw std::invalid_argument("isometry needs cols <= rows");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Mat> qr(g);
  return Mat(qr.householderQ()) * Mat::Identity(rows, cols);
}

// Eigenphases of a unitary with an orthonormal eigenbasis. phases[i] lies in
// (-pi, pi] and belongs to basis column i. Degenerate clusters are fine: the
// Schur form of a normal matrix is diagonal, so the columns always span the
// right invariant subspaces.
struct SpectralDecomposition {
  std::vector<double> phases;
  Mat basis;

  // Projector onto eigenspaces with |phase| <= theta.
  Mat projector_within(double theta) const {
    Mat p = Mat::Zero(basis.rows(), basis.rows());
    for (std::size_t i = 0; i < phases.size(); ++i)
      if (std::abs(phases[i]) <= theta)
        p += basis.col(i) * basis.col(i).adjoint();
    return p;
  }
};

inline SpectralDecomposition unitary_phases(const Mat& u, double tol = 1e-8) {
  if (!is_unitary(u, tol)) throw std::invalid_argument("matrix is not unitary");
  Eigen::ComplexSchur<Mat> schur(u);
  if (schur.info() != Eigen::Success) throw std::runtime_error("Schur decomposition failed");
  const Mat& t = schur.matrixT();
  SpectralDecomposition sd;
  sd.basis = schur.matrixU();
  sd.phases.resize(t.rows());
  for (int i = 0; i < t.rows(); ++i) {
    if (std::abs(std::abs(t(i, i)) - 1.0) > 1e-6)
      throw std::runtime_error("unitary eigenvalue drifted off the circle");
    sd.phases[i] = std::arg(t(i, i));
  }
  // Residual check: U basis = basis diag(e^{i phase}).
  Mat d = Mat::Zero(t.rows(), t.rows());
  for (int i = 0; i < t.rows(); ++i) d(i, i) = std::polar(1.0, sd.phases[i]);
  double resid = (u * sd.basis - sd.basis * d).cwiseAbs().maxCoeff();
  if (resid > 1e-6) throw std::runtime_error("eigenbasis residual too large");
  return sd;
}

// Squared overlap of v with eigenspaces of phase magnitude <= theta.
inline double phase_mass(const SpectralDecomposition& sd, const Vec& v, double theta) {
  double mass = 0;
  for (std::size_t i = 0; i < sd.phases.size(); ++i)
    if (std::abs(sd.phases[i]) <= theta) mass += std::norm(sd.basis.col(i).dot(v));
  return mass;
}

// ---------------------------------------------------------------------------
// Phase estimation

// Exact t-bit measurement distribution: outcome y has probability
// sum_i |<q_i|state>|^2 * F(theta_i - 2 pi y / 2^t) with the standard
// Dirichlet kernel F. Exact because distinct eigenvector components stay
// orthogonal after the controlled powers.
struct QpeResult {
  int t_bits = 0;
  RVec probs;

  double phase_of_outcome(int y) const {
    double ph = 2.0 * std::numbers::pi * y / probs.size();
    if (ph > std::numbers::pi) ph -= 2.0 * std::numbers::pi;
    return ph;
  }

  // Total probability of outcomes whose phase sits within delta of theta
  // (circular distance).
  double prob_within(double theta, double delta) const {
    double total = 0;
    for (int y = 0; y < probs.size(); ++y) {
      double diff = std::abs(std::remainder(phase_of_outcome(y) - theta, 2.0 * std::numbers::pi));
      if (diff <= delta + 1e-15) total += probs(y);
    }
    return total;
  }

  double prob_small_phase(double theta_max) const { return prob_within(0.0, theta_max); }

  int sample(std::mt19937_64& rng) const {
    std::discrete_distribution<int> dist(probs.data(), probs.data() + probs.size());
    return dist(rng);
  }
};

inline double qpe_kernel(double delta, int big_n) {
  // |(1/N) sum_j e^{i j delta}|^2
  double half = 0.5 * delta;
  double s = std::sin(half);
  if (std::abs(s) < 1e-12) return 1.0;
  double num = std::sin(big_n * half);
  return (num * num) / (big_n * big_n * s * s);
}

inline QpeResult phase_estimation(const Mat& u, const Vec& state, int t_bits) {
  if (t_bits < 1 || t_bits > 20) throw std::invalid_argument("ancilla width outside 1..20");
  if (u.rows() != state.size()) throw std::invalid_argument("state dimension mismatch");
  if (std::abs(state.norm() - 1.0) > 1e-9) throw std::invalid_argument("state must be normalized");
  double work = static_cast<double>(u.rows()) * std::pow(2.0, t_bits);
  if (work > static_cast<double>(1 << 20)) throw std::length_error("phase estimation workspace cap");
  SpectralDecomposition sd = unitary_phases(u);
  int big_n = 1 << t_bits;
  QpeResult r;
  r.t_bits = t_bits;
  r.probs = RVec::Zero(big_n);
  Vec coeff = sd.basis.adjoint() * state;
  for (int i = 0; i < coeff.size(); ++i) {
    double weight = std::norm(coeff(i));
    if (weight < 1e-18) continue;
    for (int y = 0; y < big_n; ++y) {
      double delta = sd.phases[i] - 2.0 * std::numbers::pi * y / big_n;
      r.probs(y) += weight * qpe_kernel(delta, big_n);
    }
  }
  double total = r.probs.sum();
  if (std::abs(total - 1.0) > 1e-8) throw std::runtime_error("phase estimation mass leak");
  r.probs /= total;
  return r;
}

// ---------------------------------------------------------------------------
// Reflection about the zero-phase space via repeated phase detection

// R acts on system x (C^2s)^k ancillas as W^dagger (I x 2P_0 - I) W where W
// runs an s-bit phase detection into each ancilla register. Zero-phase
// eigenvectors are fixed exactly; an eigenvector at phase theta keeps
// amplitude a(theta)^k on the all-zeros ancilla, a(theta) <= 1/2 by the
// choice of s, so ||(R+I) psi x 0|| <= 2^(1-k).
struct ApproxReflection {
  int s_bits = 0;
  int copies = 1;
  SpectralDecomposition sd;

  double detect_amplitude(double phase) const {
    return std::sqrt(qpe_kernel(phase, 1 << s_bits));
  }

  // ||(R + I)(v x |0...0>)|| computed in the eigenbasis.
  double residual_on(const Vec& v) const {
    double acc = 0;
    for (std::size_t i = 0; i < sd.phases.size(); ++i) {
      double w = std::norm(sd.basis.col(i).dot(v));
      double a = detect_amplitude(sd.phases[i]);
      acc += 4.0 * w * std::pow(a, 2.0 * copies);
    }
    return std::sqrt(acc);
  }

  // The ancilla-side detection unitary for eigenphase theta: an s-bit
  // estimation circuit, QFT^dagger . diag(e^{ij theta}) . H tensor s.
  // Maps |0> to the estimate state q_theta.
  Mat detection_unitary(double theta) const {
    int reg = 1 << s_bits;
    Mat h1(2, 2);
    h1 << 1, 1, 1, -1;
    h1 /= std::numbers::sqrt2;
    Mat had = Mat::Identity(1, 1);
    for (int c = 0; c < s_bits; ++c) {
      Mat nh(had.rows() * 2, had.cols() * 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          nh.block(i * had.rows(), j * had.cols(), had.rows(), had.cols()) = h1(i, j) * had;
      had = std::move(nh);
    }
    Mat qft_dag(reg, reg);
    for (int y = 0; y < reg; ++y)
      for (int j = 0; j < reg; ++j)
        qft_dag(y, j) = std::polar(1.0 / std::sqrt(reg),
                                   -2.0 * std::numbers::pi * y * j / reg);
    Mat diag = Mat::Zero(reg, reg);
    for (int j = 0; j < reg; ++j) diag(j, j) = std::polar(1.0, theta * j);
    return qft_dag * diag * had;
  }

  // Dense matrix on system x ancillas, for small cross-checks only.
  Mat dense() const {
    int n = static_cast<int>(sd.basis.rows());
    int reg = 1 << s_bits;
    long long anc = 1;
    for (int c = 0; c < copies; ++c) anc *= reg;
    if (n * anc > (1 << 12)) throw std::length_error("dense reflection cap");
    int dim = static_cast<int>(n * anc);
    Mat r = Mat::Zero(dim, dim);
    for (std::size_t e = 0; e < sd.phases.size(); ++e) {
      Vec rt = detection_unitary(sd.phases[e]).adjoint().col(0);
      Mat block = Mat::Identity(1, 1);
      for (int c = 0; c < copies; ++c) {
        Mat nb(block.rows() * reg, block.cols() * reg);
        for (int i = 0; i < reg; ++i)
          for (int j = 0; j < reg; ++j)
            nb.block(i * block.rows(), j * block.cols(), block.rows(), block.cols()) =
                block * (rt(i) * std::conj(rt(j)));
        block = std::move(nb);
      }
      Mat sys = sd.basis.col(e) * sd.basis.col(e).adjoint();
      Mat term = Mat::Zero(dim, dim);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          term.block(i * anc, j * anc, anc, anc) = sys(i, j) * (2.0 * block);
      r += term;
      // subtract the identity part per eigencomponent at the end
    }
    r -= Mat::Identity(dim, dim);
    return r;
  }
};

inline ApproxReflection approx_reflection(const Mat& u, int copies, double zero_tol = 1e-9) {
  if (copies < 1 || copies > 16) throw std::invalid_argument("ancilla copies outside 1..16");
  ApproxReflection ar;
  ar.copies = copies;
  ar.sd = unitary_phases(u);
  double floor = std::numbers::pi;
  bool any_nonzero = false;
  for (double ph : ar.sd.phases) {
    double a = std::abs(ph);
    if (a > zero_tol) {
      any_nonzero = true;
      floor = std::min(floor, a);
    }
  }
  if (!any_nonzero) floor = std::numbers::pi;  // everything is fixed anyway
  int s = 1;
  while ((1 << s) < 2.0 * std::numbers::pi / floor) {
    ++s;
    if (s > 24) throw std::length_error("phase floor too small for detection register");
  }
  ar.s_bits = s;
  return ar;
}

// ---------------------------------------------------------------------------
// Two-reflection spectra

// Orthonormal basis of the intersection of the column spans, via the
// singular value 1 cluster of A^dagger B.
inline Mat span_intersection(const Mat& a, const Mat& b, double tol = 1e-8) {
  if (a.cols() == 0 || b.cols() == 0) return Mat::Zero(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a.adjoint() * b, Eigen::ComputeFullV);
  std::vector<int> keep;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) >= 1.0 - tol) keep.push_back(i);
  Mat out(a.rows(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) out.col(i) = b * svd.matrixV().col(keep[i]);
  return out;
}

// Orthonormal basis of the orthogonal complement of span(A) + span(B).
inline Mat joint_complement(const Mat& a, const Mat& b, double tol = 1e-8) {
  Mat stack(a.rows(), a.cols() + b.cols());
  stack << a, b;
  Eigen::JacobiSVD<Mat> svd(stack, Eigen::ComputeFullU);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  return svd.matrixU().rightCols(a.rows() - rank);
}

struct TwoReflectionReport {
  bool plus_space_ok = false;    // +1 eigenspace = (A cap B) + (A+B)^perp
  bool minus_space_ok = false;   // -1 eigenspace contains both kernels' images
  bool phase_multiset_ok = false;  // remaining phases are +-2 arccos sigma_j
  double max_deviation = 0;
  bool all_ok() const { return plus_space_ok && minus_space_ok && phase_multiset_ok; }
};

// Checks the eigenstructure of U = R_B R_A for isometries A, B: the +1 space
// is the intersection plus the joint complement, the -1 space contains
// B ker(A^dagger B) and A ker(B^dagger A), and every other phase comes in a
// +-2 arccos sigma pair for a singular value sigma of A^dagger B in (0,1).
inline TwoReflectionReport spectral_lemma_check(const Mat& a, const Mat& b, double tol = 1e-7) {
  if (!is_isometry(a) || !is_isometry(b))
    throw std::invalid_argument("spectral check needs isometries");
  int n = static_cast<int>(a.rows());
  Mat u = reflect_about_columns(b) * reflect_about_columns(a);
  SpectralDecomposition sd = unitary_phases(u);
  TwoReflectionReport rep;

  double cluster = 1e-7;
  Mat p_plus = Mat::Zero(n, n);
  int n_plus = 0, n_minus = 0;
  for (std::size_t i = 0; i < sd.phases.size(); ++i) {
    if (std::abs(sd.phases[i]) <= cluster) {
      p_plus += sd.basis.col(i) * sd.basis.col(i).adjoint();
      ++n_plus;
    } else if (std::abs(std::abs(sd.phases[i]) - std::numbers::pi) <= cluster) {
      ++n_minus;
    }
  }
  Mat inter = span_intersection(a, b, tol);
  Mat comp = joint_complement(a, b, tol);
  Mat p_expected = inter * inter.adjoint() + comp * comp.adjoint();
  double dev_plus = (p_plus - p_expected).cwiseAbs().maxCoeff();
  rep.plus_space_ok = dev_plus <= 1e-6 && n_plus == inter.cols() + comp.cols();
  rep.max_deviation = dev_plus;

  Eigen::JacobiSVD<Mat> svd(a.adjoint() * b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sig = svd.singularValues();
  rep.minus_space_ok = true;
  double dev_minus = 0;
  std::vector<double> expected_phases;
  for (int i = 0; i < sig.size(); ++i) {
    if (sig(i) <= tol) {
      Vec v = b * svd.matrixV().col(i);
      dev_minus = std::max(dev_minus, (u * v + v).norm());
    } else if (sig(i) < 1.0 - tol) {
      double ph = 2.0 * std::acos(std::min(1.0, sig(i)));
      expected_phases.push_back(ph);
      expected_phases.push_back(-ph);
    }
  }
  Eigen::JacobiSVD<Mat> svd_t(b.adjoint() * a, Eigen::ComputeFullV);
  for (int i = 0; i < svd_t.singularValues().size(); ++i) {
    if (svd_t.singularValues()(i) <= tol) {
      Vec v = a * svd_t.matrixV().col(i);
      dev_minus = std::max(dev_minus, (u * v + v).norm());
    }
  }
  rep.minus_space_ok = dev_minus <= 1e-6;
  rep.max_deviation = std::max(rep.max_deviation, dev_minus);

  std::vector<double> got;
  for (double ph : sd.phases)
    if (std::abs(ph) > cluster && std::abs(std::abs(ph) - std::numbers::pi) > cluster)
      got.push_back(ph);
  std::sort(got.begin(), got.end());
  std::sort(expected_phases.begin(), expected_phases.end());
  if (got.size() == expected_phases.size()) {
    double dev = 0;
    for (std::size_t i = 0; i < got.size(); ++i)
      dev = std::max(dev, std::abs(got[i] - expected_phases[i]));
    rep.phase_multiset_ok = dev <= 1e-6;
    rep.max_deviation = std::max(rep.max_deviation, dev);
  } else {
    rep.phase_multiset_ok = false;
  }
  return rep;
}

struct GapCheck {
  double lhs = 0;
  double rhs = 0;
  bool ok() const { return lhs <= rhs + 1e-9; }
};

// For w with A^dagger w = 0: the projection of Pi_B w onto phases within
// Theta of zero is at most (Theta/2) ||w||.
inline GapCheck effective_gap_check(const Mat& a, const Mat& b, const Vec& w, double theta) {
  if ((a.adjoint() * w).norm() > 1e-9 * (1.0 + w.norm()))
    throw std::invalid_argument("w must be orthogonal to span(A)");
  Mat u = reflect_about_columns(b) * reflect_about_columns(a);
  SpectralDecomposition sd = unitary_phases(u);
  Vec pbw = b * (b.adjoint() * w);
  GapCheck g;
  g.lhs = std::sqrt(phase_mass(sd, pbw, theta));
  g.rhs = 0.5 * theta * w.norm();
  return g;
}

}  // namespace qforest
