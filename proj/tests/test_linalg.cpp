#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "qforest/linalg.hpp"

using namespace qforest;
using std::numbers::pi;

namespace {

Mat diag_unitary(const std::vector<double>& phases) {
  Mat u = Mat::Zero(phases.size(), phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) u(i, i) = std::polar(1.0, phases[i]);
  return u;
}

}  // namespace

TEST_CASE("reflection about columns", "[linalg]") {
  std::mt19937_64 rng(3);
  Mat a = random_isometry(6, 2, rng);
  Mat r = reflect_about_columns(a);
  REQUIRE(is_unitary(r));
  REQUIRE((r * r - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
  REQUIRE((r * a - a).cwiseAbs().maxCoeff() < 1e-10);
  Vec v = Vec::Random(6);
  Vec perp = v - a * (a.adjoint() * v);
  REQUIRE((r * perp + perp).cwiseAbs().maxCoeff() < 1e-10);
  Mat bad = Mat::Ones(4, 2);
  REQUIRE_THROWS_AS(reflect_about_columns(bad), std::invalid_argument);
}

TEST_CASE("unitary phase extraction", "[linalg]") {
  Mat u = diag_unitary({0.0, 1.3, -2.2, 1.3});
  std::mt19937_64 rng(5);
  Mat q = random_isometry(4, 4, rng);
  SpectralDecomposition sd = unitary_phases(q * u * q.adjoint());
  auto phases = sd.phases;
  std::sort(phases.begin(), phases.end());
  REQUIRE(phases[0] == Catch::Approx(-2.2).margin(1e-9));
  REQUIRE(phases[1] == Catch::Approx(0.0).margin(1e-9));
  REQUIRE(phases[2] == Catch::Approx(1.3).margin(1e-9));
  REQUIRE(phases[3] == Catch::Approx(1.3).margin(1e-9));
  REQUIRE(is_isometry(sd.basis));
  REQUIRE_THROWS_AS(unitary_phases(Mat::Ones(3, 3)), std::invalid_argument);

  Vec v = Vec::Zero(4);
  v(0) = 1.0;
  double m = phase_mass(sd, q * v, 1e-6);
  REQUIRE(m == Catch::Approx(1.0).margin(1e-9));
  Mat p = sd.projector_within(1e-6);
  REQUIRE((p * (q * v) - q * v).norm() < 1e-9);
}

TEST_CASE("phase estimation is exact on grid phases", "[qpe]") {
  int t = 4;
  double theta = 2.0 * pi * 5 / 16.0;
  Mat u = diag_unitary({theta});
  Vec s = Vec::Ones(1);
  QpeResult r = phase_estimation(u, s, t);
  REQUIRE(r.probs(5) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(r.phase_of_outcome(5) == Catch::Approx(theta).margin(1e-12));
  std::mt19937_64 rng(1);
  REQUIRE(r.sample(rng) == 5);
}

TEST_CASE("phase estimation worst-case mass within one grid step", "[qpe]") {
  int t = 5;
  double grid = 2.0 * pi / 32.0;
  for (double frac : {0.5, 0.25, 0.9}) {
    double theta = grid * (7 + frac);
    QpeResult r = phase_estimation(diag_unitary({theta}), Vec::Ones(1), t);
    REQUIRE(r.prob_within(theta, grid) >= 8.0 / (pi * pi) - 1e-12);
  }
}

TEST_CASE("phase estimation splits superpositions by weight", "[qpe]") {
  double a = 2.0 * pi * 3 / 8.0, b = 2.0 * pi * 6 / 8.0;
  Mat u = diag_unitary({a, b});
  Vec s(2);
  s << std::sqrt(0.3), std::sqrt(0.7);
  QpeResult r = phase_estimation(u, s, 3);
  REQUIRE(r.probs(3) == Catch::Approx(0.3).margin(1e-12));
  REQUIRE(r.probs(6) == Catch::Approx(0.7).margin(1e-12));
}

TEST_CASE("phase estimation input validation", "[qpe]") {
  Mat u = diag_unitary({0.1});
  REQUIRE_THROWS_AS(phase_estimation(u, Vec::Ones(1), 0), std::invalid_argument);
  REQUIRE_THROWS_AS(phase_estimation(u, 2.0 * Vec::Ones(1), 3), std::invalid_argument);
  Mat big = Mat::Identity(2048, 2048);
  Vec bs = Vec::Zero(2048);
  bs(0) = 1.0;
  REQUIRE_THROWS_AS(phase_estimation(big, bs, 16), std::length_error);
}

TEST_CASE("approximate reflection fixes the zero-phase space exactly", "[reflection]") {
  std::mt19937_64 rng(9);
  Mat q = random_isometry(3, 3, rng);
  Mat u = q * diag_unitary({0.0, 0.9, -2.1}) * q.adjoint();
  for (int k = 1; k <= 5; ++k) {
    ApproxReflection ar = approx_reflection(u, k);
    // residual_on measures ||(R+I) v x 0||: exactly 2 on a fixed vector.
    REQUIRE(ar.residual_on(q.col(0)) == Catch::Approx(2.0).margin(1e-10));
    double r1 = ar.residual_on(q.col(1));
    double r2 = ar.residual_on(q.col(2));
    REQUIRE(r1 <= std::pow(2.0, 1.0 - k) + 1e-12);
    REQUIRE(r2 <= std::pow(2.0, 1.0 - k) + 1e-12);
  }
  // Monotone improvement with more copies.
  double prev = 1e9;
  for (int k = 1; k <= 6; ++k) {
    double r = approx_reflection(u, k).residual_on(q.col(1));
    REQUIRE(r <= prev + 1e-15);
    prev = r;
  }
  REQUIRE_THROWS_AS(approx_reflection(u, 0), std::invalid_argument);
}

TEST_CASE("approximate reflection dense route agrees with the closed form", "[reflection]") {
  std::mt19937_64 rng(17);
  Mat q = random_isometry(2, 2, rng);
  Mat u = q * diag_unitary({0.0, 2.0}) * q.adjoint();
  ApproxReflection ar = approx_reflection(u, 2);
  REQUIRE(ar.s_bits == 2);
  Mat r = ar.dense();
  int anc = 16;
  REQUIRE(is_unitary(r, 1e-8));
  for (int trial = 0; trial < 5; ++trial) {
    Vec v = Vec::Random(2);
    v.normalize();
    Vec embedded = Vec::Zero(2 * anc);
    for (int i = 0; i < 2; ++i) embedded(i * anc) = v(i);
    double via_dense = ((r * embedded) + embedded).norm();
    REQUIRE(via_dense == Catch::Approx(ar.residual_on(v)).margin(1e-9));
  }
  // The zero-phase eigenvector with zeroed ancillas is fixed exactly.
  Vec fixed = Vec::Zero(2 * anc);
  for (int i = 0; i < 2; ++i) fixed(i * anc) = q.col(0)(i);
  REQUIRE((r * fixed - fixed).norm() < 1e-9);
}

TEST_CASE("detection register width tracks the spectral floor", "[reflection]") {
  Mat u = diag_unitary({0.0, 0.01});
  ApproxReflection ar = approx_reflection(u, 1);
  REQUIRE((1 << ar.s_bits) >= 2.0 * pi / 0.01);
  REQUIRE(ar.detect_amplitude(0.01) <= 0.5);
  REQUIRE(ar.detect_amplitude(0.0) == Catch::Approx(1.0));
}

TEST_CASE("two-reflection spectrum structure on random instances", "[spectral]") {
  std::mt19937_64 rng(31);
  for (auto [n, ka, kb] : std::vector<std::tuple<int, int, int>>{
           {6, 3, 2}, {5, 2, 2}, {7, 3, 3}, {4, 1, 2}}) {
    Mat a = random_isometry(n, ka, rng);
    Mat b = random_isometry(n, kb, rng);
    auto rep = spectral_lemma_check(a, b);
    INFO("n=" << n << " ka=" << ka << " kb=" << kb << " dev=" << rep.max_deviation);
    REQUIRE(rep.all_ok());
  }
}

TEST_CASE("two-reflection spectrum with forced intersection", "[spectral]") {
  std::mt19937_64 rng(37);
  Mat a = random_isometry(6, 3, rng);
  // B shares a's first column: the intersection is at least 1-dim.
  Mat b(6, 2);
  b.col(0) = a.col(0);
  Vec extra = random_isometry(6, 1, rng).col(0);
  extra -= b.col(0) * (b.col(0).adjoint() * extra);
  b.col(1) = extra.normalized();
  auto rep = spectral_lemma_check(a, b);
  REQUIRE(rep.all_ok());
  REQUIRE(span_intersection(a, b).cols() == 1);
}

TEST_CASE("effective gap bound on random instances", "[spectral]") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 6 + static_cast<int>(rng() % 4);
    Mat a = random_isometry(n, 2 + static_cast<int>(rng() % 2), rng);
    Mat b = random_isometry(n, 2 + static_cast<int>(rng() % 2), rng);
    Vec w = Vec::Random(n);
    w -= a * (a.adjoint() * w);  // place w in ker(A^dagger)
    if (w.norm() < 1e-6) continue;
    for (double theta : {0.05, 0.3, 1.0}) {
      GapCheck g = effective_gap_check(a, b, w, theta);
      INFO("theta=" << theta << " lhs=" << g.lhs << " rhs=" << g.rhs);
      REQUIRE(g.ok());
    }
  }
  Mat a = random_isometry(5, 2, rng);
  Mat b = random_isometry(5, 2, rng);
  REQUIRE_THROWS_AS(effective_gap_check(a, b, a.col(0), 0.5), std::invalid_argument);
}
