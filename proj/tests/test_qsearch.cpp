#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qforest/qsearch.hpp"

using namespace qforest;

namespace {
Constants defaults;
}

TEST_CASE("closed form matches the explicit statevector") {
  std::mt19937_64 rng(17);
  for (int n : {16, 64}) {
    for (int t : {0, 1, 3, n / 4, n}) {
      std::vector<char> marked(static_cast<std::size_t>(n), 0);
      // Scatter the marked items; the closed form cannot depend on where.
      int placed = 0;
      while (placed < t) {
        auto i = static_cast<std::size_t>(rng() % n);
        if (!marked[i]) {
          marked[i] = 1;
          ++placed;
        }
      }
      for (long long j : {0ll, 1ll, 2ll, 3ll, 5ll, 17ll}) {
        double closed = grover_success_closed(n, t, j);
        double vec = grover_success_statevector(marked, j);
        REQUIRE(closed == Catch::Approx(vec).margin(1e-9));
      }
    }
  }
  REQUIRE_THROWS_AS(grover_success_closed(0, 0, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(grover_success_statevector(std::vector<char>(2048, 0), 1),
                    std::length_error);
}

TEST_CASE("all-solutions domain succeeds on the first observation") {
  std::mt19937_64 rng(3);
  QSearchResult r = qsearch(4, [](int) { return true; }, rng, defaults, 100);
  REQUIRE(r.index.has_value());
  REQUIRE(r.iterations == 0);
  REQUIRE(r.observations == 1);
  REQUIRE(*r.index >= 1);
  REQUIRE(*r.index <= 4);
}

TEST_CASE("empty truth set runs to the budget and reports nothing") {
  std::mt19937_64 rng(9);
  QSearchResult r = qsearch(16, [](int) { return false; }, rng, defaults, 40);
  REQUIRE_FALSE(r.index.has_value());
  REQUIRE(r.iterations == 40);

  // A one-item domain cannot consume iterations; the round guard exits.
  QSearchResult stuck = qsearch(1, [](int) { return false; }, rng, defaults, 5);
  REQUIRE_FALSE(stuck.index.has_value());
}

TEST_CASE("found indices always satisfy the predicate") {
  std::mt19937_64 rng(21);
  int found = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 8 + static_cast<int>(rng() % 57);
    std::vector<char> truth(static_cast<std::size_t>(n) + 1, 0);
    int t = 1 + static_cast<int>(rng() % 3);
    for (int c = 0; c < t; ++c) truth[1 + rng() % static_cast<std::uint64_t>(n)] = 1;
    QSearchResult r = qsearch(
        n, [&](int i) { return truth[static_cast<std::size_t>(i)] == 1; }, rng, defaults,
        20 * n);
    if (r.index) {
      REQUIRE(truth[static_cast<std::size_t>(*r.index)] == 1);
      ++found;
    }
  }
  // A generous budget should almost never come back empty.
  REQUIRE(found >= 195);
}

TEST_CASE("mean iteration count scales like the square root") {
  std::mt19937_64 rng(1234);
  for (int n : {16, 64, 256}) {
    for (int t : {1, 2, 4, n / 4}) {
      std::vector<char> truth(static_cast<std::size_t>(n) + 1, 0);
      for (int i = 1; i <= t; ++i) truth[static_cast<std::size_t>(i)] = 1;
      double total = 0;
      int seeds = 300;
      for (int s = 0; s < seeds; ++s) {
        QSearchResult r = qsearch(
            n, [&](int i) { return truth[static_cast<std::size_t>(i)] == 1; }, rng,
            defaults, 1000000);
        REQUIRE(r.index.has_value());
        total += static_cast<double>(r.iterations);
      }
      REQUIRE(total / seeds <= 4.0 * std::sqrt(static_cast<double>(n) / t));
    }
  }
}

TEST_CASE("schedule growth factor is validated") {
  std::mt19937_64 rng(2);
  Constants bad = defaults;
  bad.lambda = 1.5;  // bypass set() to exercise qsearch's own guard
  REQUIRE_THROWS_AS(qsearch(4, [](int) { return true; }, rng, bad, 10), std::domain_error);
  REQUIRE_THROWS_AS(qsearch(0, [](int) { return true; }, rng, defaults, 10),
                    std::invalid_argument);
}

TEST_CASE("doubling schedule walks the length guesses and stops at the hit") {
  std::mt19937_64 rng(77);
  // The target sits on a length-6 structure: rounds d = 2 and 4 must pass.
  auto decider = [](int k, int d) { return d >= 6 && k == 5; };
  DoublingResult r = doubling_search(12, decider, rng, defaults);
  REQUIRE(r.found.has_value());
  REQUIRE(r.found->first == 5);
  REQUIRE(r.found->second == 8);
  REQUIRE(r.rounds.size() == 3);
  REQUIRE(r.rounds[0].d == 2);
  REQUIRE(r.rounds[1].d == 4);
  REQUIRE(r.rounds[2].found);
  for (const RoundTrace& tr : r.rounds) REQUIRE(tr.iterations <= tr.budget);

  // Nothing to find: every round runs, budgets follow the shrinking rule.
  DoublingResult none = doubling_search(12, [](int, int) { return false; }, rng, defaults);
  REQUIRE_FALSE(none.found.has_value());
  REQUIRE(none.rounds.size() == 4);  // ceil(log2 12)
  long long cap = 0;
  for (const RoundTrace& tr : none.rounds) {
    REQUIRE(tr.budget == doubling_budget(12, tr.round, defaults));
    cap += tr.budget;
  }
  REQUIRE(none.total_iterations <= cap);
}

TEST_CASE("majority amplification respects the asymmetric gaps") {
  REQUIRE(amplify_rounds(0.05, defaults) == 30);
  REQUIRE_THROWS_AS(amplify_rounds(0.5, defaults), std::domain_error);
  REQUIRE_THROWS_AS(amplify_rounds(0.0, defaults), std::domain_error);

  // Perfect deciders are never flipped.
  REQUIRE(amplified_vote([] { return true; }, 30, defaults));
  REQUIRE_FALSE(amplified_vote([] { return false; }, 30, defaults));

  // Monte Carlo at the contract gaps: 9/20 positives pass, 1/10 negatives fail.
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int pos_ok = 0, neg_ok = 0;
  int reps = 2000;
  for (int i = 0; i < reps; ++i) {
    if (amplified_vote([&] { return unif(rng) < 0.45; }, 30, defaults)) ++pos_ok;
    if (!amplified_vote([&] { return unif(rng) < 0.10; }, 30, defaults)) ++neg_ok;
  }
  REQUIRE(pos_ok >= static_cast<int>(0.90 * reps));
  REQUIRE(neg_ok >= static_cast<int>(0.95 * reps));
}
