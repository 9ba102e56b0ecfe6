#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "qforest/constants.hpp"

namespace qforest {

// Success probability of Grover search after j iterations when t of the
// N items are marked: the rotation angle closed form.
inline double grover_success_closed(int n_items, int t, long long j) {
  if (n_items < 1 || t < 0 || t > n_items || j < 0)
    throw std::invalid_argument("bad grover parameters");
  if (t == 0) return 0.0;
  double theta = std::asin(std::sqrt(static_cast<double>(t) / n_items));
  double s = std::sin((2.0 * j + 1.0) * theta);
  return s * s;
}

// The same number from an explicit statevector: start uniform, alternate
// the marked-phase flip with the inversion about the mean.
inline double grover_success_statevector(const std::vector<char>& marked, long long j) {
  int n = static_cast<int>(marked.size());
  if (n < 1 || n > 1024) throw std::length_error("statevector mode capped at 1024 items");
  std::vector<double> amp(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  for (long long it = 0; it < j; ++it) {
    double mean = 0;
    for (int i = 0; i < n; ++i) {
      if (marked[static_cast<std::size_t>(i)]) amp[static_cast<std::size_t>(i)] = -amp[static_cast<std::size_t>(i)];
      mean += amp[static_cast<std::size_t>(i)];
    }
    mean /= n;
    for (int i = 0; i < n; ++i) amp[static_cast<std::size_t>(i)] = 2.0 * mean - amp[static_cast<std::size_t>(i)];
  }
  double p = 0;
  for (int i = 0; i < n; ++i)
    if (marked[static_cast<std::size_t>(i)]) p += amp[static_cast<std::size_t>(i)] * amp[static_cast<std::size_t>(i)];
  return p;
}

struct QSearchResult {
  std::optional<int> index;  // a found item in 1..N
  long long iterations = 0;  // Grover iterations consumed
  int observations = 0;      // measurement rounds
};

// Search with an unknown number of solutions: the iteration count per
// round is drawn uniformly below a cap that grows geometrically, the
// outcome of each measurement follows the exact rotation closed form.
// The predicate is evaluated once per item up front, freezing this call's
// truth set. A hard iteration budget truncates the schedule; exhausting
// it returns nothing.
inline QSearchResult qsearch(int n_items, const std::function<bool(int)>& pred,
                             std::mt19937_64& rng, const Constants& cst, long long budget) {
  if (n_items < 1) throw std::invalid_argument("empty search domain");
  if (budget < 0) throw std::invalid_argument("negative budget");
  if (cst.lambda <= 1.0 || cst.lambda >= 4.0 / 3.0)
    throw std::domain_error("schedule growth factor out of range");
  std::vector<int> solutions;
  for (int i = 1; i <= n_items; ++i)
    if (pred(i)) solutions.push_back(i);
  int t = static_cast<int>(solutions.size());
  double theta = t > 0 ? std::asin(std::sqrt(static_cast<double>(t) / n_items)) : 0.0;
  double m = 1.0;
  double sqrt_n = std::sqrt(static_cast<double>(n_items));
  QSearchResult out;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (;;) {
    long long cap = static_cast<long long>(std::ceil(m));
    long long j = static_cast<long long>(std::floor(unif(rng) * static_cast<double>(cap)));
    j = std::min(j, cap - 1);
    if (out.iterations + j > budget) j = budget - out.iterations;
    out.iterations += j;
    ++out.observations;
    if (t > 0) {
      double s = std::sin((2.0 * j + 1.0) * theta);
      if (unif(rng) < s * s) {
        out.index = solutions[static_cast<std::size_t>(
            std::min<long long>(static_cast<long long>(unif(rng) * t), t - 1))];
        return out;
      }
    }
    if (out.iterations >= budget) return out;
    // Zero-cost rounds cannot run forever when the cap is stuck at 1.
    if (out.observations > 2 * budget + 64) return out;
    m = std::min(m * cst.lambda, sqrt_n);
  }
}

// ---------------------------------------------------------------------------
// Doubling schedule over length guesses

struct RoundTrace {
  int round = 0;    // i, with d = 2^i
  int d = 0;
  long long budget = 0;
  long long iterations = 0;
  bool found = false;
  int vertex = 0;
};

struct DoublingResult {
  std::optional<std::pair<int, int>> found;  // (vertex, d at detection)
  std::vector<RoundTrace> rounds;
  long long total_iterations = 0;
};

inline long long doubling_budget(int n, int i, const Constants& cst) {
  return static_cast<long long>(
      std::ceil(cst.c_doubling * std::sqrt(static_cast<double>(n) / (1 << i))));
}

// Runs the per-vertex decider at doubling length guesses d = 2, 4, ...,
// each with an iteration budget shrinking like sqrt(n/d), so the total
// work stays within a constant times sqrt(n).
inline DoublingResult doubling_search(int n, const std::function<bool(int, int)>& decider,
                                      std::mt19937_64& rng, const Constants& cst) {
  if (n < 1) throw std::invalid_argument("empty vertex set");
  DoublingResult out;
  int rounds = 0;
  while ((1 << rounds) < n) ++rounds;  // ceil(log2 n)
  for (int i = 1; i <= std::max(1, rounds); ++i) {
    int d = 1 << i;
    RoundTrace trace;
    trace.round = i;
    trace.d = d;
    trace.budget = doubling_budget(n, i, cst);
    QSearchResult r =
        qsearch(n, [&](int k) { return decider(k, d); }, rng, cst, trace.budget);
    trace.iterations = r.iterations;
    out.total_iterations += r.iterations;
    if (r.index) {
      trace.found = true;
      trace.vertex = *r.index;
      out.rounds.push_back(trace);
      out.found = std::pair{*r.index, d};
      return out;
    }
    out.rounds.push_back(trace);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Majority-vote amplification

inline int amplify_rounds(double epsilon, const Constants& cst) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::domain_error("epsilon must be in (0, 1/2)");
  return static_cast<int>(std::ceil(cst.c_amplify * std::log(1.0 / epsilon)));
}

// Boosts a one-sided decider (true-rate >= 9/20 on yes, <= 1/10 on no)
// by voting: accept when the positive count reaches the threshold share.
inline bool amplified_vote(const std::function<bool()>& trial, int rounds,
                           const Constants& cst) {
  if (rounds < 1) throw std::invalid_argument("need at least one voting round");
  int need = static_cast<int>(std::ceil(cst.amp_threshold * rounds));
  need = std::max(need, 1);
  int positives = 0;
  for (int i = 0; i < rounds; ++i) {
    if (trial()) ++positives;
    if (positives >= need) return true;  // outcome settled
    if (positives + (rounds - 1 - i) < need) return false;
  }
  return positives >= need;
}

}  // namespace qforest
