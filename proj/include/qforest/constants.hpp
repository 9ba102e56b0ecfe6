#pragma once

#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>

namespace qforest {

// Tunable constants shared by the deciders. Defaults were calibrated once
// against small ground-truth instances and are frozen; overrides exist for
// experiments only (CLI --const / QFOREST_CONST).
struct Constants {
  double lambda = 1.2;         // search growth factor, must lie in (1, 4/3)
  double c_doubling = 16.0;    // per-round Grover budget factor
  double alpha_factor = 2.0;   // alpha = alpha_factor * sqrt(witness bound)
  double c_prime = 10.0;       // span phase threshold 1 / (c_prime * W)
  double walk_weight = 4.0;    // C: real walk edges carry weight C*d
  double c_theta = 0.5;        // walk phase threshold c_theta / sqrt(d*n)
  double c_walk_steps = 8.0;   // walk step budget ceil(c_walk_steps * sqrt(d*n))
  double c_amplify = 10.0;     // repetitions r = ceil(c_amplify * ln(1/eps))
  double amp_threshold = 0.3;  // majority accept fraction
  double rank_tol = 1e-9;      // relative singular value cutoff

  void set(const std::string& key, double value) {
    double* slot = field(key);
    if (!slot) throw std::invalid_argument("unknown constant: " + key);
    double previous = *slot;
    *slot = value;
    try {
      validate();
    } catch (...) {
      *slot = previous;
      throw;
    }
  }

  void validate() const {
    if (!(lambda > 1.0 && lambda < 4.0 / 3.0))
      throw std::domain_error("lambda must lie in (1, 4/3)");
    if (c_doubling <= 0 || c_prime <= 0 || c_theta <= 0 || c_walk_steps <= 0 ||
        c_amplify <= 0 || walk_weight <= 0 || alpha_factor <= 0)
      throw std::domain_error("constants must be positive");
    if (!(amp_threshold > 0 && amp_threshold < 1))
      throw std::domain_error("amp_threshold must lie in (0,1)");
    if (!(rank_tol > 0 && rank_tol < 1))
      throw std::domain_error("rank_tol must lie in (0,1)");
  }

 private:
  double* field(const std::string& key) {
    static const std::map<std::string, double Constants::*> kFields = {
        {"lambda", &Constants::lambda},
        {"c_doubling", &Constants::c_doubling},
        {"alpha_factor", &Constants::alpha_factor},
        {"c_prime", &Constants::c_prime},
        {"walk_weight", &Constants::walk_weight},
        {"c_theta", &Constants::c_theta},
        {"c_walk_steps", &Constants::c_walk_steps},
        {"c_amplify", &Constants::c_amplify},
        {"amp_threshold", &Constants::amp_threshold},
        {"rank_tol", &Constants::rank_tol},
    };
    auto it = kFields.find(key);
    return it == kFields.end() ? nullptr : &(this->*(it->second));
  }
};

// Parses "key=value"; throws invalid_argument on malformed input.
inline void apply_const_override(Constants& c, const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == kv.size())
    throw std::invalid_argument("expected key=value, got: " + kv);
  std::size_t used = 0;
  double value = std::stod(kv.substr(eq + 1), &used);
  if (used != kv.size() - eq - 1)
    throw std::invalid_argument("bad numeric value in: " + kv);
  c.set(kv.substr(0, eq), value);
}

}  // namespace qforest
