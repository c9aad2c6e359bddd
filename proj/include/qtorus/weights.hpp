#pragma once

// Weights (x, y) label the cyclic irreducibles.  Under
//   (x, y) (x', y') = (x x', y x' + y')
// the non-singular weights form a group with identity (1, 0) and inverse
// (the dual) (x^{-1}, -y x^{-1}).  A weight is singular when a component has
// modulus below the fixed threshold; the identity is the one singular weight
// the code ever constructs on purpose, through the unchecked path.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cyclotomic.hpp"
#include "errors.hpp"

namespace qtorus {

inline constexpr double kSingularThreshold = 1e-6;

struct Weight {
  cd x{1.0, 0.0};
  cd y{0.0, 0.0};

  Weight() = default;  // identity (1, 0)

  Weight(cd x_, cd y_) : x(x_), y(y_) {
    if (is_singular())
      fail(errc::singular_weight, "weight component below threshold");
  }

  static Weight unchecked(cd x_, cd y_) {
    Weight w;
    w.x = x_;
    w.y = y_;
    return w;
  }

  bool is_singular() const {
    return std::abs(x) < kSingularThreshold || std::abs(y) < kSingularThreshold;
  }
};

// Group product; the result may be singular and is returned unchecked.
inline Weight weight_mul(const Weight& a, const Weight& b) {
  return Weight::unchecked(a.x * b.x, a.y * b.x + b.y);
}

// Group inverse (x^{-1}, -y x^{-1}); requires x away from zero.
inline Weight weight_dual(const Weight& w) {
  if (std::abs(w.x) < kSingularThreshold)
    fail(errc::singular_weight, "dual of weight with x near zero");
  return Weight::unchecked(1.0 / w.x, -w.y / w.x);
}

inline bool weight_close(const Weight& a, const Weight& b, double tol) {
  const double sx = 1.0 + std::max(std::abs(a.x), std::abs(b.x));
  const double sy = 1.0 + std::max(std::abs(a.y), std::abs(b.y));
  return std::abs(a.x - b.x) <= tol * sx && std::abs(a.y - b.y) <= tol * sy;
}

inline bool is_self_dual(const Weight& w, double tol) {
  if (std::abs(w.x) < kSingularThreshold) return false;
  return weight_close(w, weight_dual(w), tol);
}

inline bool is_regular_pair(const Weight& a, const Weight& b) {
  return !a.is_singular() && !b.is_singular() &&
         !weight_mul(a, b).is_singular();
}

// All contiguous products lambda_i ... lambda_j must be non-singular.
inline bool is_regular_seq(const std::vector<Weight>& seq) {
  for (const Weight& w : seq)
    if (w.is_singular()) return false;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    Weight p = seq[i];
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      p = weight_mul(p, seq[j]);
      if (p.is_singular()) return false;
    }
  }
  return true;
}

// Sampling: modulus log-uniform on [1/2, 2], phase uniform.  Components of
// that size are never singular on their own; rejection happens at the level
// of the tuple predicate.
inline cd sample_component(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double lo = std::log(0.5), hi = std::log(2.0);
  const double mod = std::exp(lo + u(rng) * (hi - lo));
  const double phase = -kPi + u(rng) * 2.0 * kPi;
  return std::polar(mod, phase);
}

inline Weight sample_weight(std::mt19937_64& rng) {
  return Weight(sample_component(rng), sample_component(rng));
}

template <class Pred>
inline std::vector<Weight> sample_weights_until(std::mt19937_64& rng, int count,
                                                Pred&& ok,
                                                int max_tries = 10000) {
  for (int t = 0; t < max_tries; ++t) {
    std::vector<Weight> ws;
    ws.reserve(count);
    for (int i = 0; i < count; ++i) ws.push_back(sample_weight(rng));
    if (ok(ws)) return ws;
  }
  fail(errc::regularity_violation, "failed to sample an admissible weight tuple");
}

inline std::vector<Weight> sample_regular_seq(std::mt19937_64& rng, int count) {
  return sample_weights_until(
      rng, count, [](const std::vector<Weight>& ws) { return is_regular_seq(ws); });
}

}  // namespace qtorus
