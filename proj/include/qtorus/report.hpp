#pragma once

// Outcome record shared by all relation verifications.  passed reflects the
// residual gate tol * sqrt(dim); when a relation predicts a specific scalar,
// the scalar comparison is folded into passed as well.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cyclotomic.hpp"
#include "weights.hpp"

namespace qtorus {

struct RelationReport {
  std::string name;
  double residual = 0.0;
  std::optional<cd> scalar;
  bool passed = false;
  std::vector<Weight> weights_used;
  int N = 0;
};

// Relative Frobenius tolerance at the given ambient dimension.
inline double tau(const RootContext& ctx, long dim) {
  return ctx.tol * std::sqrt(static_cast<double>(dim));
}

}  // namespace qtorus
