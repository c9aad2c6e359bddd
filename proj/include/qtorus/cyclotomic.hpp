#pragma once

// Root-of-unity bookkeeping for odd N >= 3: the primitive 2N-th root
// q = exp(i pi / N), integer powers of q, a fixed branch of the N-th root
// compatible with inversion and negation, and the integer cocycle exponent
// measuring how far that branch is from being multiplicative.

#include <cmath>
#include <complex>
#include <string>

#include "errors.hpp"

namespace qtorus {

using cd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct RootContext {
  int N = 3;          // odd, >= 3
  cd q;               // exp(i pi / N); q^N = -1, q^{2N} = 1
  double tol = 1e-9;  // relative tolerance for residual checks
};

inline RootContext make_context(int N, double tol = 1e-9) {
  if (N < 3 || N % 2 == 0)
    fail(errc::constraint_violation,
         "N must be odd and at least 3, got " + std::to_string(N));
  if (!(tol > 0.0))
    fail(errc::constraint_violation, "tolerance must be positive");
  RootContext ctx;
  ctx.N = N;
  ctx.q = std::polar(1.0, kPi / N);
  ctx.tol = tol;
  return ctx;
}

// q^k with the exponent reduced mod 2N first, so equal residues give
// bit-identical values regardless of how the exponent was accumulated.
inline cd q_power(const RootContext& ctx, long long k) {
  const long long two_n = 2LL * ctx.N;
  long long r = k % two_n;
  if (r < 0) r += two_n;
  return std::polar(1.0, kPi * static_cast<double>(r) / ctx.N);
}

// Branch of the N-th root.  On S = {Re z > 0} u {Re z = 0, Im z > 0} take the
// principal root, except on the positive imaginary axis where the sign is
// epsilon_N = +1 for N = 1 mod 4 and -1 for N = 3 mod 4; extend to the rest of
// the plane by nth_root(z) = -nth_root(-z).  This makes the branch satisfy
//   nth_root(1) = 1,
//   nth_root(z)^{-1} = nth_root(z^{-1}),
//   nth_root(-z) = -nth_root(z),
// which the decomposition parameters rely on throughout.
inline cd nth_root(const RootContext& ctx, cd z) {
  if (std::abs(z) < 1e-300) fail(errc::zero_input, "nth_root of (near) zero");
  // NaN falls outside every branch region and would recurse forever below.
  if (std::isnan(z.real()) || std::isnan(z.imag()))
    fail(errc::constraint_violation, "nth_root of NaN");
  const int N = ctx.N;
  if (z.real() > 0.0) {
    const double r = std::abs(z);
    const double th = std::atan2(z.imag(), z.real());  // in (-pi/2, pi/2)
    return std::polar(std::pow(r, 1.0 / N), th / N);
  }
  if (z.real() == 0.0 && z.imag() > 0.0) {
    const double eps = (N % 4 == 1) ? 1.0 : -1.0;
    return cd(0.0, eps * std::pow(z.imag(), 1.0 / N));
  }
  return -nth_root(ctx, -z);
}

// The unique m in {0..N-1} with nth_root(z w) = q^{2m} nth_root(z) nth_root(w).
// All N candidates are tried; anything other than exactly one match within the
// gate is reported, since the q^{2m} are separated by order-1 distances.
inline int cocycle_m(const RootContext& ctx, cd z, cd w) {
  const cd lhs = nth_root(ctx, z * w);
  const cd base = nth_root(ctx, z) * nth_root(ctx, w);
  const double gate =
      std::max(10.0 * ctx.tol, 1e-10) * std::max(1.0, std::abs(lhs));
  int hit = -1;
  int hits = 0;
  for (int m = 0; m < ctx.N; ++m) {
    if (std::abs(lhs - q_power(ctx, 2 * m) * base) < gate) {
      hit = m;
      ++hits;
    }
  }
  if (hits != 1)
    fail(errc::no_match, "cocycle exponent not uniquely determined");
  return hit;
}

}  // namespace qtorus
