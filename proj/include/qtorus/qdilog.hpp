#pragma once

// Cyclic quantum dilogarithm: the weight function w(a, c | n) on Z/N for
// parameters on the Fermat curve c^N - a^N = 1, the functional-calculus
// operator Phi_{a,c}(C) on the eigenspaces of an N-torsion C, and the
// five-factor pentagon data attached to a regular weight triple.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "cyclotomic.hpp"
#include "errors.hpp"
#include "report.hpp"
#include "tensorlinalg.hpp"
#include "weights.hpp"

namespace qtorus {

struct DilogParams {
  cd a;
  cd c;
};

// c^N - a^N = 1 within tol, and c must stay off the points a q^{2j} where the
// weight function would blow up.
inline DilogParams make_dilog_params(const RootContext& ctx, cd a, cd c) {
  const cd an = std::pow(a, ctx.N);
  const cd cn = std::pow(c, ctx.N);
  const double scale = 1.0 + std::abs(an) + std::abs(cn);
  if (std::abs(cn - an - 1.0) > ctx.tol * scale)
    fail(errc::constraint_violation, "parameters violate c^N - a^N = 1");
  for (int j = 0; j < ctx.N; ++j) {
    if (std::abs(c - a * q_power(ctx, 2 * j)) <= 1e-12)
      fail(errc::constraint_violation, "c coincides with a q^{2j}");
  }
  return DilogParams{a, c};
}

// w(a, c | 0) = 1 and w(a, c | n) = prod_{j=1..n} (c - a q^{2j})^{-1}, read
// mod N in the argument; never zero on valid parameters.
inline cd w_cyclic(const RootContext& ctx, const DilogParams& p, long long n) {
  long long r = n % ctx.N;
  if (r < 0) r += ctx.N;
  cd v = 1.0;
  for (long long j = 1; j <= r; ++j)
    v /= (p.c - p.a * q_power(ctx, 2 * j));
  return v;
}

// Phi_{a,c}(C) = sum_i w(a, c | i) P_i over the torsion eigenprojectors of C.
inline TensorOperator phi(const RootContext& ctx, const DilogParams& p,
                          const TensorOperator& C) {
  const auto projs = torsion_eigenprojectors(ctx, C);
  Mat acc = Mat::Zero(C.side(), C.side());
  for (int i = 0; i < ctx.N; ++i) acc += w_cyclic(ctx, p, i) * projs[i].mat;
  return TensorOperator{C.N, C.arity, std::move(acc)};
}

// Inverse in closed form: the same spectral sum with inverted weights.
inline TensorOperator phi_inv(const RootContext& ctx, const DilogParams& p,
                              const TensorOperator& C) {
  const auto projs = torsion_eigenprojectors(ctx, C);
  Mat acc = Mat::Zero(C.side(), C.side());
  for (int i = 0; i < ctx.N; ++i) acc += projs[i].mat / w_cyclic(ctx, p, i);
  return TensorOperator{C.N, C.arity, std::move(acc)};
}

// Decomposition parameters of a regular pair:
//   a = -y^{1/N} x'^{1/N} / (y x' + y')^{1/N},
//   c =  y'^{1/N} / (y x' + y')^{1/N};
// c^N - a^N = 1 holds identically because (lambda lambda').y = y x' + y'.
inline DilogParams decomp_params(const RootContext& ctx, const Weight& l1,
                                 const Weight& l2) {
  if (!is_regular_pair(l1, l2))
    fail(errc::regularity_violation, "decomposition needs a regular pair");
  const cd denom = nth_root(ctx, l1.y * l2.x + l2.y);
  const cd a = -nth_root(ctx, l1.y) * nth_root(ctx, l2.x) / denom;
  const cd c = nth_root(ctx, l2.y) / denom;
  return make_dilog_params(ctx, a, c);
}

struct PentagonParams {
  DilogParams p1, p2, p3, p4, p5;
  int m = 0;  // twist exponent of the middle factor
};

// The five parameter pairs of the pentagon for a regular triple: four from
// the pairwise decompositions, the fifth in closed form, plus the integer
// twist m = -m_{x', x''}.  The algebraic constraints tying them together are
// verified before returning.
inline PentagonParams pentagon_params(const RootContext& ctx, const Weight& l1,
                                      const Weight& l2, const Weight& l3) {
  if (!is_regular_seq({l1, l2, l3}))
    fail(errc::regularity_violation, "pentagon needs a regular triple");
  const Weight l12 = weight_mul(l1, l2);
  const Weight l23 = weight_mul(l2, l3);
  PentagonParams out;
  out.p1 = decomp_params(ctx, l1, l2);
  out.p2 = decomp_params(ctx, l12, l3);
  out.p3 = decomp_params(ctx, l2, l3);
  out.p4 = decomp_params(ctx, l1, l23);
  const cd r12 = nth_root(ctx, l12.y);  // (y x' + y')^{1/N}
  const cd r23 = nth_root(ctx, l23.y);  // (y' x'' + y'')^{1/N}
  out.p5.a = -nth_root(ctx, l1.y) * nth_root(ctx, l2.x) *
             nth_root(ctx, l3.y) / (r12 * r23);
  out.p5.c = nth_root(ctx, l2.y) *
             nth_root(ctx, l1.y * l2.x * l3.x + l2.y * l3.x + l3.y) /
             (r12 * r23);
  out.p5 = make_dilog_params(ctx, out.p5.a, out.p5.c);
  int m = -cocycle_m(ctx, l2.x, l3.x);
  m %= ctx.N;
  if (m < 0) m += ctx.N;
  out.m = m;

  const auto check = [&](cd lhs, cd rhs, const char* what) {
    const double scale = 1.0 + std::max(std::abs(lhs), std::abs(rhs));
    if (std::abs(lhs - rhs) > ctx.tol * scale)
      fail(errc::constraint_violation,
           std::string("pentagon parameter constraint failed: ") + what);
  };
  check(out.p1.c, out.p4.c * out.p5.c, "c1 = c4 c5");
  check(out.p1.a * out.p2.c, out.p4.c * out.p5.a, "a1 c2 = c4 a5");
  check(out.p1.a * out.p2.a, -q_power(ctx, 2 * out.m) * out.p4.a,
        "a1 a2 = -q^{2m} a4");
  check(out.p2.c, out.p3.c * out.p4.c, "c2 = c3 c4");
  check(out.p2.a * out.p5.c, out.p3.a, "a2 c5 = a3");
  return out;
}

// Five-factor pentagon on a Weyl pair: C, D N-torsion with C D = q^2 D C.
// Phi_{p2}(D) Phi_{p1}(C) is proportional to
// Phi_{p5}(C) Phi_{p4}(q^{2m} C D) Phi_{p3}(D); the proportionality constant
// is extracted and reported.
inline RelationReport pentagon_check(const RootContext& ctx,
                                     const PentagonParams& params,
                                     const TensorOperator& C,
                                     const TensorOperator& D) {
  require_same_shape(C, D);
  const long dim = C.side();
  const double gate = tau(ctx, dim);
  const Mat id = Mat::Identity(dim, dim);
  if (rel_diff(op_pow(C, ctx.N).mat, id) > gate ||
      rel_diff(op_pow(D, ctx.N).mat, id) > gate)
    fail(errc::not_torsion, "pentagon arguments must be N-torsion");
  if (rel_diff((C * D).mat, (q_power(ctx, 2) * (D * C).mat).eval()) > gate)
    fail(errc::bad_commutation, "pentagon arguments must satisfy CD = q^2 DC");

  const TensorOperator mid = op_scale(q_power(ctx, 2 * params.m), C * D);
  const TensorOperator lhs = phi(ctx, params.p2, D) * phi(ctx, params.p1, C);
  const TensorOperator rhs =
      phi(ctx, params.p5, C) * phi(ctx, params.p4, mid) * phi(ctx, params.p3, D);
  const auto [alpha, residual] = proportionality(lhs, rhs);

  RelationReport rep;
  rep.name = "phi_pentagon";
  rep.residual = residual;
  rep.scalar = alpha;
  rep.passed = residual <= gate;
  rep.N = ctx.N;
  return rep;
}

}  // namespace qtorus
