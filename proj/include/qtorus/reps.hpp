#pragma once

// Cyclic representations of the quantum torus X Y = q^2 Y X at q = exp(i pi/N):
// the clock/shift model mu_lambda, its left and right duals on the dual basis,
// tensor actions through the coproduct, the explicit duality isomorphisms
// C_lambda and D_lambda, the shear S, and the decomposition isomorphism F of a
// regular pair together with its closed-form inverse.

#include <string>
#include <vector>

#include "cyclotomic.hpp"
#include "errors.hpp"
#include "qdilog.hpp"
#include "tensorlinalg.hpp"
#include "weights.hpp"

namespace qtorus {

// Clock matrix: A e_k = q^{2k} e_k.
inline TensorOperator gen_A(const RootContext& ctx) {
  Mat a = Mat::Zero(ctx.N, ctx.N);
  for (int k = 0; k < ctx.N; ++k) a(k, k) = q_power(ctx, 2 * k);
  return TensorOperator{ctx.N, 1, std::move(a)};
}

// Shift matrix: B e_k = e_{k+1 mod N}.
inline TensorOperator gen_B(const RootContext& ctx) {
  Mat b = Mat::Zero(ctx.N, ctx.N);
  for (int k = 0; k < ctx.N; ++k) b((k + 1) % ctx.N, k) = 1.0;
  return TensorOperator{ctx.N, 1, std::move(b)};
}

enum class RepKind { cyclic, left_dual, right_dual };

struct Rep {
  Weight weight;        // the defining weight (duals keep the original here)
  Weight effective;     // (x_eff, y_eff) with X^N = x_eff id, Y^N = y_eff id
  TensorOperator X;
  TensorOperator Y;
  RepKind kind = RepKind::cyclic;
};

// mu_lambda: X = x^{1/N} A, Y = y^{1/N} B.
inline Rep rep_mu(const RootContext& ctx, const Weight& l) {
  if (l.is_singular()) fail(errc::singular_weight, "cyclic rep needs x, y != 0");
  Rep r;
  r.weight = l;
  r.effective = l;
  r.X = op_scale(nth_root(ctx, l.x), gen_A(ctx));
  r.Y = op_scale(nth_root(ctx, l.y), gen_B(ctx));
  r.kind = RepKind::cyclic;
  return r;
}

namespace detail {

inline TensorOperator shift_inverse(const RootContext& ctx) {
  Mat b = Mat::Zero(ctx.N, ctx.N);
  for (int k = 0; k < ctx.N; ++k) b(k, (k + 1) % ctx.N) = 1.0;
  return TensorOperator{ctx.N, 1, std::move(b)};
}

inline TensorOperator clock_inverse(const RootContext& ctx) {
  Mat a = Mat::Zero(ctx.N, ctx.N);
  for (int k = 0; k < ctx.N; ++k) a(k, k) = q_power(ctx, -2 * k);
  return TensorOperator{ctx.N, 1, std::move(a)};
}

}  // namespace detail

// Right dual (through the antipode): X = x^{-1/N} A^{-1},
// Y = -y^{1/N} x^{-1/N} A^{-1} B^{-1}.  Effective weight is the dual weight.
inline Rep rep_dual_right(const RootContext& ctx, const Weight& l) {
  if (l.is_singular()) fail(errc::singular_weight, "dual rep needs x, y != 0");
  Rep r;
  r.weight = l;
  r.effective = weight_dual(l);
  const cd xinv_root = nth_root(ctx, 1.0 / l.x);
  const TensorOperator ainv = detail::clock_inverse(ctx);
  const TensorOperator binv = detail::shift_inverse(ctx);
  r.X = op_scale(xinv_root, ainv);
  r.Y = op_scale(-nth_root(ctx, l.y) * xinv_root, ainv * binv);
  r.kind = RepKind::right_dual;
  return r;
}

// Left dual (through the inverse antipode): same X, while
// Y = -y^{1/N} x^{-1/N} B^{-1} A^{-1}.
inline Rep rep_dual_left(const RootContext& ctx, const Weight& l) {
  if (l.is_singular()) fail(errc::singular_weight, "dual rep needs x, y != 0");
  Rep r;
  r.weight = l;
  r.effective = weight_dual(l);
  const cd xinv_root = nth_root(ctx, 1.0 / l.x);
  const TensorOperator ainv = detail::clock_inverse(ctx);
  const TensorOperator binv = detail::shift_inverse(ctx);
  r.X = op_scale(xinv_root, ainv);
  r.Y = op_scale(-nth_root(ctx, l.y) * xinv_root, binv * ainv);
  r.kind = RepKind::left_dual;
  return r;
}

// Coproduct action on an ordered tensor product:
//   X acts as X (x) ... (x) X,
//   Y acts as sum_i 1 (x)...(x) Y_i (x) X_{i+1} (x)...(x) X_k.
inline TensorOperator tensor_action(const RootContext& ctx,
                                    const std::vector<Rep>& reps, char gen) {
  if (reps.empty()) fail(errc::dimension_mismatch, "tensor_action of nothing");
  const int k = static_cast<int>(reps.size());
  if (gen == 'X') {
    std::vector<TensorOperator> xs;
    xs.reserve(k);
    for (const Rep& r : reps) xs.push_back(r.X);
    return kron(xs);
  }
  if (gen != 'Y') fail(errc::constraint_violation, "generator must be X or Y");
  const long side = power_of(ctx.N, k);
  Mat acc = Mat::Zero(side, side);
  for (int i = 0; i < k; ++i) {
    std::vector<TensorOperator> fs;
    fs.reserve(k);
    for (int j = 0; j < k; ++j) {
      if (j < i)
        fs.push_back(identity_op(ctx.N, 1));
      else if (j == i)
        fs.push_back(reps[j].Y);
      else
        fs.push_back(reps[j].X);
    }
    acc += kron(fs).mat;
  }
  return TensorOperator{ctx.N, k, std::move(acc)};
}

// Duality isomorphism C_lambda: e_i -> q^{-2 i m} q^{-i(i-1)} e_{-i}, with
// m the cocycle exponent of (y, x^{-1}).  Satisfies D_lambda C_lambda = A and
// C_lambda D_lambda = A^{-1}.
inline TensorOperator c_map(const RootContext& ctx, const Weight& l) {
  if (l.is_singular()) fail(errc::singular_weight, "duality map needs x, y != 0");
  const int m = cocycle_m(ctx, l.y, 1.0 / l.x);
  Mat c = Mat::Zero(ctx.N, ctx.N);
  for (int i = 0; i < ctx.N; ++i)
    c(((ctx.N - i) % ctx.N), i) = q_power(ctx, -2LL * i * m - 1LL * i * (i - 1));
  return TensorOperator{ctx.N, 1, std::move(c)};
}

// Companion map D_lambda: e_i -> q^{-2 i m} q^{+i(i-1)} e_{-i}.
inline TensorOperator d_map(const RootContext& ctx, const Weight& l) {
  if (l.is_singular()) fail(errc::singular_weight, "duality map needs x, y != 0");
  const int m = cocycle_m(ctx, l.y, 1.0 / l.x);
  Mat d = Mat::Zero(ctx.N, ctx.N);
  for (int i = 0; i < ctx.N; ++i)
    d(((ctx.N - i) % ctx.N), i) = q_power(ctx, -2LL * i * m + 1LL * i * (i - 1));
  return TensorOperator{ctx.N, 1, std::move(d)};
}

// Shear on two factors: e_i (x) e_j -> e_i (x) e_{i+j}.
inline TensorOperator s_map(const RootContext& ctx) {
  const int N = ctx.N;
  Mat s = Mat::Zero(static_cast<long>(N) * N, static_cast<long>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      s(static_cast<long>(i) * N + (i + j) % N, static_cast<long>(i) * N + j) = 1.0;
  return TensorOperator{N, 2, std::move(s)};
}

// Inverse shear: e_i (x) e_j -> e_i (x) e_{j-i}.
inline TensorOperator s_map_inv(const RootContext& ctx) {
  const int N = ctx.N;
  Mat s = Mat::Zero(static_cast<long>(N) * N, static_cast<long>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      s(static_cast<long>(i) * N + ((j - i) % N + N) % N,
        static_cast<long>(i) * N + j) = 1.0;
  return TensorOperator{N, 2, std::move(s)};
}

namespace detail {

// The N-torsion operator B_1 A_2 B_2^{-1} whose functional calculus enters F.
inline TensorOperator f_torsion_arg(const RootContext& ctx) {
  return kron({gen_B(ctx), gen_A(ctx) * shift_inverse(ctx)});
}

}  // namespace detail

// Decomposition isomorphism of a regular pair:
//   F = B_2^{-m} S Phi_{a,c}(B_1 A_2 B_2^{-1}),
// with (a, c) the decomposition parameters and m = m_{x, x'}.  It intertwines
// the tensor action of the pair with id (x) mu_{lambda lambda'}.
inline TensorOperator f_map(const RootContext& ctx, const Weight& l1,
                            const Weight& l2) {
  if (!is_regular_pair(l1, l2))
    fail(errc::regularity_violation, "decomposition needs a regular pair");
  const int m = cocycle_m(ctx, l1.x, l2.x);
  const DilogParams p = decomp_params(ctx, l1, l2);
  const TensorOperator b2_neg_m =
      kron({identity_op(ctx.N, 1), op_pow(gen_B(ctx), -m)});
  return b2_neg_m * s_map(ctx) * phi(ctx, p, detail::f_torsion_arg(ctx));
}

// Closed-form inverse: F^{-1} = Phi^{-1}(B_1 A_2 B_2^{-1}) S^{-1} B_2^{m},
// with the spectral inverse of Phi (no matrix inversion).
inline TensorOperator f_inv(const RootContext& ctx, const Weight& l1,
                            const Weight& l2) {
  if (!is_regular_pair(l1, l2))
    fail(errc::regularity_violation, "decomposition needs a regular pair");
  const int m = cocycle_m(ctx, l1.x, l2.x);
  const DilogParams p = decomp_params(ctx, l1, l2);
  const TensorOperator b2_m = kron({identity_op(ctx.N, 1), op_pow(gen_B(ctx), m)});
  return phi_inv(ctx, p, detail::f_torsion_arg(ctx)) * s_map_inv(ctx) * b2_m;
}

}  // namespace qtorus
