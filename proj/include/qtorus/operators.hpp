#pragma once

// The 6j-symbol operator T on the double multiplicity space, the order-three
// operator A, their closed forms, and the verification dispatcher for the
// relations they satisfy.  Conventions: T_{l1,l2,l3} acts on M (x) M with
// abstract slot 1 carrying the inner decomposition stage; embeddings into
// larger tensor powers are written through embed()'s position lists.

#include <array>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"
#include "errors.hpp"
#include "qdilog.hpp"
#include "report.hpp"
#include "reps.hpp"
#include "tensorlinalg.hpp"
#include "weights.hpp"

namespace qtorus {

namespace detail {

// Optional twist of every decomposition map in the 6j composite: F is
// replaced by zeta (U (x) 1) F on its multiplicity slot, F^{-1} accordingly.
// The untwisted composite is the twist-free call.
struct FTwist {
  const Mat* u = nullptr;                                   // N x N, invertible
  std::function<cd(const Weight&, const Weight&)> zeta;     // per-pair scalar
};

inline TensorOperator twisted_f(const RootContext& ctx, const Weight& a,
                                const Weight& b, const FTwist& tw) {
  TensorOperator f = f_map(ctx, a, b);
  if (tw.u != nullptr) {
    TensorOperator u1 = kron({TensorOperator{ctx.N, 1, *tw.u},
                              identity_op(ctx.N, 1)});
    f = u1 * f;
  }
  if (tw.zeta) f = op_scale(tw.zeta(a, b), f);
  return f;
}

inline TensorOperator twisted_f_inv(const RootContext& ctx, const Weight& a,
                                    const Weight& b, const FTwist& tw) {
  TensorOperator fi = f_inv(ctx, a, b);
  if (tw.u != nullptr) {
    Mat uinv = tw.u->partialPivLu().solve(Mat::Identity(ctx.N, ctx.N));
    TensorOperator u1 = kron({TensorOperator{ctx.N, 1, std::move(uinv)},
                              identity_op(ctx.N, 1)});
    fi = fi * u1;
  }
  if (tw.zeta) fi = op_scale(1.0 / tw.zeta(a, b), fi);
  return fi;
}

// Core composite of four decomposition maps on three factors; it acts only on
// factors 1 and 2, and the returned residual measures exactly that.
inline std::pair<TensorOperator, double> t_composite_core(
    const RootContext& ctx, const Weight& l1, const Weight& l2,
    const Weight& l3, const FTwist& tw) {
  if (!is_regular_seq({l1, l2, l3}))
    fail(errc::regularity_violation, "6j operator needs a regular triple");
  const Weight l12 = weight_mul(l1, l2);
  const Weight l23 = weight_mul(l2, l3);
  const TensorOperator m =
      embed(twisted_f(ctx, l1, l23, tw), {1, 3}, 3) *
      embed(twisted_f(ctx, l2, l3, tw), {2, 3}, 3) *
      embed(twisted_f_inv(ctx, l1, l2, tw), {1, 2}, 3) *
      embed(twisted_f_inv(ctx, l12, l3, tw), {2, 3}, 3);
  auto [u, residual] = factor_out(m, {1, 2}, 3);
  const TensorOperator p12 = perm_op(ctx.N, {2, 1}, 2);
  return {p12 * u * p12, residual};
}

}  // namespace detail

// Compositional 6j operator together with its factorization residual.
inline std::pair<TensorOperator, double> t_compositional_residual(
    const RootContext& ctx, const Weight& l1, const Weight& l2,
    const Weight& l3) {
  return detail::t_composite_core(ctx, l1, l2, l3, detail::FTwist{});
}

// Compositional 6j operator; the factor-out residual is gated here.
inline TensorOperator t_compositional(const RootContext& ctx, const Weight& l1,
                                      const Weight& l2, const Weight& l3) {
  auto [t, residual] = t_compositional_residual(ctx, l1, l2, l3);
  if (residual > tau(ctx, power_of(ctx.N, 3)))
    fail(errc::factorization_failure,
         "6j composite does not factor through the first two slots");
  return t;
}

// Closed form: T = Phi_{a,c}(B_2 A_1 B_1^{-1})^{-1} S_21^{-1} B_1^{m} with
// (a, c) the five-factor closed parameters of the triple and m = m_{x1,x2}.
inline TensorOperator t_closed_form(const RootContext& ctx, const Weight& l1,
                                    const Weight& l2, const Weight& l3) {
  const PentagonParams pp = pentagon_params(ctx, l1, l2, l3);
  const int m = cocycle_m(ctx, l1.x, l2.x);
  const TensorOperator arg =
      kron({gen_A(ctx) * detail::shift_inverse(ctx), gen_B(ctx)});
  const TensorOperator p12 = perm_op(ctx.N, {2, 1}, 2);
  const TensorOperator s21_inv = p12 * s_map_inv(ctx) * p12;
  const TensorOperator b1_m = kron({op_pow(gen_B(ctx), m), identity_op(ctx.N, 1)});
  return phi_inv(ctx, pp.p5, arg) * s21_inv * b1_m;
}

// Canonical order-three operator: the unique solution of the defining
// intertwining equation through the decomposition maps of the pair,
//   (D_{l1*} (x) 1 (x) C_{l1 l2}) (F_{l1,l2}^{-1} (x) 1) (f (x) e_j (x) e_j)
//     = sum over the dual construction on the right regular pair,
// solved in the least-squares sense and gated on the residual.
inline TensorOperator a_canonical(const RootContext& ctx, const Weight& l1,
                                  const Weight& l2) {
  if (!is_regular_pair(l1, l2))
    fail(errc::regularity_violation, "order-three operator needs a regular pair");
  const Weight l12 = weight_mul(l1, l2);
  const Weight l12d = weight_dual(l12);
  if (!is_regular_pair(l2, l12d))
    fail(errc::regularity_violation, "dual pair of the triangle is not regular");
  const int N = ctx.N;
  const long n2 = static_cast<long>(N) * N;
  const long n3 = n2 * N;

  const Mat fi_left = f_inv(ctx, l1, l2).mat;
  const Mat fi_right = f_inv(ctx, l2, l12d).mat;

  Mat l0 = Mat::Zero(n3, N);
  Mat r0 = Mat::Zero(n3, N);
  for (int f = 0; f < N; ++f) {
    for (int r = 0; r < N; ++r)
      for (int s = 0; s < N; ++s)
        for (int j = 0; j < N; ++j) {
          l0(static_cast<long>(r) * n2 + s * N + j, f) =
              fi_left(static_cast<long>(r) * N + s, static_cast<long>(f) * N + j);
          r0(static_cast<long>(j) * n2 + r * N + s, f) =
              fi_right(static_cast<long>(r) * N + s, static_cast<long>(f) * N + j);
        }
  }
  const Mat k =
      kron({d_map(ctx, weight_dual(l1)), identity_op(N, 1), c_map(ctx, l12)}).mat;
  const Mat lhs = k * l0;

  Eigen::ColPivHouseholderQR<Mat> qr(r0);
  Mat a = qr.solve(lhs);
  const double residual = (r0 * a - lhs).norm() / std::max(lhs.norm(), 1e-300);
  if (residual > tau(ctx, n3))
    fail(errc::solve_failure, "order-three intertwining solve did not converge");
  return TensorOperator{N, 1, std::move(a)};
}

// Closed form of the order-three operator as a phase matrix:
//   A[j, i] = q^{-2ij - j^2 + (2 m1 + 1) j + 2 (m1 - m2) i},
// m1 = m_{x,x'} - m_{(ll').y, (ll').x^{-1}}, m2 = m_{-y x^{-1}, x}.
inline TensorOperator a_closed_form(const RootContext& ctx, const Weight& l1,
                                    const Weight& l2) {
  if (!is_regular_pair(l1, l2))
    fail(errc::regularity_violation, "order-three operator needs a regular pair");
  const Weight l12 = weight_mul(l1, l2);
  const long long m1 =
      cocycle_m(ctx, l1.x, l2.x) - cocycle_m(ctx, l12.y, 1.0 / l12.x);
  const long long m2 = cocycle_m(ctx, -l1.y / l1.x, l1.x);
  Mat a = Mat::Zero(ctx.N, ctx.N);
  for (int j = 0; j < ctx.N; ++j)
    for (int i = 0; i < ctx.N; ++i)
      a(j, i) = q_power(ctx, -2LL * i * j - 1LL * j * j + (2 * m1 + 1) * j +
                                 2 * (m1 - m2) * i);
  return TensorOperator{ctx.N, 1, std::move(a)};
}

enum class RelationKind {
  pentagon_T,
  order3_A,
  ata,
  tat,
  intertwine_F,
  dual_iso,
  phi_functional,
  phi_conjugation,
  phi_pentagon,
  t_proportional,
  a_proportional,
  f_nonuniqueness,
};

inline const char* relation_name(RelationKind k) {
  switch (k) {
    case RelationKind::pentagon_T: return "pentagon_T";
    case RelationKind::order3_A: return "order3_A";
    case RelationKind::ata: return "ata";
    case RelationKind::tat: return "tat";
    case RelationKind::intertwine_F: return "intertwine_F";
    case RelationKind::dual_iso: return "dual_iso";
    case RelationKind::phi_functional: return "phi_functional";
    case RelationKind::phi_conjugation: return "phi_conjugation";
    case RelationKind::phi_pentagon: return "phi_pentagon";
    case RelationKind::t_proportional: return "t_proportional";
    case RelationKind::a_proportional: return "a_proportional";
    case RelationKind::f_nonuniqueness: return "f_nonuniqueness";
  }
  return "unknown";
}

inline RelationKind relation_from_name(const std::string& s) {
  for (RelationKind k :
       {RelationKind::pentagon_T, RelationKind::order3_A, RelationKind::ata,
        RelationKind::tat, RelationKind::intertwine_F, RelationKind::dual_iso,
        RelationKind::phi_functional, RelationKind::phi_conjugation,
        RelationKind::phi_pentagon, RelationKind::t_proportional,
        RelationKind::a_proportional, RelationKind::f_nonuniqueness}) {
    if (s == relation_name(k)) return k;
  }
  fail(errc::constraint_violation, "unknown relation kind: " + s);
}

inline int relation_arity(RelationKind k) {
  switch (k) {
    case RelationKind::pentagon_T: return 4;
    case RelationKind::order3_A: return 2;
    case RelationKind::ata: return 3;
    case RelationKind::tat: return 3;
    case RelationKind::intertwine_F: return 2;
    case RelationKind::dual_iso: return 1;
    case RelationKind::phi_functional: return 2;
    case RelationKind::phi_conjugation: return 2;
    case RelationKind::phi_pentagon: return 3;
    case RelationKind::t_proportional: return 3;
    case RelationKind::a_proportional: return 2;
    case RelationKind::f_nonuniqueness: return 3;
  }
  return 0;
}

// A weight tuple is admissible for a kind when the sequence it feeds into the
// operator constructions is regular.
inline bool relation_tuple_ok(RelationKind k, const std::vector<Weight>& ws) {
  switch (k) {
    case RelationKind::dual_iso:
      return !ws[0].is_singular();
    case RelationKind::order3_A:
    case RelationKind::intertwine_F:
    case RelationKind::phi_functional:
    case RelationKind::phi_conjugation:
    case RelationKind::a_proportional:
      return is_regular_pair(ws[0], ws[1]);
    default:
      return is_regular_seq(ws);
  }
}

namespace detail {

inline Mat deterministic_unitary(int N, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat z(N, N);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) z(r, c) = cd(g(rng), g(rng));
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ() * Mat::Identity(N, N);
  return q;
}

struct Residuals {
  double worst_ratio = 0.0;  // residual / gate, maxed over checks
  double worst = 0.0;        // raw residual at the worst ratio

  void add(double res, double gate) {
    const double ratio = res / gate;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst = res;
    }
  }
};

inline RelationReport check_pentagon_T(const RootContext& ctx,
                                       const std::vector<Weight>& w) {
  const Weight l34 = weight_mul(w[2], w[3]);
  const Weight l12 = weight_mul(w[0], w[1]);
  const Weight l23 = weight_mul(w[1], w[2]);
  const TensorOperator lhs =
      embed(t_compositional(ctx, w[0], w[1], l34), {2, 3}, 3) *
      embed(t_compositional(ctx, l12, w[2], w[3]), {1, 2}, 3);
  const TensorOperator rhs =
      embed(t_compositional(ctx, w[1], w[2], w[3]), {1, 2}, 3) *
      embed(t_compositional(ctx, w[0], l23, w[3]), {1, 3}, 3) *
      embed(t_compositional(ctx, w[0], w[1], w[2]), {2, 3}, 3);
  const auto [c, res] = proportionality(lhs, rhs);
  const double gate = tau(ctx, power_of(ctx.N, 3));
  RelationReport rep{"pentagon_T", res, c,
                     res <= gate && std::abs(c - 1.0) <= 10.0 * gate, w, ctx.N};
  return rep;
}

inline RelationReport check_order3_A(const RootContext& ctx,
                                     const std::vector<Weight>& w) {
  const Weight l12d = weight_dual(weight_mul(w[0], w[1]));
  const TensorOperator comp = a_canonical(ctx, l12d, w[0]) *
                              a_canonical(ctx, w[1], l12d) *
                              a_canonical(ctx, w[0], w[1]);
  const auto [c, res] = proportionality(comp, identity_op(ctx.N, 1));
  const cd pred = q_power(ctx, -2 * cocycle_m(ctx, w[0].x, w[1].x));
  const double gate = tau(ctx, ctx.N);
  RelationReport rep{"order3_A", res, c,
                     res <= gate && std::abs(c - pred) <= 10.0 * gate, w, ctx.N};
  return rep;
}

inline RelationReport check_ata(const RootContext& ctx,
                                const std::vector<Weight>& w) {
  const Weight l4 = weight_mul(w[0], w[1]);
  const Weight l0 = weight_mul(l4, w[2]);
  const Weight l4d = weight_dual(l4);
  const Weight l0d = weight_dual(l0);
  const TensorOperator lhs =
      embed(t_compositional(ctx, w[2], l0d, w[0]), {2, 1}, 2) *
      embed(op_inverse(a_canonical(ctx, l4d, w[0])), {2}, 2) *
      embed(a_canonical(ctx, l4, w[2]), {1}, 2);
  const TensorOperator rhs =
      embed(op_inverse(a_canonical(ctx, l0d, w[0])), {2}, 2) *
      embed(a_canonical(ctx, w[1], w[2]), {1}, 2) *
      embed(t_compositional(ctx, w[0], w[1], w[2]), {1, 2}, 2);
  const auto [c, res] = proportionality(lhs, rhs);
  const cd pred = q_power(
      ctx, 2 * (cocycle_m(ctx, w[0].x, w[1].x) -
                cocycle_m(ctx, w[0].x, w[1].x * w[2].x)));
  const double gate = tau(ctx, power_of(ctx.N, 2));
  RelationReport rep{"ata", res, c,
                     res <= gate && std::abs(c - pred) <= 10.0 * gate, w, ctx.N};
  return rep;
}

inline RelationReport check_tat(const RootContext& ctx,
                                const std::vector<Weight>& w) {
  const Weight l4 = weight_mul(w[0], w[1]);
  const Weight l5 = weight_mul(w[1], w[2]);
  const Weight l0d = weight_dual(weight_mul(l4, w[2]));
  const TensorOperator lhs =
      embed(t_compositional(ctx, w[1], w[2], l0d), {1, 2}, 2) *
      embed(a_canonical(ctx, w[0], l5), {1}, 2) *
      embed(t_compositional(ctx, w[0], w[1], w[2]), {2, 1}, 2);
  const TensorOperator rhs = embed(a_canonical(ctx, l4, w[2]), {1}, 2) *
                             embed(a_canonical(ctx, w[0], w[1]), {2}, 2) *
                             perm_op(ctx.N, {2, 1}, 2);
  const auto [c, res] = proportionality(lhs, rhs);
  const double gate = tau(ctx, power_of(ctx.N, 2));
  RelationReport rep{"tat", res, c,
                     res <= gate && std::abs(c - 1.0) <= 10.0 * gate, w, ctx.N};
  return rep;
}

inline RelationReport check_intertwine_F(const RootContext& ctx,
                                         const std::vector<Weight>& w) {
  const Weight l12 = weight_mul(w[0], w[1]);
  const TensorOperator f = f_map(ctx, w[0], w[1]);
  const TensorOperator fi = f_inv(ctx, w[0], w[1]);
  const TensorOperator id1 = identity_op(ctx.N, 1);
  const TensorOperator id2 = identity_op(ctx.N, 2);
  const Rep r1 = rep_mu(ctx, w[0]);
  const Rep r2 = rep_mu(ctx, w[1]);
  const Rep r12 = rep_mu(ctx, l12);
  const double gate2 = tau(ctx, power_of(ctx.N, 2));
  Residuals acc;
  for (char gen : {'X', 'Y'}) {
    const TensorOperator lhs = f * tensor_action(ctx, {r1, r2}, gen);
    const TensorOperator rhs =
        kron({id1, gen == 'X' ? r12.X : r12.Y}) * f;
    acc.add(rel_diff(lhs, rhs), gate2);
  }
  acc.add(rel_diff(f * fi, id2), gate2);
  acc.add(rel_diff(fi * f, id2), gate2);

  // Conjugation identities on the generator lattice.
  const int m = cocycle_m(ctx, w[0].x, w[1].x);
  const DilogParams p = decomp_params(ctx, w[0], w[1]);
  const TensorOperator a1 = kron({gen_A(ctx), id1});
  const TensorOperator a2 = kron({id1, gen_A(ctx)});
  const TensorOperator b1 = kron({gen_B(ctx), id1});
  const TensorOperator b2 = kron({id1, gen_B(ctx)});
  const TensorOperator b1i = op_inverse(b1);
  const TensorOperator b2i = op_inverse(b2);
  const cd qm = q_power(ctx, 2 * m);
  acc.add(rel_diff(f * (a1 * b2) * fi, a1 * b2), gate2);
  acc.add(rel_diff(f * b1 * fi, b1 * b2), gate2);
  {
    Mat rhs = p.c * a1.mat - p.a * qm * (b1 * a2).mat;
    acc.add(rel_diff((f * a1 * fi).mat, rhs), gate2);
  }
  {
    Mat rhs = p.c * (a1 * b1i * b2i).mat - p.a * qm * (a2 * b2i).mat;
    acc.add(rel_diff((f * (a1 * b1i) * fi).mat, rhs), gate2);
  }
  RelationReport rep{"intertwine_F", acc.worst, std::nullopt,
                     acc.worst_ratio <= 1.0, w, ctx.N};
  return rep;
}

inline RelationReport check_dual_iso(const RootContext& ctx,
                                     const std::vector<Weight>& w) {
  const Weight& l = w[0];
  const Weight ld = weight_dual(l);
  const TensorOperator a = gen_A(ctx);
  const TensorOperator b = gen_B(ctx);
  const TensorOperator ai = clock_inverse(ctx);
  const TensorOperator bi = shift_inverse(ctx);
  const TensorOperator c = c_map(ctx, l);
  const TensorOperator d = d_map(ctx, l);
  const TensorOperator cinv = op_inverse(c);
  const TensorOperator dinv = op_inverse(d);
  const int m = cocycle_m(ctx, l.y, 1.0 / l.x);
  const cd qm = q_power(ctx, -2 * m);
  const double gate1 = tau(ctx, ctx.N);
  const double gate2 = tau(ctx, power_of(ctx.N, 2));
  Residuals acc;
  acc.add(rel_diff(d * c, a), gate1);
  acc.add(rel_diff(c * d, ai), gate1);
  acc.add(rel_diff(cinv * a * c, ai), gate1);
  acc.add(rel_diff((cinv * b * c).mat, (qm * (ai * bi).mat).eval()), gate1);
  acc.add(rel_diff((dinv * b * d).mat, (qm * (a * bi).mat).eval()), gate1);

  // Pairing lemmas: ev is the row functional <e_i (x) e_j> = delta_{ij}.
  const long n2 = static_cast<long>(ctx.N) * ctx.N;
  Eigen::RowVectorXcd ev = Eigen::RowVectorXcd::Zero(n2);
  for (int i = 0; i < ctx.N; ++i) ev(static_cast<long>(i) * ctx.N + i) = 1.0;
  const Mat cd_pair = kron({c, d_map(ctx, ld)}).mat;
  const Mat dd_pair = kron({dinv, d_map(ctx, ld)}).mat;
  const Mat cc_pair = kron({op_inverse(c_map(ctx, ld)), c}).mat;
  const Mat a2 = kron({identity_op(ctx.N, 1), a}).mat;
  const Mat a2i = kron({identity_op(ctx.N, 1), ai}).mat;
  const auto row_res = [&](const Eigen::RowVectorXcd& x,
                           const Eigen::RowVectorXcd& y) {
    return (x - y).norm() / std::max(y.norm(), 1e-300);
  };
  acc.add(row_res(ev * cd_pair, ev), gate2);
  acc.add(row_res(ev * dd_pair, ev * a2i), gate2);
  acc.add(row_res(ev * cc_pair, ev * a2), gate2);

  RelationReport rep{"dual_iso", acc.worst, std::nullopt, acc.worst_ratio <= 1.0,
                     w, ctx.N};
  return rep;
}

inline RelationReport check_phi_functional(const RootContext& ctx,
                                           const std::vector<Weight>& w) {
  const DilogParams p = decomp_params(ctx, w[0], w[1]);
  const TensorOperator a = gen_A(ctx);
  const TensorOperator shifted = op_scale(q_power(ctx, -2), a);
  const TensorOperator lhs = phi(ctx, p, shifted) * phi_inv(ctx, p, a);
  const Mat rhs = p.c * Mat::Identity(ctx.N, ctx.N) - p.a * a.mat;
  const double res = rel_diff(lhs.mat, rhs);
  const double gate = tau(ctx, ctx.N);
  RelationReport rep{"phi_functional", res, std::nullopt, res <= gate, w, ctx.N};
  return rep;
}

inline RelationReport check_phi_conjugation(const RootContext& ctx,
                                            const std::vector<Weight>& w) {
  const DilogParams p = decomp_params(ctx, w[0], w[1]);
  const TensorOperator a = gen_A(ctx);
  const TensorOperator b = gen_B(ctx);
  const TensorOperator bi = shift_inverse(ctx);
  const TensorOperator pa = phi(ctx, p, a);
  const TensorOperator pa_inv = phi_inv(ctx, p, a);
  const double gate = tau(ctx, ctx.N);
  Residuals acc;
  // C D = q^2 D C form (D = B): D Phi(C) = Phi(C) (c D - a C D).
  {
    const Mat rhs = pa.mat * (p.c * b.mat - p.a * (a * b).mat);
    acc.add(rel_diff((b * pa).mat, rhs), gate);
  }
  // C D = q^{-2} D C form (D = B^{-1}):
  // D Phi(C)^{-1} = Phi(C)^{-1} (c D - a D C).
  {
    const Mat rhs = pa_inv.mat * (p.c * bi.mat - p.a * (bi * a).mat);
    acc.add(rel_diff((bi * pa_inv).mat, rhs), gate);
  }
  // Conjugation-action restatements of the two forms.
  {
    const Mat cid_minus_ac = p.c * Mat::Identity(ctx.N, ctx.N) - p.a * a.mat;
    acc.add(rel_diff((pa_inv * b * pa).mat, (cid_minus_ac * b.mat).eval()), gate);
    acc.add(rel_diff((pa * bi * pa_inv).mat, (bi.mat * cid_minus_ac).eval()), gate);
  }
  // Equivariance under conjugation by an invertible map.
  {
    const TensorOperator t = b * a;
    const TensorOperator tinv = op_inverse(t);
    acc.add(rel_diff(phi(ctx, p, t * a * tinv), t * pa * tinv), gate);
  }
  RelationReport rep{"phi_conjugation", acc.worst, std::nullopt,
                     acc.worst_ratio <= 1.0, w, ctx.N};
  return rep;
}

inline RelationReport check_phi_pentagon(const RootContext& ctx,
                                         const std::vector<Weight>& w) {
  const PentagonParams pp = pentagon_params(ctx, w[0], w[1], w[2]);
  const RelationReport on_ab = pentagon_check(ctx, pp, gen_A(ctx), gen_B(ctx));
  const TensorOperator id1 = identity_op(ctx.N, 1);
  const TensorOperator ab = gen_A(ctx) * shift_inverse(ctx);
  const TensorOperator c3 = kron({gen_B(ctx), ab, id1});
  const TensorOperator d3 = kron({id1, gen_B(ctx), ab});
  const RelationReport on_triple = pentagon_check(ctx, pp, c3, d3);
  RelationReport rep;
  rep.name = "phi_pentagon";
  rep.residual = std::max(on_ab.residual, on_triple.residual);
  rep.scalar = on_ab.scalar;
  rep.passed = on_ab.passed && on_triple.passed;
  rep.weights_used = w;
  rep.N = ctx.N;
  return rep;
}

inline RelationReport check_t_proportional(const RootContext& ctx,
                                           const std::vector<Weight>& w) {
  const TensorOperator tc = t_compositional(ctx, w[0], w[1], w[2]);
  const TensorOperator tf = t_closed_form(ctx, w[0], w[1], w[2]);
  const auto [c, res] = proportionality(tc, tf);
  const double gate = tau(ctx, power_of(ctx.N, 2));
  RelationReport rep{"t_proportional", res, c, res <= gate, w, ctx.N};
  return rep;
}

inline RelationReport check_a_proportional(const RootContext& ctx,
                                           const std::vector<Weight>& w) {
  const TensorOperator ac = a_canonical(ctx, w[0], w[1]);
  const TensorOperator af = a_closed_form(ctx, w[0], w[1]);
  const auto [c, res] = proportionality(ac, af);
  const double gate = tau(ctx, ctx.N);
  Residuals acc;
  acc.add(res, gate);

  // Conjugation actions shared by the canonical and closed forms:
  //   A a A^{-1} = q^{2 m1} b a^{-1},  A b A^{-1} = q^{2(m1 - m2)} a^{-1}.
  const Weight l12 = weight_mul(w[0], w[1]);
  const long long m1 =
      cocycle_m(ctx, w[0].x, w[1].x) - cocycle_m(ctx, l12.y, 1.0 / l12.x);
  const long long m2 = cocycle_m(ctx, -w[0].y / w[0].x, w[0].x);
  const TensorOperator a = gen_A(ctx);
  const TensorOperator b = gen_B(ctx);
  const TensorOperator ai = clock_inverse(ctx);
  const Mat conj_a = (q_power(ctx, 2 * m1) * (b * ai).mat).eval();
  const Mat conj_b = (q_power(ctx, 2 * (m1 - m2)) * ai.mat).eval();
  for (const TensorOperator* op : {&ac, &af}) {
    const TensorOperator inv = op_inverse(*op);
    acc.add(rel_diff(((*op) * a * inv).mat, conj_a), gate);
    acc.add(rel_diff(((*op) * b * inv).mat, conj_b), gate);
  }
  RelationReport rep{"a_proportional", acc.worst, c, acc.worst_ratio <= 1.0, w,
                     ctx.N};
  return rep;
}

inline RelationReport check_f_nonuniqueness(const RootContext& ctx,
                                            const std::vector<Weight>& w) {
  const TensorOperator t = t_compositional(ctx, w[0], w[1], w[2]);
  const Mat u = deterministic_unitary(ctx.N, 0xF00DULL + ctx.N);
  FTwist tw;
  tw.u = &u;
  auto [tt, fres] = t_composite_core(ctx, w[0], w[1], w[2], tw);
  const TensorOperator uu =
      kron({TensorOperator{ctx.N, 1, u}, TensorOperator{ctx.N, 1, u}});
  const TensorOperator target = uu * t * op_inverse(uu);
  const auto [c, res] = proportionality(tt, target);
  const double gate = tau(ctx, power_of(ctx.N, 2));
  const bool passed = res <= gate && std::abs(c - 1.0) <= 10.0 * gate &&
                      fres <= tau(ctx, power_of(ctx.N, 3));
  RelationReport rep{"f_nonuniqueness", std::max(res, fres), c, passed, w, ctx.N};
  return rep;
}

}  // namespace detail

// Verify one relation instance on an explicit weight tuple.
inline RelationReport verify_relation(const RootContext& ctx, RelationKind kind,
                                      const std::vector<Weight>& weights) {
  if (static_cast<int>(weights.size()) != relation_arity(kind))
    fail(errc::constraint_violation,
         std::string(relation_name(kind)) + " expects " +
             std::to_string(relation_arity(kind)) + " weights");
  if (!relation_tuple_ok(kind, weights))
    fail(errc::regularity_violation,
         std::string(relation_name(kind)) + " weight tuple is not regular");
  switch (kind) {
    case RelationKind::pentagon_T: return detail::check_pentagon_T(ctx, weights);
    case RelationKind::order3_A: return detail::check_order3_A(ctx, weights);
    case RelationKind::ata: return detail::check_ata(ctx, weights);
    case RelationKind::tat: return detail::check_tat(ctx, weights);
    case RelationKind::intertwine_F:
      return detail::check_intertwine_F(ctx, weights);
    case RelationKind::dual_iso: return detail::check_dual_iso(ctx, weights);
    case RelationKind::phi_functional:
      return detail::check_phi_functional(ctx, weights);
    case RelationKind::phi_conjugation:
      return detail::check_phi_conjugation(ctx, weights);
    case RelationKind::phi_pentagon:
      return detail::check_phi_pentagon(ctx, weights);
    case RelationKind::t_proportional:
      return detail::check_t_proportional(ctx, weights);
    case RelationKind::a_proportional:
      return detail::check_a_proportional(ctx, weights);
    case RelationKind::f_nonuniqueness:
      return detail::check_f_nonuniqueness(ctx, weights);
  }
  fail(errc::constraint_violation, "unhandled relation kind");
}

// Sample an admissible tuple for the kind from the seeded generator.
inline std::vector<Weight> sample_relation_tuple(const RootContext& ctx,
                                                 RelationKind kind,
                                                 std::mt19937_64& rng) {
  (void)ctx;
  return sample_weights_until(
      rng, relation_arity(kind),
      [&](const std::vector<Weight>& ws) { return relation_tuple_ok(kind, ws); });
}

}  // namespace qtorus
