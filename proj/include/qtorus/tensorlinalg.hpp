#pragma once

// Dense operators on k-fold tensor powers of C^N.  The basis vector
// e_{i_1} (x) ... (x) e_{i_k} has flat index sum_r i_r N^{k-r}, so the first
// factor is the most significant digit.  Everything here is plain linear
// algebra; Eigen does the heavy lifting behind the fixed interfaces.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"
#include "errors.hpp"

namespace qtorus {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct TensorOperator {
  int N = 0;      // local dimension
  int arity = 0;  // number of tensor factors
  Mat mat;        // square, side N^arity

  Eigen::Index side() const { return mat.rows(); }
};

inline long power_of(int base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline TensorOperator make_op(int N, int arity, Mat m) {
  const long side = power_of(N, arity);
  if (m.rows() != side || m.cols() != side)
    fail(errc::dimension_mismatch, "matrix side does not match N^arity");
  return TensorOperator{N, arity, std::move(m)};
}

inline TensorOperator identity_op(int N, int arity) {
  const long side = power_of(N, arity);
  return TensorOperator{N, arity, Mat::Identity(side, side)};
}

inline void require_same_shape(const TensorOperator& a,
                               const TensorOperator& b) {
  if (a.N != b.N || a.arity != b.arity)
    fail(errc::dimension_mismatch, "operator shapes differ");
}

inline TensorOperator operator*(const TensorOperator& a,
                                const TensorOperator& b) {
  require_same_shape(a, b);
  return TensorOperator{a.N, a.arity, a.mat * b.mat};
}

inline TensorOperator op_inverse(const TensorOperator& a) {
  return TensorOperator{a.N, a.arity,
                        a.mat.partialPivLu().solve(
                            Mat::Identity(a.side(), a.side()))};
}

inline TensorOperator op_pow(const TensorOperator& a, int k) {
  TensorOperator r = identity_op(a.N, a.arity);
  TensorOperator base = k >= 0 ? a : op_inverse(a);
  int e = k >= 0 ? k : -k;
  for (int i = 0; i < e; ++i) r = r * base;
  return r;
}

inline TensorOperator op_scale(cd s, const TensorOperator& a) {
  return TensorOperator{a.N, a.arity, s * a.mat};
}

// ||A - B||_F / ||B||_F; the reference norm is floored to avoid dividing by
// an exactly zero target.
inline double rel_diff(const Mat& a, const Mat& b) {
  const double ref = b.norm();
  return (a - b).norm() / std::max(ref, 1e-300);
}

inline double rel_diff(const TensorOperator& a, const TensorOperator& b) {
  require_same_shape(a, b);
  return rel_diff(a.mat, b.mat);
}

// Tensor product in the given order; N must agree, arities add.
inline TensorOperator kron(const std::vector<TensorOperator>& ops) {
  if (ops.empty()) fail(errc::dimension_mismatch, "kron of empty list");
  Mat acc = ops[0].mat;
  int arity = ops[0].arity;
  for (std::size_t i = 1; i < ops.size(); ++i) {
    if (ops[i].N != ops[0].N)
      fail(errc::dimension_mismatch, "kron factors over different N");
    acc = Eigen::kroneckerProduct(acc, ops[i].mat).eval();
    arity += ops[i].arity;
  }
  return TensorOperator{ops[0].N, arity, std::move(acc)};
}

namespace detail {

// Decode flat index into per-factor digits, first factor most significant.
inline void decode(long idx, int N, int k, int* digits) {
  for (int r = k - 1; r >= 0; --r) {
    digits[r] = static_cast<int>(idx % N);
    idx /= N;
  }
}

inline long encode(const int* digits, int N, int k) {
  long idx = 0;
  for (int r = 0; r < k; ++r) idx = idx * N + digits[r];
  return idx;
}

inline void check_positions(const std::vector<int>& pos, int arity, int k) {
  if (static_cast<int>(pos.size()) != arity)
    fail(errc::bad_positions, "position count does not match operator arity");
  std::vector<int> seen;
  for (int p : pos) {
    if (p < 1 || p > k)
      fail(errc::bad_positions, "factor index out of range");
    if (std::find(seen.begin(), seen.end(), p) != seen.end())
      fail(errc::bad_positions, "repeated factor index");
    seen.push_back(p);
  }
}

}  // namespace detail

// Place the arity-m operator M on the listed factors (1-based, in slot order)
// of a k-fold space, identity elsewhere.  embed(M, (2,1), 2) equals
// P_(12) M P_(12); disjoint embeds commute; embeds compose with operator
// products slotwise.
inline TensorOperator embed(const TensorOperator& M,
                            const std::vector<int>& positions, int k) {
  detail::check_positions(positions, M.arity, k);
  const int N = M.N;
  const long side = power_of(N, k);
  Mat out = Mat::Zero(side, side);
  std::vector<int> rd(k), cdg(k), mr(M.arity), mc(M.arity);
  std::vector<char> on(k + 1, 0);
  for (int p : positions) on[p] = 1;
  for (long r = 0; r < side; ++r) {
    detail::decode(r, N, k, rd.data());
    for (long c = 0; c < side; ++c) {
      detail::decode(c, N, k, cdg.data());
      bool diag = true;
      for (int f = 1; f <= k; ++f) {
        if (!on[f] && rd[f - 1] != cdg[f - 1]) {
          diag = false;
          break;
        }
      }
      if (!diag) continue;
      for (int s = 0; s < M.arity; ++s) {
        mr[s] = rd[positions[s] - 1];
        mc[s] = cdg[positions[s] - 1];
      }
      out(r, c) = M.mat(detail::encode(mr.data(), N, M.arity),
                        detail::encode(mc.data(), N, M.arity));
    }
  }
  return TensorOperator{N, k, std::move(out)};
}

// Permutation operator: sends the t-th factor to the gamma(t)-th factor,
// P (e_{i_1} (x) ... (x) e_{i_k}) = e_{j_1} (x) ... with j_{gamma(t)} = i_t.
// Then P_gamma P_eta = P_{gamma o eta} and
// P_gamma embed(M, p, k) P_gamma^{-1} = embed(M, gamma(p), k).
inline TensorOperator perm_op(int N, const std::vector<int>& gamma, int k) {
  detail::check_positions(gamma, k, k);
  const long side = power_of(N, k);
  Mat out = Mat::Zero(side, side);
  std::vector<int> src(k), dst(k);
  for (long c = 0; c < side; ++c) {
    detail::decode(c, N, k, src.data());
    for (int t = 0; t < k; ++t) dst[gamma[t] - 1] = src[t];
    out(detail::encode(dst.data(), N, k), c) = 1.0;
  }
  return TensorOperator{N, k, std::move(out)};
}

// Extract the action on the kept factors by slicing the dropped factors at
// basis index 0; the residual reports how far M is from acting as identity on
// the dropped factors:  residual = ||M - embed(U, kept, k)||_F / ||M||_F.
inline std::pair<TensorOperator, double> factor_out(
    const TensorOperator& M, const std::vector<int>& kept, int k) {
  if (M.arity != k) fail(errc::dimension_mismatch, "factor_out arity mismatch");
  const int m = static_cast<int>(kept.size());
  detail::check_positions(kept, m, k);
  const int N = M.N;
  const long uside = power_of(N, m);
  Mat u = Mat::Zero(uside, uside);
  std::vector<int> rd(k, 0), cdg(k, 0), ur(m), uc(m);
  for (long r = 0; r < uside; ++r) {
    detail::decode(r, N, m, ur.data());
    std::fill(rd.begin(), rd.end(), 0);
    for (int s = 0; s < m; ++s) rd[kept[s] - 1] = ur[s];
    for (long c = 0; c < uside; ++c) {
      detail::decode(c, N, m, uc.data());
      std::fill(cdg.begin(), cdg.end(), 0);
      for (int s = 0; s < m; ++s) cdg[kept[s] - 1] = uc[s];
      u(r, c) = M.mat(detail::encode(rd.data(), N, k),
                      detail::encode(cdg.data(), N, k));
    }
  }
  TensorOperator U{N, m, std::move(u)};
  const double mn = M.mat.norm();
  if (mn < 1e-300) fail(errc::zero_reference, "factor_out of zero operator");
  const double residual = (M.mat - embed(U, kept, k).mat).norm() / mn;
  return {std::move(U), residual};
}

// Best scalar c with M ~ c V in the Frobenius inner product, plus the
// relative residual ||M - c V||_F / ||M||_F.
inline std::pair<cd, double> proportionality(const TensorOperator& M,
                                             const TensorOperator& V) {
  require_same_shape(M, V);
  const double vn2 = V.mat.squaredNorm();
  if (vn2 < 1e-300) fail(errc::zero_reference, "proportionality reference is zero");
  const cd c = (V.mat.conjugate().cwiseProduct(M.mat)).sum() / vn2;
  const double mn = M.mat.norm();
  const double residual =
      mn < 1e-300 ? 0.0 : (M.mat - c * V.mat).norm() / mn;
  return {c, residual};
}

// Dimension of the joint commutant {U : UG = GU for all G}.  The linear
// system (I (x) G - G^T (x) I) vec(U) = 0 is stacked over the generators and
// its numerical nullity counted by SVD.  Sides above 15 are refused; the
// intended uses are desk-scale.
inline int commutant_dim(const std::vector<TensorOperator>& gens,
                         double tol = 1e-9) {
  if (gens.empty()) fail(errc::dimension_mismatch, "commutant of empty list");
  const long d = gens[0].side();
  if (d > 15) fail(errc::too_large, "commutant side capped at 15");
  for (const auto& g : gens) require_same_shape(gens[0], g);
  const long dd = d * d;
  Mat K(static_cast<long>(gens.size()) * dd, dd);
  const Mat id = Mat::Identity(d, d);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Mat& g = gens[i].mat;
    K.block(static_cast<long>(i) * dd, 0, dd, dd) =
        Eigen::kroneckerProduct(id, g) -
        Eigen::kroneckerProduct(g.transpose(), id);
  }
  Eigen::JacobiSVD<Mat> svd(K);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  if (smax <= 0.0) return static_cast<int>(dd);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) >= tol * smax) ++rank;
  return static_cast<int>(dd - rank);
}

// Dimension of the intertwiner space {U : U rho(g) = rho'(g) U} for matched
// generator lists; same machinery as commutant_dim (which is the rho = rho'
// case).
inline int intertwiner_dim(const std::vector<TensorOperator>& gens_from,
                           const std::vector<TensorOperator>& gens_to,
                           double tol = 1e-9) {
  if (gens_from.empty() || gens_from.size() != gens_to.size())
    fail(errc::dimension_mismatch, "generator lists must match and be nonempty");
  const long d = gens_from[0].side();
  const long dp = gens_to[0].side();
  if (d > 15 || dp > 15) fail(errc::too_large, "intertwiner side capped at 15");
  const long dim = d * dp;
  Mat K(static_cast<long>(gens_from.size()) * dim, dim);
  const Mat idf = Mat::Identity(d, d);
  const Mat idt = Mat::Identity(dp, dp);
  for (std::size_t i = 0; i < gens_from.size(); ++i) {
    // vec is column-major: vec(U G) = (G^T (x) I) vec(U), vec(G' U) = (I (x) G') vec(U).
    K.block(static_cast<long>(i) * dim, 0, dim, dim) =
        Eigen::kroneckerProduct(gens_from[i].mat.transpose(), idt) -
        Eigen::kroneckerProduct(idf, gens_to[i].mat);
  }
  Eigen::JacobiSVD<Mat> svd(K);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  if (smax <= 0.0) return static_cast<int>(dim);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) >= tol * smax) ++rank;
  return static_cast<int>(dim - rank);
}

// Pair factors i and j of v with the delta form <e_a, e_b> = delta_{ab} and
// return the vector on the remaining factors in their original order.
inline Vec ev_contract(const Vec& v, int i, int j, int N, int k) {
  if (i == j) fail(errc::bad_positions, "contraction factors must differ");
  detail::check_positions({i, j}, 2, k);
  if (v.size() != power_of(N, k))
    fail(errc::dimension_mismatch, "vector length is not N^arity");
  const long out_side = power_of(N, k - 2);
  Vec out = Vec::Zero(out_side);
  std::vector<int> digits(k), rest(k - 2);
  for (long idx = 0; idx < v.size(); ++idx) {
    detail::decode(idx, N, k, digits.data());
    if (digits[i - 1] != digits[j - 1]) continue;
    int w = 0;
    for (int f = 0; f < k; ++f)
      if (f != i - 1 && f != j - 1) rest[w++] = digits[f];
    out(detail::encode(rest.data(), N, k - 2)) += v(idx);
  }
  return out;
}

// Spectral projectors of an N-torsion operator C (C^N = identity):
// P_i = (1/N) sum_k q^{-2ik} C^k projects on the q^{2i} eigenspace.
inline std::vector<TensorOperator> torsion_eigenprojectors(
    const RootContext& ctx, const TensorOperator& C) {
  const long side = C.side();
  const Mat id = Mat::Identity(side, side);
  std::vector<Mat> powers(ctx.N);
  powers[0] = id;
  for (int k = 1; k < ctx.N; ++k) powers[k] = powers[k - 1] * C.mat;
  const Mat cn = powers[ctx.N - 1] * C.mat;
  const double err = (cn - id).norm();
  if (err > ctx.tol * std::sqrt(static_cast<double>(side)))
    fail(errc::not_torsion, "operator is not N-torsion within tolerance");
  std::vector<TensorOperator> projs;
  projs.reserve(ctx.N);
  for (int i = 0; i < ctx.N; ++i) {
    Mat p = Mat::Zero(side, side);
    for (int k = 0; k < ctx.N; ++k)
      p += q_power(ctx, -2LL * i * k) * powers[k];
    projs.push_back(TensorOperator{C.N, C.arity, p / static_cast<double>(ctx.N)});
  }
  return projs;
}

}  // namespace qtorus
