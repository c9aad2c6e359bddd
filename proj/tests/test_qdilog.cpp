#include <catch2/catch_amalgamated.hpp>

#include <qtorus/qdilog.hpp>
#include <qtorus/reps.hpp>

#include <random>

#include "oracle_data.hpp"

using namespace qtorus;

namespace {

struct WTable {
  int N;
  cd a, c;
  const cd* vals;
};

const WTable kTables[] = {
    {oracle::w3_N, oracle::w3_a, oracle::w3_c, oracle::w3_vals},
    {oracle::w5_N, oracle::w5_a, oracle::w5_c, oracle::w5_vals},
    {oracle::w7_N, oracle::w7_a, oracle::w7_c, oracle::w7_vals},
};

}  // namespace

TEST_CASE("parameter validation enforces the Fermat relation", "[qdilog]") {
  RootContext ctx = make_context(3);
  REQUIRE_NOTHROW(make_dilog_params(ctx, oracle::w3_a, oracle::w3_c));
  try {
    make_dilog_params(ctx, cd(0.8, 0.25), cd(1.2, 0.1));
    FAIL("expected qt_error");
  } catch (const qt_error& e) {
    REQUIRE(e.code() == errc::constraint_violation);
  }
  // with a = 0 the pole condition degenerates to c != 0
  REQUIRE_NOTHROW(make_dilog_params(ctx, cd(0, 0), cd(1, 0)));
  // for large |a| the Fermat gate is scaled by |a^3| and tolerates an O(1)
  // defect, so a point sitting exactly on a pole gets past it; the pole
  // guard must still reject it
  const cd a_big(1e3, 0);
  const cd c_pole = a_big * q_power(ctx, 2);
  try {
    make_dilog_params(ctx, a_big, c_pole);
    FAIL("expected qt_error");
  } catch (const qt_error& e) {
    REQUIRE(e.code() == errc::constraint_violation);
  }
}

TEST_CASE("cyclic weight function matches the reference tables",
          "[qdilog][oracle]") {
  for (const auto& tbl : kTables) {
    RootContext ctx = make_context(tbl.N);
    const DilogParams p = make_dilog_params(ctx, tbl.a, tbl.c);
    for (int n = 0; n < tbl.N; ++n) {
      INFO("N=" << tbl.N << " n=" << n);
      REQUIRE(std::abs(w_cyclic(ctx, p, n) - tbl.vals[n]) <
              1e-12 * std::max(1.0, std::abs(tbl.vals[n])));
    }
    // the argument is read mod N
    REQUIRE(w_cyclic(ctx, p, 1 + tbl.N) == w_cyclic(ctx, p, 1));
    REQUIRE(w_cyclic(ctx, p, -1) == w_cyclic(ctx, p, tbl.N - 1));
  }
}

TEST_CASE("functional calculus on the clock matrix is diagonal", "[qdilog]") {
  for (const auto& tbl : kTables) {
    RootContext ctx = make_context(tbl.N);
    const DilogParams p = make_dilog_params(ctx, tbl.a, tbl.c);
    const TensorOperator f = phi(ctx, p, gen_A(ctx));
    for (int i = 0; i < tbl.N; ++i)
      REQUIRE(std::abs(f.mat(i, i) - tbl.vals[i]) < 1e-11);
    REQUIRE((f.mat - f.mat.diagonal().asDiagonal().toDenseMatrix()).norm() <
            1e-11);
    // spectral inverse without matrix inversion
    const TensorOperator fi = phi_inv(ctx, p, gen_A(ctx));
    REQUIRE(rel_diff(f * fi, identity_op(tbl.N, 1)) < 1e-12);
  }
}

TEST_CASE("difference equation of the cyclic dilogarithm", "[qdilog]") {
  std::mt19937_64 rng(23);
  for (const auto& tbl : kTables) {
    RootContext ctx = make_context(tbl.N);
    const DilogParams p = make_dilog_params(ctx, tbl.a, tbl.c);
    // on the clock matrix and on a conjugated torsion operator
    std::normal_distribution<double> g(0.0, 1.0);
    Mat v(tbl.N, tbl.N);
    for (int r = 0; r < tbl.N; ++r)
      for (int c2 = 0; c2 < tbl.N; ++c2) v(r, c2) = cd(g(rng), g(rng));
    const Mat vm = v;
    const Mat vinv = vm.partialPivLu().solve(Mat::Identity(tbl.N, tbl.N));
    for (const TensorOperator& c :
         {gen_A(ctx), make_op(tbl.N, 1, vm * gen_A(ctx).mat * vinv)}) {
      const TensorOperator lhs =
          phi(ctx, p, op_scale(q_power(ctx, -2), c)) * phi_inv(ctx, p, c);
      const Mat rhs = p.c * Mat::Identity(tbl.N, tbl.N) - p.a * c.mat;
      REQUIRE(rel_diff(lhs.mat, rhs) < 1e-10);
    }
  }
}

TEST_CASE("functional calculus is equivariant under conjugation", "[qdilog]") {
  RootContext ctx = make_context(5);
  const DilogParams p = make_dilog_params(ctx, oracle::w5_a, oracle::w5_c);
  std::mt19937_64 rng(29);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat v(5, 5);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) v(r, c) = cd(g(rng), g(rng));
  const Mat vinv = v.partialPivLu().solve(Mat::Identity(5, 5));
  const TensorOperator b = gen_B(ctx);
  const TensorOperator conj = make_op(5, 1, v * b.mat * vinv);
  const Mat lhs = v * phi(ctx, p, b).mat * vinv;
  REQUIRE(rel_diff(lhs, phi(ctx, p, conj).mat) < 1e-9);
}

TEST_CASE("decomposition parameters satisfy the Fermat relation", "[qdilog]") {
  std::mt19937_64 rng(37);
  for (int n : {3, 5, 7}) {
    RootContext ctx = make_context(n);
    for (int t = 0; t < 40; ++t) {
      const auto ws = sample_weights_until(
          rng, 2, [](const std::vector<Weight>& v) {
            return is_regular_pair(v[0], v[1]);
          });
      const DilogParams p = decomp_params(ctx, ws[0], ws[1]);
      REQUIRE(std::abs(std::pow(p.c, n) - std::pow(p.a, n) - 1.0) < 1e-10);
      // a^N = -y x' / (y x' + y'), c^N = y' / (y x' + y')
      const cd den = ws[0].y * ws[1].x + ws[1].y;
      REQUIRE(std::abs(std::pow(p.a, n) + ws[0].y * ws[1].x / den) < 1e-10);
      REQUIRE(std::abs(std::pow(p.c, n) - ws[1].y / den) < 1e-10);
    }
  }
  RootContext ctx = make_context(3);
  const Weight w(cd(2, 0), cd(1, 0));
  REQUIRE_THROWS_AS(decomp_params(ctx, w, weight_dual(w)), qt_error);
}

TEST_CASE("pentagon parameters satisfy the five constraints", "[qdilog]") {
  std::mt19937_64 rng(41);
  for (int n : {3, 5, 7}) {
    RootContext ctx = make_context(n);
    for (int t = 0; t < 25; ++t) {
      const auto ws = sample_regular_seq(rng, 3);
      const PentagonParams pp = pentagon_params(ctx, ws[0], ws[1], ws[2]);
      REQUIRE(pp.m >= 0);
      REQUIRE(pp.m < n);
      REQUIRE(std::abs(pp.p1.c - pp.p4.c * pp.p5.c) < 1e-9);
      REQUIRE(std::abs(pp.p1.a * pp.p2.c - pp.p4.c * pp.p5.a) < 1e-9);
      REQUIRE(std::abs(pp.p1.a * pp.p2.a +
                       q_power(ctx, 2 * pp.m) * pp.p4.a) < 1e-9);
      REQUIRE(std::abs(pp.p2.c - pp.p3.c * pp.p4.c) < 1e-9);
      REQUIRE(std::abs(pp.p2.a * pp.p5.c - pp.p3.a) < 1e-9);
    }
  }
  RootContext ctx = make_context(3);
  const Weight w(cd(2, 0), cd(1, 0));
  REQUIRE_THROWS_AS(pentagon_params(ctx, w, weight_dual(w), w), qt_error);
}

TEST_CASE("five-factor identity holds on the Weyl pair", "[qdilog]") {
  std::mt19937_64 rng(43);
  for (int n : {3, 5}) {
    RootContext ctx = make_context(n);
    for (int t = 0; t < 10; ++t) {
      const auto ws = sample_regular_seq(rng, 3);
      const PentagonParams pp = pentagon_params(ctx, ws[0], ws[1], ws[2]);
      const RelationReport rep =
          pentagon_check(ctx, pp, gen_A(ctx), gen_B(ctx));
      INFO("N=" << n << " trial " << t << " residual " << rep.residual);
      REQUIRE(rep.passed);
      REQUIRE(rep.scalar.has_value());
      REQUIRE(std::abs(*rep.scalar) > 1e-6);
    }
  }
}

TEST_CASE("five-factor identity gates its preconditions", "[qdilog]") {
  RootContext ctx = make_context(3);
  std::mt19937_64 rng(47);
  const auto ws = sample_regular_seq(rng, 3);
  const PentagonParams pp = pentagon_params(ctx, ws[0], ws[1], ws[2]);
  // D = identity commutes with the clock as q^0, not q^2
  try {
    pentagon_check(ctx, pp, gen_A(ctx), identity_op(3, 1));
    FAIL("expected qt_error");
  } catch (const qt_error& e) {
    REQUIRE(e.code() == errc::bad_commutation);
  }
  // a non-torsion first argument fails the spectral gate
  REQUIRE_THROWS_AS(
      pentagon_check(ctx, pp, op_scale(cd(2, 0), gen_A(ctx)), gen_B(ctx)),
      qt_error);
}
