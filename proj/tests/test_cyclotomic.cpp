#include <catch2/catch_amalgamated.hpp>

#include <qtorus/cyclotomic.hpp>

#include <random>

#include "oracle_data.hpp"

using namespace qtorus;

namespace {
double cdiff(cd a, cd b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }
}  // namespace

TEST_CASE("context construction validates input", "[cyclotomic]") {
  for (int n : {3, 5, 7, 9, 15}) {
    RootContext ctx = make_context(n);
    REQUIRE(ctx.N == n);
    REQUIRE(std::abs(std::pow(ctx.q, n) + 1.0) < 1e-12);
  }
  REQUIRE_THROWS_AS(make_context(2), qt_error);
  REQUIRE_THROWS_AS(make_context(4), qt_error);
  REQUIRE_THROWS_AS(make_context(1), qt_error);
  REQUIRE_THROWS_AS(make_context(-3), qt_error);
  REQUIRE_THROWS_AS(make_context(3, 0.0), qt_error);
}

TEST_CASE("q_power reduces the exponent mod 2N", "[cyclotomic]") {
  for (int n : {3, 5, 7}) {
    RootContext ctx = make_context(n);
    REQUIRE(std::abs(q_power(ctx, 0) - 1.0) < 1e-15);
    REQUIRE(std::abs(q_power(ctx, n) + 1.0) < 1e-15);
    REQUIRE(std::abs(q_power(ctx, 2 * n) - 1.0) < 1e-15);
    for (long long k : {-7LL, -1LL, 1LL, 3LL, 11LL, 123456789LL}) {
      // exact bit equality under shifts by 2N: both sides reduce first
      REQUIRE(q_power(ctx, k) == q_power(ctx, k + 2 * n));
      REQUIRE(q_power(ctx, k) == q_power(ctx, k - 6LL * n));
      REQUIRE(std::abs(q_power(ctx, k) * q_power(ctx, -k) - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("nth_root matches the reference table", "[cyclotomic][oracle]") {
  for (const auto& s : oracle::root_samples) {
    RootContext ctx = make_context(s.N);
    INFO("N=" << s.N << " z=" << s.z);
    REQUIRE(cdiff(nth_root(ctx, s.z), s.root) < 1e-13);
  }
}

TEST_CASE("nth_root branch laws", "[cyclotomic]") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n : {3, 5, 7}) {
    RootContext ctx = make_context(n);
    REQUIRE(std::abs(nth_root(ctx, cd(1, 0)) - 1.0) < 1e-15);
    for (int t = 0; t < 400; ++t) {
      cd z(u(rng), u(rng));
      if (std::abs(z) < 1e-3) continue;
      if (t % 5 == 0) z = cd(0.0, z.imag());       // pure imaginary branch cut
      if (t % 7 == 0) z = cd(z.real(), 0.0);       // real axis, both signs
      if (std::abs(z) < 1e-3) continue;
      const cd r = nth_root(ctx, z);
      INFO("N=" << n << " z=" << z);
      REQUIRE(std::abs(std::pow(r, n) - z) < 1e-10 * std::max(1.0, std::abs(z)));
      REQUIRE(std::abs(nth_root(ctx, 1.0 / z) - 1.0 / r) < 1e-10);
      REQUIRE(std::abs(nth_root(ctx, -z) + r) < 1e-10);
    }
  }
}

TEST_CASE("nth_root on the positive imaginary axis", "[cyclotomic]") {
  // i t (t > 0) sits on the branch boundary; the value is eps_N i t^{1/N}
  // with eps_N = +1 when N = 1 mod 4 and -1 when N = 3 mod 4.
  for (int n : {3, 5, 7, 9, 13}) {
    RootContext ctx = make_context(n);
    const double eps = (n % 4 == 1) ? 1.0 : -1.0;
    for (double t : {0.04, 1.0, 2.0, 17.5}) {
      const cd want = eps * cd(0, 1) * std::pow(t, 1.0 / n);
      REQUIRE(std::abs(nth_root(ctx, cd(0, t)) - want) < 1e-13);
      REQUIRE(std::abs(nth_root(ctx, cd(0, -t)) + want) < 1e-13);
    }
  }
}

TEST_CASE("nth_root rejects zero", "[cyclotomic]") {
  RootContext ctx = make_context(3);
  try {
    nth_root(ctx, cd(0, 0));
    FAIL("expected qt_error");
  } catch (const qt_error& e) {
    REQUIRE(e.code() == errc::zero_input);
  }
}

TEST_CASE("cocycle exponent matches the reference table", "[cyclotomic][oracle]") {
  for (const auto& s : oracle::cocycle_samples) {
    RootContext ctx = make_context(s.N);
    INFO("N=" << s.N << " z=" << s.z << " w=" << s.w);
    REQUIRE(cocycle_m(ctx, s.z, s.w) == s.m);
  }
}

TEST_CASE("cocycle exponent defining property and identities", "[cyclotomic]") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n : {3, 5, 7}) {
    RootContext ctx = make_context(n);
    for (int t = 0; t < 250; ++t) {
      cd z(u(rng), u(rng)), w(u(rng), u(rng)), v(u(rng), u(rng));
      if (std::abs(z) < 1e-2 || std::abs(w) < 1e-2 || std::abs(v) < 1e-2)
        continue;
      const int m = cocycle_m(ctx, z, w);
      REQUIRE(m >= 0);
      REQUIRE(m < n);
      // defining property
      REQUIRE(std::abs(nth_root(ctx, z * w) -
                       q_power(ctx, 2 * m) * nth_root(ctx, z) * nth_root(ctx, w)) <
              1e-9);
      // symmetry
      REQUIRE(cocycle_m(ctx, w, z) == m);
      // 2-cocycle identity: m(z,w) + m(zw,v) = m(z,wv) + m(w,v) mod N
      const int lhs = (m + cocycle_m(ctx, z * w, v)) % n;
      const int rhs = (cocycle_m(ctx, z, w * v) + cocycle_m(ctx, w, v)) % n;
      REQUIRE(lhs == rhs);
      // inverse pairs: m(z, 1/z) cancels against the root laws
      const int mi = cocycle_m(ctx, z, 1.0 / z);
      REQUIRE(std::abs(q_power(ctx, 2 * mi) *
                           nth_root(ctx, z) * nth_root(ctx, 1.0 / z) -
                       1.0) < 1e-9);
    }
  }
}

TEST_CASE("cocycle sign identity for dual weights", "[cyclotomic]") {
  // m_{-y/x, x} = -m_{y, 1/x} mod N: ties the dual weight's exponent to the
  // original one.
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n : {3, 5, 7}) {
    RootContext ctx = make_context(n);
    for (int t = 0; t < 120; ++t) {
      cd x(u(rng), u(rng)), y(u(rng), u(rng));
      if (std::abs(x) < 1e-2 || std::abs(y) < 1e-2) continue;
      const int lhs = cocycle_m(ctx, -y / x, x);
      const int rhs = ((-cocycle_m(ctx, y, 1.0 / x)) % n + n) % n;
      REQUIRE(lhs == rhs);
    }
  }
}

TEST_CASE("cocycle match failure is reported", "[cyclotomic]") {
  RootContext ctx = make_context(5);
  // An overflowing product leaves every candidate comparison false, which is
  // exactly the no-match condition.
  try {
    cocycle_m(ctx, cd(1e200, 0), cd(1e200, 0));
    FAIL("expected qt_error");
  } catch (const qt_error& e) {
    REQUIRE(e.code() == errc::no_match);
  }
  // NaN is rejected up front instead of looping in the branch classifier.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    nth_root(ctx, cd(1.0, nan));
    FAIL("expected qt_error");
  } catch (const qt_error& e) {
    REQUIRE(e.code() == errc::constraint_violation);
  }
}
