#include <catch2/catch_amalgamated.hpp>

#include <qtorus/weights.hpp>

#include <random>

using namespace qtorus;

TEST_CASE("weight construction gates singular components", "[weights]") {
  REQUIRE_NOTHROW(Weight(cd(2, 0), cd(1, 0)));
  try {
    Weight w(cd(0, 0), cd(1, 0));
    FAIL("expected qt_error");
  } catch (const qt_error& e) {
    REQUIRE(e.code() == errc::singular_weight);
  }
  REQUIRE_THROWS_AS(Weight(cd(1, 0), cd(1e-9, 0)), qt_error);
  // the unchecked path admits the identity (1, 0)
  const Weight id = Weight::unchecked(cd(1, 0), cd(0, 0));
  REQUIRE(id.is_singular());
}

TEST_CASE("product and dual follow the semidirect rule", "[weights]") {
  const Weight a(cd(2, 0), cd(1, 0));
  const Weight b(cd(3, 0), cd(1, 0));
  const Weight ab = weight_mul(a, b);
  REQUIRE(std::abs(ab.x - cd(6, 0)) < 1e-15);
  REQUIRE(std::abs(ab.y - cd(4, 0)) < 1e-15);

  const Weight ad = weight_dual(a);
  REQUIRE(std::abs(ad.x - cd(0.5, 0)) < 1e-15);
  REQUIRE(std::abs(ad.y - cd(-0.5, 0)) < 1e-15);
}

TEST_CASE("weights form a group with dual as inverse", "[weights]") {
  std::mt19937_64 rng(5);
  const Weight id = Weight::unchecked(cd(1, 0), cd(0, 0));
  for (int t = 0; t < 200; ++t) {
    const Weight a = sample_weight(rng);
    const Weight b = sample_weight(rng);
    const Weight c = sample_weight(rng);
    REQUIRE(weight_close(weight_mul(weight_mul(a, b), c),
                         weight_mul(a, weight_mul(b, c)), 1e-12));
    REQUIRE(weight_close(weight_mul(a, id), a, 1e-12));
    REQUIRE(weight_close(weight_mul(id, a), a, 1e-12));
    REQUIRE(weight_close(weight_mul(a, weight_dual(a)), id, 1e-12));
    REQUIRE(weight_close(weight_mul(weight_dual(a), a), id, 1e-12));
    // (ab)* = b* a*
    REQUIRE(weight_close(weight_dual(weight_mul(a, b)),
                         weight_mul(weight_dual(b), weight_dual(a)), 1e-12));
  }
}

TEST_CASE("self-dual weights are exactly the x = -1 line", "[weights]") {
  REQUIRE(is_self_dual(Weight(cd(-1, 0), cd(2.3, -0.4)), 1e-9));
  REQUIRE(is_self_dual(Weight(cd(-1, 0), cd(0.001, 5)), 1e-9));
  REQUIRE_FALSE(is_self_dual(Weight(cd(1, 0), cd(2, 0)), 1e-9));
  REQUIRE_FALSE(is_self_dual(Weight(cd(-1.01, 0), cd(2, 0)), 1e-9));
  REQUIRE_FALSE(is_self_dual(Weight(cd(0, 1), cd(2, 0)), 1e-9));
  // the literal identity pair is singular and outside the checked domain;
  // on valid weights x = 1 forces y = -y, so only x = -1 survives
  REQUIRE(Weight::unchecked(cd(1, 0), cd(0, 0)).is_singular());
}

TEST_CASE("weight_close scales the tolerance per component", "[weights]") {
  const Weight a(cd(1000, 0), cd(1, 0));
  const Weight b(cd(1000 + 5e-7 * 1001, 0), cd(1, 0));
  REQUIRE(weight_close(a, b, 1e-6));
  REQUIRE_FALSE(weight_close(a, b, 1e-10));
}

TEST_CASE("regularity of pairs and sequences", "[weights]") {
  const Weight a(cd(2, 0), cd(1, 0));
  const Weight b(cd(3, 0), cd(1, 0));
  REQUIRE(is_regular_pair(a, b));
  // a paired with its dual multiplies to the singular identity
  REQUIRE_FALSE(is_regular_pair(a, weight_dual(a)));
  REQUIRE(is_regular_seq({a, b}));
  REQUIRE(is_regular_seq({a, b, a}));
  // consecutive products must all stay nonsingular, including inner runs
  const Weight c = weight_dual(weight_mul(a, b));
  REQUIRE_FALSE(is_regular_seq({a, b, c}));
  REQUIRE_FALSE(is_regular_seq({b, weight_dual(b), a}));
}

TEST_CASE("sampling is deterministic and respects the modulus band", "[weights]") {
  std::mt19937_64 r1(42), r2(42);
  for (int t = 0; t < 100; ++t) {
    const Weight w1 = sample_weight(r1);
    const Weight w2 = sample_weight(r2);
    REQUIRE(w1.x == w2.x);
    REQUIRE(w1.y == w2.y);
    for (cd v : {w1.x, w1.y}) {
      REQUIRE(std::abs(v) >= 0.5 - 1e-12);
      REQUIRE(std::abs(v) <= 2.0 + 1e-12);
    }
  }
}

TEST_CASE("constrained sampling succeeds and fails honestly", "[weights]") {
  std::mt19937_64 rng(7);
  const auto seq = sample_regular_seq(rng, 4);
  REQUIRE(seq.size() == 4);
  REQUIRE(is_regular_seq(seq));

  std::mt19937_64 rng2(7);
  try {
    sample_weights_until(rng2, 2,
                         [](const std::vector<Weight>&) { return false; }, 50);
    FAIL("expected qt_error");
  } catch (const qt_error& e) {
    REQUIRE(e.code() == errc::regularity_violation);
  }
}
