#include <doctest.h>

#include <cmath>

#include "cubicff/zeta.hpp"
#include "support.hpp"

using namespace cubicff;

TEST_SUITE("zeta_oracle") {

TEST_CASE("genus one: point count and Jacobian order") {
  for (u64 q : {7, 13, 19, 31}) {
    Rng rng(q);
    for (int t = 0; t < 6; ++t) {
      auto c = testing::random_curve(q, 1, Signature::Ramified, rng, false);
      REQUIRE(c);
      // one point at infinity (totally ramified)
      const std::int64_t n1 = testing::affine_points(*c) + 1;
      CHECK(degree_one_place_count(*c, 1) == n1);
      auto L = l_polynomial(*c);
      CHECK(L.h() == n1);
      const double phi = std::acos(L.a[1].convert_to<double>() / (-2 * std::sqrt(double(q))));
      auto ang = frobenius_angles(L);
      REQUIRE(ang.size() == 1);
      CHECK(ang[0] == doctest::Approx(phi).epsilon(1e-6));
      CHECK(g_lambda(ang, 1) == doctest::Approx(2 * std::cos(2 * phi)).epsilon(1e-9));
    }
  }
  auto c = new_curve(7, Poly(7, {1, 0, 1}), Poly(7, {1}));
  CHECK(degree_one_place_count(c, 1) == testing::affine_points(c) + 1);
}

TEST_CASE("q = 2 mod 3 with 3 | deg F has q + 1 degree-one places") {
  // cubing is a bijection on F_q, so each x carries exactly one degree-one place,
  // plus the degree-one place at infinity
  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    auto c = testing::random_curve(t % 2 ? 11 : 17, 2 + t % 2, Signature::UnitRankOne, rng, false);
    REQUIRE(c);
    CHECK(degree_one_place_count(*c, 1) == std::int64_t(c->q + 1));
  }
}

TEST_CASE("parallel and serial place counts agree") {
  Rng rng(43);
  for (u64 q : {7, 11, 13}) {
    auto c = testing::random_curve(q, 3, q == 11 ? Signature::UnitRankOne : Signature::Ramified, rng, false);
    REQUIRE(c);
    CHECK(place_counts(*c, 3) == place_counts_serial(*c, 3));
  }
}

TEST_CASE("L polynomial properties and Newton round trip") {
  Rng rng(47);
  for (int t = 0; t < 24; ++t) {
    const u64 q = t % 3 == 0 ? 7 : t % 3 == 1 ? 11 : 13;
    const Signature s = q == 11 ? Signature::UnitRankOne : Signature::Ramified;
    auto c = testing::random_curve(q, 2 + t % 2, s, rng, false);
    REQUIRE(c);
    auto L = l_polynomial(*c);
    const int g = c->genus;
    CHECK(L.a[0] == 1);
    CHECK(L.a[2 * g] == big_pow(q, g));
    // functional equation
    for (int i = 0; i <= g; ++i) CHECK(L.a[2 * g - i] == L.a[i] * big_pow(q, g - i));
    // Hasse-Weil
    const double h = L.h().convert_to<double>(), sq = std::sqrt(double(q));
    CHECK(h >= std::pow(sq - 1, 2 * g) - 1e-6);
    CHECK(h <= std::pow(sq + 1, 2 * g) + 1e-6);
    // Weil circle is enforced by the root finder
    CHECK(frobenius_angles(L).size() == std::size_t(g));
    auto N = place_counts(*c, g + 1);
    auto back = counts_from_l(L, g + 1);
    for (int k = 1; k <= g + 1; ++k) CHECK(back[k - 1] == N[k - 1]);
    auto L2 = l_polynomial_from_counts(q, g, std::vector<std::int64_t>(N.begin(), N.begin() + g));
    CHECK(L2.a == L.a);
  }
}

TEST_CASE("G_lambda corner cases") {
  std::vector<double> half(3, M_PI / 2), zero(3, 0.0);
  CHECK(g_lambda(half, 1) == doctest::Approx(-6));
  CHECK(g_lambda(zero, 1) == doctest::Approx(6));
}

}
