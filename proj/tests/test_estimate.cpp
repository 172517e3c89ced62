#include <doctest.h>

#include "cubicff/estimate.hpp"
#include "cubicff/irreducible.hpp"
#include "cubicff/zeta.hpp"
#include "support.hpp"

using namespace cubicff;

namespace {

// z_1(P) + z_2(P) from the splitting type alone
int z_sum_from_split(const CurveModel& c, const Poly& P) {
  switch (classify_prime(c, P).tag) {
    case SplitTag::Ramified: return 0;
    case SplitTag::Partial: return 0;
    case SplitTag::Split: return 2;
    case SplitTag::Inert: return -1;
  }
  return 0;
}

}  // namespace

TEST_SUITE("euler_estimator") {

TEST_CASE("S_nu(1) scan against per-prime classification") {
  Rng rng(53);
  for (int t = 0; t < 8; ++t) {
    const u64 q = t % 2 ? 7 : 13;
    auto c = testing::random_curve(q, 3, Signature::Ramified, rng, false);
    REQUIRE(c);
    for (int nu = 1; nu <= 3; ++nu) {
      std::int64_t brute = 0;
      for (const auto& P : iter_irreducibles(q, nu)) brute += z_sum_from_split(*c, P);
      CHECK(s_scan_full(*c, nu) == brute);
      CHECK(s_scan_full_serial(*c, nu) == brute);
      // blocks add up
      const u64 n = monic_count(q, nu);
      CHECK(s_scan(*c, nu, 0, n / 3) + s_scan(*c, nu, n / 3, n) == brute);
    }
    CHECK(s_scan(*c, 2, 5, 5) == 0);
  }
}

TEST_CASE("S_nu(n) congruence identities") {
  Rng rng(59);
  for (u64 q : {7, 11, 13, 17}) {
    auto c = testing::random_curve(q, 3, Signature::Ramified, rng, false);
    REQUIRE(c);
    auto tab = build_snu_table(*c, 4);
    for (const auto& [nu, row] : tab.rows) {
      // brute force over all monic irreducibles of degree nu
      for (long n = 1; n <= 6; ++n) {
        BigInt brute = 0;
        for (const auto& P : iter_irreducibles(q, nu)) brute += z_power_sum(*c, P, n);
        CHECK(s_value(tab, nu, n) == brute);
        CHECK(s_value(tab, nu, n) == s_value(tab, nu, n + 6));
      }
      if (row.q_is_one) {
        CHECK(s_value(tab, nu, 9) == 2 * (row.I - row.Fnu));
      } else {
        for (long n : {1, 3, 5}) CHECK(s_value(tab, nu, n) == 0);
      }
    }
  }
}

TEST_CASE("no linear factor of F: S_1(3) = 2 q") {
  // F = x^2 + 1 irreducible over F_7
  auto c = new_curve(7, Poly(7, {1, 0, 1}), Poly(7, {1}));
  auto tab = build_snu_table(c, 1);
  CHECK(tab.rows.at(1).Fnu == 0);
  CHECK(s_value(tab, 1, 3) == 14);
}

TEST_CASE("soundness on oracle curves, all variants") {
  Rng rng(61);
  int tested = 0;
  for (int t = 0; t < 24; ++t) {
    const u64 q = t % 3 == 0 ? 7 : t % 3 == 1 ? 11 : 13;
    const Signature s = q == 11 ? Signature::UnitRankOne : Signature::Ramified;
    auto c = testing::random_curve(q, s == Signature::UnitRankOne ? 4 : 2 + t % 2, s, rng);
    REQUIRE(c);
    const BigInt h = l_polynomial(*c).h();
    BigInt U2;
    for (Variant v : {Variant::E1U1, Variant::E2U2, Variant::E2U3}) {
      auto e = estimate(*c, v);
      CHECK(e.U >= 0);
      CHECK(abs(h - e.E) <= e.U);
      const double r = estimate_ratio(e, h);
      CHECK(r >= 0);
      CHECK(r <= 1);
      if (v == Variant::E2U2) U2 = e.U;
      if (v == Variant::E2U3) CHECK(e.U <= U2);
    }
    ++tested;
  }
  CHECK(tested == 24);
}

TEST_CASE("deterministic E and U") {
  Rng rng(67);
  auto c = testing::random_curve(13, 3, Signature::Ramified, rng);
  REQUIRE(c);
  auto a = estimate(*c, Variant::E2U3), b = estimate(*c, Variant::E2U3);
  CHECK(a.E == b.E);
  CHECK(a.U == b.U);
  CHECK(a.lambda == b.lambda);
}

TEST_CASE("fixture ratios") {
  auto c8 = new_curve("103", "37,30,22,9,59,1", "80,54,30,1");
  auto e8 = estimate(c8, Variant::E2U3);
  CHECK(e8.interval_ok);
  CHECK(estimate_ratio(e8, BigInt("117601058790012")) == doctest::Approx(0.0235252).epsilon(1e-6 / 0.0235252));

  auto c17 = new_curve("107", "16,60,84,9,38,43,1", "104,106,53,1");
  auto e17 = estimate(c17, Variant::E2U3);
  CHECK(e17.interval_ok);
  CHECK(estimate_ratio(e17, BigInt("13227046636185") * 12) ==
        doctest::Approx(0.0015069).epsilon(1e-6 / 0.0015069));
}

}
