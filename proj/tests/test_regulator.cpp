#include <doctest.h>

#include "cubicff/factor.hpp"
#include "cubicff/kangaroo.hpp"
#include "cubicff/regulator.hpp"
#include "cubicff/zeta.hpp"
#include "support.hpp"

using namespace cubicff;

TEST_SUITE("regulator") {

TEST_CASE("factoring") {
  auto one = pollard_rho_factor(1);
  CHECK(one.factors.empty());
  CHECK(one.product() == 1);

  auto p = pollard_rho_factor(BigInt("1000000007"));
  REQUIRE(p.factors.size() == 1);
  CHECK(p.factors[0].first == BigInt("1000000007"));
  CHECK(p.factors[0].second == 1);

  for (const char* s : {"117601058790012", "158724559634220", "13227046636185",
                        "1000000016000000063",  // (10^9+7)(10^9+9)
                        "123456789012345678901234567890"}) {
    const BigInt n(s);
    auto f = pollard_rho_factor(n);
    CHECK(f.product() == n);
    for (std::size_t i = 0; i < f.factors.size(); ++i) {
      CHECK(is_probable_prime(f.factors[i].first));
      if (i) CHECK(f.factors[i - 1].first < f.factors[i].first);
    }
  }
  auto c8 = pollard_rho_factor(BigInt("117601058790012"));
  CHECK(c8.factors[0].first == 2);
  CHECK(c8.factors[0].second == 2);
  CHECK(c8.factors[1].first == 3);
}

TEST_CASE("extraction on oracle fields") {
  Rng rng(113);
  int n = 0;
  for (u64 q : {5, 11, 17, 23})
    for (int t = 0; t < 3; ++t) {
      auto c = testing::random_curve(q, 2 + t % 2, Signature::UnitRankOne, rng, false);
      REQUIRE(c);
      Infrastructure inf(*c);
      const BigInt h = l_polynomial(*c).h();
      auto r = extract_regulator(inf, h, 1, h);
      CHECK(r.Rx * *r.hx == h);
      CHECK(below_is_identity(inf, 2 * r.Rx));
      for (const auto& [p, e] : pollard_rho_factor(r.Rx).factors) CHECK_FALSE(below_is_identity(inf, 2 * r.Rx / p));
      // starting from R_x itself changes nothing
      auto again = extract_regulator(inf, r.Rx);
      CHECK(again.Rx == r.Rx);
      // h from R_x alone
      auto est = estimate(*c, Variant::E2U3);
      auto hn = class_number_from_regulator(inf, est, r.Rx, 3);
      if (hn.h) CHECK(*hn.h == h);
      ++n;
    }
  CHECK(n == 12);
}

TEST_CASE("a lower bound skips small primes") {
  auto c = new_curve("29", "9,12,21,1", "13,7,1,1");
  Infrastructure inf(c);
  const BigInt h = l_polynomial(c).h();
  auto r = extract_regulator(inf, h, 1000);
  CHECK(r.Rx == 40658);
}

TEST_CASE("not a multiple") {
  auto c = new_curve("29", "9,12,21,1", "13,7,1,1");
  Infrastructure inf(c);
  CHECK_THROWS(extract_regulator(inf, 40657));
}

}
