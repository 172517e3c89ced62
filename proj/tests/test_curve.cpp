#include <doctest.h>

#include "cubicff/curve.hpp"
#include "cubicff/error.hpp"
#include "cubicff/irreducible.hpp"
#include "support.hpp"

using namespace cubicff;

namespace {
const char* kC8G = "37,30,22,9,59,1";
const char* kC8H = "80,54,30,1";
const char* kC17G = "16,60,84,9,38,43,1";
const char* kC17H = "104,106,53,1";
}  // namespace

TEST_SUITE("curve_model") {

TEST_CASE("classification of the fixtures") {
  auto c8 = new_curve("103", kC8G, kC8H);
  CHECK(c8.genus == 7);
  CHECK(c8.signature == Signature::Ramified);
  CHECK(c8.lambda == 2);
  auto f8 = family_filter(c8);
  CHECK(f8.genus_ok);
  CHECK(f8.deg_order_ok);
  CHECK(f8.not_superelliptic_equivalent);

  auto c17 = new_curve("107", kC17G, kC17H);
  CHECK(c17.genus == 7);
  CHECK(c17.signature == Signature::UnitRankOne);
  CHECK(c17.deg_F() == 12);
  CHECK(c17.lambda == 2);
  CHECK(to_string(c17.signature) == "(1,1;1,2)");

  auto e = new_curve(7, Poly(7, {1, 0, 1}), Poly(7, {1}));
  CHECK(e.genus == 1);
  CHECK(e.signature == Signature::Ramified);
}

TEST_CASE("invalid curves") {
  CHECK_THROWS_AS(new_curve(7, Poly(7, {6, 0, 1}), Poly(7, {6, 1})), InvalidInput);  // not coprime
  CHECK_THROWS_AS(new_curve(7, Poly(7, {0, 0, 1}), Poly(7, {1})), InvalidInput);     // not squarefree
  CHECK_THROWS_AS(new_curve(9, Poly(9, {1, 0, 1}), Poly(9, {1})), InvalidInput);     // not prime
  CHECK_THROWS_AS(new_curve(7, Poly(7, {1, 1}), Poly(7, {1})), InvalidInput);        // genus 0
}

TEST_CASE("family filter exclusions") {
  // 3 | deg F and x | G
  auto c = new_curve(11, Poly(11, {0, 2, 1}), Poly(11, {1, 0, 1}));
  CHECK(c.genus == 2);
  CHECK_FALSE(family_filter(c).not_superelliptic_equivalent);
  auto d = new_curve(7, Poly(7, {1, 0, 1}), Poly(7, {1}));
  CHECK_FALSE(family_filter(d).deg_order_ok);
}

TEST_CASE("splitting of small primes") {
  auto c8 = new_curve("103", kC8G, kC8H);
  // a linear factor of GH ramifies
  for (u64 a = 0; a < 103; ++a)
    if (c8.GH.eval(a) == 0) {
      const Poly P(103, {neg_mod(a, 103), 1});
      CHECK(classify_prime(c8, P).tag == SplitTag::Ramified);
      CHECK(z_power_sum(c8, P, 5) == 0);
    }
  // q = 1 mod 3: split exactly when F is a cube mod P
  int split = 0;
  for (u64 a = 0; a < 103; ++a) {
    const Poly P(103, {a, 1});
    if (c8.F.eval(neg_mod(a, 103)) == 0) continue;
    const bool cube = cube_root_mod(c8.F, P).has_value();
    CHECK((classify_prime(c8, P).tag == SplitTag::Split) == cube);
    split += cube;
  }
  CHECK(split > 0);

  auto c17 = new_curve("107", kC17G, kC17H);
  for (u64 a = 0; a < 107; ++a) {
    const Poly P(107, {a, 1});
    if (c17.F.eval(neg_mod(a, 107)) == 0) continue;
    CHECK(classify_prime(c17, P).tag == SplitTag::Partial);
    CHECK(z_power_sum(c17, P, 2) == 2);
  }
}

TEST_CASE("sum of e f is 3") {
  Rng rng(17);
  for (u64 q : {5, 7, 11, 13}) {
    auto c = testing::random_curve(q, 2, Signature::Ramified, rng, false);
    REQUIRE(c);
    for (int d = 1; d <= 2; ++d)
      for (const auto& P : iter_irreducibles(q, d))
        for (int k = 1; k <= 3; ++k) {
          auto s = classify_prime(*c, P, k);
          // partial: one place of degree 1 and one of degree 2
          const int sum = s.tag == SplitTag::Partial ? 3 : s.places() * s.ramification() * s.residue_degree();
          CHECK(sum == 3);
        }
  }
}

TEST_CASE("z power sums") {
  Rng rng(19);
  for (u64 q : {7, 11, 13}) {
    auto c = testing::random_curve(q, 3, Signature::Ramified, rng, false);
    REQUIRE(c);
    for (int d = 1; d <= 2; ++d)
      for (const auto& P : iter_irreducibles(q, d)) {
        for (long n = 1; n <= 12; ++n) CHECK(z_power_sum(*c, P, n) == z_power_sum(*c, P, n + 6));
        // the z-pair encoded by the splitting type gives the same power sums
        const auto t = classify_prime(*c, P, 1).tag;
        for (long n = 1; n <= 6; ++n) {
          int expect = 0;
          switch (t) {
            case SplitTag::Ramified: expect = 0; break;
            case SplitTag::Split: expect = 2; break;
            case SplitTag::Partial: expect = n % 2 ? 0 : 2; break;
            case SplitTag::Inert: expect = n % 3 ? -1 : 2; break;
          }
          CHECK(z_power_sum(*c, P, n) == expect);
        }
      }
  }
  // q = 1 mod 3, non-cube: n = 3 escapes the -1 case
  auto c = new_curve(7, Poly(7, {1, 0, 1}), Poly(7, {1}));
  for (const auto& P : iter_irreducibles(7, 1))
    if (classify_prime(c, P).tag == SplitTag::Inert) {
      CHECK(z_power_sum(c, P, 3) == 2);
      CHECK(z_power_sum(c, P, 1) == -1);
    }
}

TEST_CASE("swapping the roles of G and H keeps the genus") {
  Rng rng(23);
  for (int t = 0; t < 40; ++t) {
    auto c = testing::random_curve(t % 2 ? 7 : 11, 2 + t % 3, t % 2 ? Signature::Ramified : Signature::UnitRankOne,
                                   rng, false);
    REQUIRE(c);
    auto d = new_curve(c->q, c->H, c->G);
    CHECK(d.genus == c->genus);
  }
}

TEST_CASE("normalize") {
  // 2 (x^2 + 3) over F_7 scaled to a monic model
  auto n = normalize_curve(7, Poly(7, {6, 0, 2}), Poly(7, {1}));
  CHECK(n.curve.G.is_monic());
  CHECK(n.curve.genus == 1);
}

}
