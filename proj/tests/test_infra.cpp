#include <doctest.h>

#include <map>

#include "cubicff/infrastructure.hpp"
#include "cubicff/kangaroo.hpp"
#include "cubicff/regulator.hpp"
#include "cubicff/zeta.hpp"
#include "support.hpp"

using namespace cubicff;

namespace {

struct Census {
  std::vector<InfraDivisor> cycle;  // identity first, by increasing distance
  BigInt period;                    // total distance around the cycle
  std::map<std::string, BigInt> distance;
};

Census take_census(const Infrastructure& inf) {
  Census c;
  InfraDivisor d = inf.identity();
  do {
    c.cycle.push_back(d);
    c.distance[serialize(d.ideal)] = d.delta;
    d = inf.baby_step(d);
    REQUIRE(c.cycle.size() < 2000000);
  } while (!inf.is_identity(d));
  c.period = d.delta;
  return c;
}

struct Fixture {
  const char *q, *G, *H;
};
// (1,1;1,2) fields with regulators 8, 35, 612 and 40658
const Fixture kFields[] = {{"23", "12,2,1", "10,17,1"},
                           {"11", "1,2,0,3,1", "5,1"},
                           {"17", "10,13,4,1", "12,3,14,1"},
                           {"29", "9,12,21,1", "13,7,1,1"}};

}  // namespace

TEST_SUITE("infrastructure") {

TEST_CASE("tau table") {
  CHECK(tau_lookup(7, 6, 3) == doctest::Approx(7.72477).epsilon(1e-9));
  CHECK(tau_lookup(4, 3, 3) == doctest::Approx(4.11812).epsilon(1e-9));
}

TEST_CASE("cycle census closes at 2 R_x") {
  for (const auto& f : kFields) {
    auto c = new_curve(f.q, f.G, f.H);
    Infrastructure inf(c);
    const BigInt h = l_polynomial(c).h();
    auto cen = take_census(inf);
    auto reg = extract_regulator(inf, h, 1, h);
    CHECK(cen.period == 2 * reg.Rx);
    CHECK(h % reg.Rx == 0);
    CHECK(*reg.hx * reg.Rx == h);
    CHECK(below_is_identity(inf, cen.period));
    // first baby step
    const BigInt d1 = inf.baby_step(inf.identity()).delta;
    CHECK(d1 >= 1);
    CHECK(d1 <= c.genus + 2);
    // every step has positive length; the typical length is 2 (g = 3 mod 3 cases differ)
    std::map<BigInt, long> lengths;
    for (std::size_t i = 0; i + 1 < cen.cycle.size(); ++i) {
      const BigInt step = cen.cycle[i + 1].delta - cen.cycle[i].delta;
      CHECK(step >= 1);
      CHECK(step <= c.genus + 2);
      ++lengths[step];
    }
    if (cen.cycle.size() > 1000) {
      long best = 0;
      for (auto& [len, n] : lengths) best = std::max(best, n);
      CHECK(double(best) / cen.cycle.size() >= 1 - 5.0 / c.q);
    }
  }
}

TEST_CASE("below matches the census") {
  for (const auto& f : kFields) {
    auto c = new_curve(f.q, f.G, f.H);
    Infrastructure inf(c);
    auto cen = take_census(inf);
    CHECK(inf.is_identity(inf.below(0)));
    CHECK(inf.is_identity(inf.below(cen.period)));
    const std::size_t n = cen.cycle.size();
    // all n below the period on small cycles, a stride on the large one
    const long stride = n > 2000 ? 97 : 1;
    std::size_t idx = 0;
    for (BigInt m = 0; m < cen.period; m += stride) {
      while (idx + 1 < n && cen.cycle[idx + 1].delta <= m) ++idx;
      auto d = inf.below(m);
      CHECK(d.ideal == cen.cycle[idx].ideal);
      CHECK(d.delta == cen.cycle[idx].delta);
      CHECK(inf.baby_step(d).delta > m);
      // shifted by one period
      auto e = inf.below(m + cen.period);
      CHECK(e.ideal == d.ideal);
    }
  }
}

TEST_CASE("giant steps") {
  Rng rng(103);
  for (const auto& f : kFields) {
    auto c = new_curve(f.q, f.G, f.H);
    Infrastructure inf(c);
    auto cen = take_census(inf);
    const int g = c.genus;
    long at_phi = 0, total = 0;
    for (std::size_t i = 0; i < cen.cycle.size() && i < 50; ++i) {
      auto [d, psi] = inf.giant_step(cen.cycle[i], inf.identity());
      CHECK(psi == 0);
      CHECK(d == cen.cycle[i]);
    }
    for (int t = 0; t < 600; ++t) {
      const auto& a = cen.cycle[rng.below(cen.cycle.size())];
      const auto& b = cen.cycle[rng.below(cen.cycle.size())];
      auto [d, psi] = inf.giant_step(a, b);
      CHECK(psi <= 0);
      CHECK(psi >= -2 * g);
      CHECK(d.delta == a.delta + b.delta + psi);
      auto it = cen.distance.find(serialize(d.ideal));
      REQUIRE(it != cen.distance.end());
      CHECK((d.delta - it->second) % cen.period == 0);
      at_phi += psi == phi_heuristic(g);
      ++total;
    }
    if (cen.cycle.size() > 1000) CHECK(double(at_phi) / total >= 0.75);
  }
  CHECK(phi_heuristic(7) == -3);
  CHECK(phi_heuristic(6) == -2);
}

TEST_CASE("S_tau density over a full cycle") {
  auto c = new_curve("29", "9,12,21,1", "13,7,1,1");
  Infrastructure inf(c);
  auto cen = take_census(inf);
  for (double tau : {2.0, 4.11812, 7.72477}) {
    TauConfig cfg{tau, TauRule::Hash};
    long in = 0;
    for (const auto& d : cen.cycle) in += inf.in_s_tau(d, cfg);
    const double dens = double(in) / cen.cycle.size();
    CHECK(dens >= 0.75 / tau);
    CHECK(dens <= 1.25 / tau);
  }
  // the footnote rule is a valid predicate too
  long in = 0;
  TauConfig fn{4.11812, TauRule::Footnote};
  for (const auto& d : cen.cycle) in += inf.in_s_tau(d, fn);
  CHECK(in >= 0);
}

TEST_CASE("walk_to is bounded") {
  auto c = new_curve("17", "10,13,4,1", "12,3,14,1");
  Infrastructure inf(c);
  InfraDivisor d = inf.identity();
  for (int k = 0; k < 300; k += 7) {
    auto e = inf.walk_to(d, k);
    CHECK(e.delta <= k);
    CHECK(inf.baby_step(e).delta > k);
    d = e;
  }
}

}
