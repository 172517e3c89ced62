#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include "cubicff/error.hpp"
#include "cubicff/factor.hpp"
#include "cubicff/kangaroo.hpp"
#include "cubicff/regulator.hpp"
#include "cubicff/zeta.hpp"
#include "support.hpp"

using namespace cubicff;
namespace fs = std::filesystem;

namespace {

std::int64_t jump_sum(const SearchPlan& p) {
  return std::accumulate(p.jump_s.begin(), p.jump_s.end(), std::int64_t{0});
}

std::string temp_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("cubicff_test_" + name);
  fs::remove_all(d);
  return d.string();
}

bool same_stats(const SearchStats& a, const SearchStats& b) {
  return a.jumps == b.jumps && a.baby_steps == b.baby_steps && a.giant_steps == b.giant_steps &&
         a.traps == b.traps && a.useless == b.useless && a.rounds == b.rounds;
}

}  // namespace

TEST_SUITE("kangaroo_engine") {

TEST_CASE("plan arithmetic, signature (3,1)") {
  auto c = new_curve(7, Poly(7, {1, 2, 3, 1}), Poly(7, {5, 1}));
  auto est = estimate(c, Variant::E2U3);
  est.E = 100000;
  est.U = 10000;
  PlanOptions po;
  po.m = 2;
  po.alpha_override = 0.25;
  auto p = make_plan(c, est, po);
  CHECK(p.beta == 50);
  CHECK(p.theta == 8);
  REQUIRE(p.jump_s.size() == 64);
  for (auto s : p.jump_s) {
    CHECK(s > 0);
    CHECK(s <= 2 * p.beta);
  }
  CHECK(jump_sum(p) == 64 * p.beta);

  po.b = 6;
  po.a = 1;
  auto pb = make_plan(c, est, po);
  for (auto s : pb.jump_s) CHECK(s % 6 == 0);
  CHECK(pb.nu % 6 == 0);
  CHECK(pb.E % 6 == 1);
  // same options, same plan
  auto pb2 = make_plan(c, est, po);
  CHECK(pb2.jump_s == pb.jump_s);
}

TEST_CASE("alpha table") {
  CHECK(alpha_lookup(19, 7, Variant::E2U3) == doctest::Approx(0.10909269).epsilon(1e-9));
  CHECK(alpha_lookup(19, 7, Variant::E1U1) > 0);
}

TEST_CASE("plan arithmetic, signature (1,1;1,2), genus 7") {
  auto c = new_curve("107", "16,60,84,9,38,43,1", "104,106,53,1");
  auto est = estimate(c, Variant::E2U3);
  PlanOptions po;
  po.m = 16;
  auto p = make_plan(c, est, po);
  CHECK(p.phi == -3);
  CHECK(p.tau.tau == doctest::Approx(7.72477));
  for (auto s : p.jump_s) {
    CHECK(s >= 9);
    CHECK(s <= 2 * (p.beta - 3) + 1);
  }
  // mean beta - 5/2
  CHECK(jump_sum(p) == 64 * (p.beta - 3) + 32);
  CHECK(p.theta == (1ULL << std::llround(std::log2(double(p.beta)) / 2)));
}

TEST_CASE("hash determinism") {
  const std::string s = "103|1|2|3|0|1|0|0|0|1|1";
  const unsigned v = hash_v(s);
  const auto z = hash_z(s, 1024);
  bool same = true;
  for (int i = 0; i < 1000000; ++i) same &= hash_v(s) == v && hash_z(s, 1024) == z;
  CHECK(same);
  CHECK(v >= 1);
  CHECK(v <= 64);
}

TEST_CASE("hash uniformity over distinct reduced ideals") {
  auto c = new_curve(103, Poly(103, {5, 17, 0, 1}), Poly(103, {9, 1}));
  Order o(c);
  std::vector<Ideal> gens;
  for (int i = 0; i < 8; ++i) gens.push_back(random_ideal(o, 2000 + i));
  Rng rng(107);
  std::set<std::string> seen;
  Ideal x = unit_ideal(o);
  const std::size_t n = 300000;
  std::vector<long> buckets(65, 0);
  long zeros = 0;
  const std::uint64_t theta = 16;
  while (seen.size() < n) {
    x = ideal_compose(o, x, gens[rng.below(gens.size())]);
    const std::string s = serialize(x);
    if (!seen.insert(s).second) continue;
    ++buckets[hash_v(s)];
    zeros += hash_z(s, theta) == 0;
  }
  CHECK(buckets[0] == 0);
  for (int v = 1; v <= 64; ++v) {
    CHECK(buckets[v] >= 0.95 * n / 64);
    CHECK(buckets[v] <= 1.05 * n / 64);
  }
  CHECK(zeros >= 0.9 * n / theta);
  CHECK(zeros <= 1.1 * n / theta);
}

TEST_CASE("trap record format") {
  TrapRecord r{'W', 3, 17, BigInt("-123456789012345678901"), "v1|7|1|0|0|0|1|0|0|0|1|1"};
  auto line = format_trap(r);
  auto back = parse_trap(line);
  CHECK(back.herd == 'W');
  CHECK(back.worker == 3);
  CHECK(back.step == 17);
  CHECK(back.distance == r.distance);
  CHECK(back.serial == r.serial);
}

TEST_CASE("class numbers of small (3,1) fields") {
  Rng rng(109);
  for (int t = 0; t < 6; ++t) {
    const u64 q = t % 2 ? 7 : 13;
    auto c = testing::random_curve(q, 2 + t % 2, Signature::Ramified, rng);
    REQUIRE(c);
    const BigInt h = l_polynomial(*c).h();
    auto est = estimate(*c, Variant::E2U3);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      PlanOptions po;
      po.m = 2 + 2 * (seed % 2);
      po.seed = seed;
      auto plan = make_plan(*c, est, po);
      SearchOptions so;
      so.parallel = seed % 2;
      auto r = run_kangaroo(*c, est, plan, so);
      CHECK(r.value == h);
    }
    const BigInt lo = est.E - est.U < 1 ? BigInt(1) : est.E - est.U;
    CHECK(bsgs(*c, lo, est.E + est.U).value == h);
  }
}

TEST_CASE("serial and parallel coordinators agree bit for bit") {
  auto c = new_curve("17", "1,3,11,10,1", "1,16,1");  // genus 5, h = 1649970
  auto est = estimate(c, Variant::E2U3);
  PlanOptions po;
  po.m = 4;
  po.seed = 5;
  auto plan = make_plan(c, est, po);
  SearchOptions a, b;
  a.parallel = true;
  b.parallel = false;
  auto ra = run_kangaroo(c, est, plan, a), rb = run_kangaroo(c, est, plan, b), rc = run_kangaroo(c, est, plan, a);
  CHECK(ra.value == 1649970);
  CHECK(ra.value == rb.value);
  CHECK(same_stats(ra.stats, rb.stats));
  CHECK(same_stats(ra.stats, rc.stats));
  // trap density
  const double dens = double(ra.stats.traps) / ra.stats.jumps;
  CHECK(dens >= 0.5 / plan.theta);
  CHECK(dens <= 2.0 / plan.theta);
}

TEST_CASE("budget exhaustion and resume") {
  auto c = new_curve("103", "1,2,3,1", "5,3,1");  // genus 4
  auto est = estimate(c, Variant::E2U3);
  PlanOptions po;
  po.m = 2;
  po.seed = 1;
  po.theta_override = 1024;  // sparse traps: the collision shows up only after a few sweeps
  auto plan = make_plan(c, est, po);

  auto full = run_kangaroo(c, est, plan, SearchOptions{});
  REQUIRE(full.stats.jumps > 2000);  // needs more than one sweep

  const std::string dir = temp_dir("resume");
  SearchOptions cut;
  cut.trap_dir = dir;
  cut.max_jumps = 1;
  CHECK_THROWS_AS(run_kangaroo(c, est, plan, cut), BudgetExhausted);
  auto count_lines = [&] {
    long n = 0;
    for (auto& e : fs::directory_iterator(dir)) {
      if (e.path().filename().string().rfind("trap.", 0) != 0) continue;
      std::ifstream in(e.path());
      std::string l;
      while (std::getline(in, l)) n += !l.empty();
    }
    return n;
  };
  const long before = count_lines();
  CHECK(before > 0);
  CHECK(fs::exists(fs::path(dir) / "meta.json"));

  SearchOptions resume;
  resume.trap_dir = dir;
  auto r = run_kangaroo(c, est, plan, resume);
  CHECK(r.value == full.value);
  // earlier traps are kept and the statistics accumulate across the interruption
  CHECK(count_lines() >= before);
  CHECK(r.stats.traps >= static_cast<std::uint64_t>(count_lines()));
  CHECK(r.stats.jumps == full.stats.jumps);

  // a different job cannot reuse the store
  PlanOptions other = po;
  other.seed = 10;
  auto plan2 = make_plan(c, est, other);
  CHECK_THROWS_AS(run_kangaroo(c, est, plan2, resume), InvalidInput);
  fs::remove_all(dir);
}

TEST_CASE("infrastructure search returns a multiple of R_x") {
  const char* fields[][3] = {{"29", "9,12,21,1", "13,7,1,1"}, {"41", "38,14,26,1", "39,3,33,1"}};
  for (auto& f : fields) {
    auto c = new_curve(f[0], f[1], f[2]);
    Infrastructure inf(c);
    auto est = estimate(c, Variant::E2U3);
    for (std::uint64_t seed : {1, 2}) {
      PlanOptions po;
      po.m = 4;
      po.seed = seed;
      auto plan = make_plan(c, est, po);
      auto r = run_kangaroo(c, est, plan, SearchOptions{});
      CHECK(r.value > 0);
      CHECK(below_is_identity(inf, 2 * r.value));
      auto reg = extract_regulator(inf, r.value);
      CHECK(r.value % reg.Rx == 0);
    }
  }
}

TEST_CASE("non-cyclic class groups at q=19, genus 7") {
  // Sylow 2-subgroup (Z/2)^2 and a large 3-rank; the exponent alone leaves many candidates
  struct Case {
    const char *G, *H;
    std::uint64_t seed;
  };
  for (const Case& k : {Case{"0,3,6,16,12,1", "11,9,18,1", 14766253333266459709ULL},
                        Case{"14,13,16,6,2,16,1", "16,10,1", 15976428732984177411ULL}}) {
    auto c = new_curve("19", k.G, k.H);
    auto est = estimate(c, Variant::E2U3);
    const BigInt h = bsgs(c, est.E - est.U, est.E + est.U, 3).value;
    PlanOptions po;
    po.m = 2;
    po.seed = k.seed;
    CHECK(run_kangaroo(c, est, make_plan(c, est, po), SearchOptions{{}, 0, 0, false}).value == h);
  }
}

TEST_CASE("order from a multiple") {
  auto c = new_curve(7, Poly(7, {1, 0, 1}), Poly(7, {2, 1}));
  Order o(c);
  const BigInt h = l_polynomial(c).h();
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const Ideal a = random_ideal(o, s);
    const BigInt d = order_from_multiple(o, a, h * 6);
    CHECK(h % d == 0);
    CHECK(is_unit_ideal(ideal_pow(o, a, d)));
    for (const auto& [p, e] : pollard_rho_factor(d).factors) CHECK_FALSE(is_unit_ideal(ideal_pow(o, a, d / p)));
  }
}

TEST_CASE("bsgs on a width-one interval") {
  auto c = new_curve(7, Poly(7, {1, 2, 3, 1}), Poly(7, {5, 1}));
  const BigInt h = l_polynomial(c).h();
  CHECK(bsgs(c, h, h).value == h);
}

TEST_CASE("expected time identities") {
  auto c = new_curve("103", "37,30,22,9,59,1", "80,54,30,1");
  auto est = estimate(c, Variant::E2U3);
  PlanOptions po;
  po.m = 2;
  auto p = make_plan(c, est, po);
  const double U = est.U.convert_to<double>();
  const BigInt h = est.E + BigInt(std::llround(p.alpha_hat * U));
  auto t = expected_time_report(p, est, h, 1.0, 0.1);
  CHECK(t.exp1 == doctest::Approx(t.exp2).epsilon(1e-4));

  auto c17 = new_curve("107", "16,60,84,9,38,43,1", "104,106,53,1");
  auto e17 = estimate(c17, Variant::E2U3);
  po.tau_override = 1.0;
  auto p17 = make_plan(c17, e17, po);
  auto t17 = expected_time_report(p17, e17, e17.E, 1.0, 1.0);
  const double U17 = e17.U.convert_to<double>();
  CHECK(t17.exp2 == doctest::Approx(4 * std::sqrt(p17.alpha_hat * U17) + double(p17.theta) * 2).epsilon(1e-9));
}

TEST_CASE("alpha statistics at small scale") {
  auto st = alpha_stats(13, 3, 12, Variant::E2U3, 7);
  CHECK(st.n == 12);
  CHECK(st.failures == 0);
  for (double r : st.ratios) {
    CHECK(r >= 0);
    CHECK(r < 1);
  }
  CHECK(st.min <= st.mean);
  CHECK(st.mean <= st.max);
}

}
