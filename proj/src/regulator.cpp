#include "cubicff/regulator.hpp"

#include <unordered_set>

#include "cubicff/error.hpp"

namespace cubicff {

bool below_is_identity(const Infrastructure& inf, const BigInt& n) {
  const InfraDivisor d = inf.below(n);
  return inf.is_identity(d) && d.delta == n;
}

RegulatorResult extract_regulator(const Infrastructure& inf, const BigInt& h0, const BigInt& l,
                                  const std::optional<BigInt>& h) {
  if (h0 < 1) throw InvalidInput("extract_regulator: h0 must be positive");
  if (l < 1) throw InvalidInput("extract_regulator: lower bound must be at least 1");
  if (!below_is_identity(inf, 2 * h0)) throw InvalidInput("extract_regulator: h0 is not a multiple of R_x");
  RegulatorResult r;
  r.h0 = h0;
  r.factors = pollard_rho_factor(h0);
  BigInt hstar = 1;
  for (const auto& [p, a] : r.factors.factors) {
    if (p * l >= h0) continue;  // only primes p < h0 / l can be stripped
    BigInt pe = 1;
    unsigned e = 1;
    for (; e <= a; ++e) {
      pe *= p;
      if (!below_is_identity(inf, 2 * h0 / pe)) break;
    }
    for (unsigned k = 1; k < e; ++k) hstar *= p;
  }
  r.Rx = h0 / hstar;
  if (!below_is_identity(inf, 2 * r.Rx)) throw ComputeError("extract_regulator: D(2 R_x) is not the identity");
  for (const auto& [p, a] : r.factors.factors)
    if (r.Rx % p == 0 && p * l < h0 && below_is_identity(inf, 2 * r.Rx / p))
      throw ComputeError("extract_regulator: R_x/" + p.str() + " is still a period");
  if (h) {
    if (*h % r.Rx != 0) throw ComputeError("extract_regulator: R_x does not divide h");
    r.hx = *h / r.Rx;
  }
  return r;
}

namespace {

std::vector<BigInt> multiples_in(const BigInt& R, BigInt lo, const BigInt& hi) {
  std::vector<BigInt> out;
  if (lo < 1) lo = 1;
  for (BigInt k = (lo + R - 1) / R; k * R <= hi && out.size() <= 100000; ++k) out.push_back(k * R);
  return out;
}

}  // namespace

ClassNumberResult class_number_from_regulator(const Infrastructure& inf, const Estimate& est, const BigInt& Rx,
                                              std::uint64_t seed, std::uint64_t max_cycle) {
  ClassNumberResult r;
  auto cands = multiples_in(Rx, est.E - est.U, est.E + est.U);
  if (cands.size() <= 1) {
    if (!cands.empty()) r.h = cands[0];
    else r.note = "no multiple of R_x in the interval; ";
    return r;
  }
  // principal cycle, so that principality of a reduced ideal is a set lookup
  std::unordered_set<std::string> cycle;
  InfraDivisor d = inf.identity();
  std::uint64_t steps = 0;
  do {
    cycle.insert(serialize(d.ideal));
    d = inf.baby_step(d);
    if (++steps > max_cycle) {
      r.note = std::to_string(cands.size()) + " candidates; principal cycle too long to enumerate; ";
      return r;
    }
  } while (!inf.is_identity(d));
  const Order& o = inf.order();
  auto principal = [&](const Ideal& a) { return cycle.count(serialize(a)) > 0; };
  // class-group exponent from random ideals: each candidate k (= h_x) must kill every class
  BigInt e = 1;
  for (int i = 0; i < 12 && cands.size() > 1; ++i) {
    const Ideal a = random_ideal(o, seed * 1000003 + i);
    std::vector<BigInt> keep;
    for (const auto& h : cands)
      if (principal(ideal_pow(o, a, h / Rx))) keep.push_back(h);
    if (keep.empty()) throw ComputeError("class_number_from_regulator: no candidate is consistent");
    cands = std::move(keep);
    // order of a divides every surviving k; take the smallest divisor of the first that works
    BigInt k = cands[0] / Rx, ord = k;
    for (const auto& [p, m] : pollard_rho_factor(k).factors)
      for (unsigned j = 0; j < m && principal(ideal_pow(o, a, ord / p)); ++j) ord /= p;
    e = e / gcd(e, ord) * ord;
  }
  if (cands.size() > 1) {
    // h_x has the prime support of the class-group exponent
    const auto fe = pollard_rho_factor(e);
    std::erase_if(cands, [&](const BigInt& h) {
      BigInt k = h / Rx;
      for (const auto& [p, m] : fe.factors)
        while (k % p == 0) k /= p;
      return k != 1;
    });
  }
  if (cands.size() == 1) r.h = cands[0];
  else r.note += std::to_string(cands.size()) + " candidates remain after class tests; ";
  return r;
}

}  // namespace cubicff
