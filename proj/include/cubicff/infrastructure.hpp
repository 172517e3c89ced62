#pragma once
// Signature (1,1;1,2): degrees at the infinite places, reduction, and the principal
// infrastructure with baby steps, giant steps and D(n).

#include <memory>
#include <mutex>
#include <utility>

#include "cubicff/ideal.hpp"

namespace cubicff {

// rho and omega as Laurent series in 1/x at the degree-one infinite place.
// rho0 = sum_i r_i x^{k-i}, omega0 = sum_i o_i x^{k2-i}.
struct ExpansionTerms {
  std::vector<u64> rho, omega;
};

class Expansion {
 public:
  explicit Expansion(const CurveModel& c);
  long k() const { return k_; }
  long k2() const { return k2_; }
  // at least n terms of each series; grows a shared cache on demand (thread safe)
  std::shared_ptr<const ExpansionTerms> terms(std::size_t n) const;

 private:
  std::shared_ptr<const ExpansionTerms> compute(std::size_t n) const;
  CurveModel c_;
  long k_ = 0, k2_ = 0;
  mutable std::mutex mu_;
  mutable std::shared_ptr<const ExpansionTerms> cache_;
};

// Degrees of x = u + v rho + w omega: deg0 at the degree-one place, deg1 at the degree-two place.
struct InfDegrees {
  long deg0, deg1;
};
InfDegrees infinite_degrees(const Order& o, const Elem& x);

// Minimum of (1/den) M with deg0 <= deg(den) and least deg1; Reduced::delta = deg psi.
Reduced reduce_rank_one(const Order& o, const Ideal& a);
// Next minimum of a reduced ideal; delta = distance increment.
Reduced next_minimum(const Order& o, const Ideal& a);

struct InfraDivisor {
  Ideal ideal;
  BigInt delta;
  bool operator==(const InfraDivisor&) const = default;
};
std::string serialize(const InfraDivisor& d);  // ideal serialization + "|d=" + delta

enum class TauRule { Hash, Footnote };
struct TauConfig {
  double tau = 1.0;
  TauRule rule = TauRule::Hash;
};
double tau_lookup(int g, int degG, int degH);

class Infrastructure {
 public:
  explicit Infrastructure(const CurveModel& c);
  const Order& order() const { return o_; }
  const CurveModel& curve() const { return o_.curve(); }

  InfraDivisor identity() const;
  bool is_identity(const InfraDivisor& d) const { return is_unit_ideal(d.ideal); }
  InfraDivisor baby_step(const InfraDivisor& d) const;
  // (D1 (+) D2, deg psi)
  std::pair<InfraDivisor, long> giant_step(const InfraDivisor& a, const InfraDivisor& b) const;
  // unique D(n) with delta(D(n)) <= n < delta(bs(D(n)))
  InfraDivisor below(const BigInt& n) const;
  // bs(D) repeated until delta(bs) > n; at most 4g+8 steps
  InfraDivisor walk_to(InfraDivisor d, const BigInt& n) const;
  bool in_s_tau(const InfraDivisor& d, const TauConfig& cfg) const;

 private:
  Order o_;
};

}  // namespace cubicff
