#pragma once
// Fractional ideals of O_x = F_q[x] + F_q[x] rho + F_q[x] omega, rho = y, omega = y^2/H,
// with rho^2 = H omega, rho omega = G H, omega^2 = G rho.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cubicff/curve.hpp"

namespace cubicff {

class Expansion;

struct Elem {
  Poly u, v, w;  // u + v rho + w omega
  bool is_zero() const { return u.is_zero() && v.is_zero() && w.is_zero(); }
  bool operator==(const Elem&) const = default;
};

// Multiplication table and norm for a fixed curve.
class Order {
 public:
  explicit Order(const CurveModel& c);
  const CurveModel& curve() const { return c_; }
  u64 q() const { return c_.q; }

  Elem one() const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem scale(const Elem& a, const Poly& f) const;
  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Poly norm(const Elem& a) const;
  // a * adjugate(a) = norm(a)
  Elem adjugate(const Elem& a) const;
  Poly trace(const Elem& a) const;
  // series at the degree-one infinite place; null unless the signature is (1,1;1,2)
  const Expansion* expansion() const { return exp_.get(); }

 private:
  CurveModel c_;
  std::shared_ptr<const Expansion> exp_;
};

// (1/den) * span{(a1,0,0), (a2,b2,0), (a3,b3,c3)} in the basis (1, rho, omega).
struct Ideal {
  Poly den;
  Poly a1, a2, a3, b2, b3, c3;

  std::array<Elem, 3> basis() const;  // integral numerator basis
  int norm_degree() const;            // deg N = deg(a1 b2 c3) - 3 deg(den)
  bool operator==(const Ideal& o) const = default;
};

Ideal unit_ideal(const Order& o);
bool is_unit_ideal(const Ideal& a);

// Canonical form of (1/den) * span(gens). If `modulus` is nonzero it must lie in the span
// together with modulus*rho and modulus*omega; coordinates are then reduced modulo it.
Ideal hnf(const Order& o, std::vector<Elem> gens, const Poly& den, const Poly& modulus);
Ideal hnf(const Order& o, std::vector<Elem> gens, const Poly& den);

// Membership of (1/den_x) x.
bool contains(const Ideal& a, const Elem& x, const Poly& den_x);
// rho*b and omega*b lie in the module for each basis vector b
bool is_closed(const Order& o, const Ideal& a);

Ideal ideal_mul(const Order& o, const Ideal& a, const Ideal& b);
Ideal principal_ideal(const Order& o, const Elem& x, const Poly& den);
// (1/x) a for a nonzero integral element x
Ideal divide_by_element(const Order& o, const Ideal& a, const Elem& x);
// (1/mu) M for an element mu of the numerator M (den ignored)
Ideal quotient_by_member(const Order& o, const Ideal& a, const Elem& mu);
// a^{-1} via the trace dual
Ideal ideal_inverse(const Order& o, const Ideal& a);

// All primes of norm P above P (three for split, one otherwise, none if inert).
std::vector<Ideal> prime_ideals_above(const Order& o, const Poly& P);
Ideal prime_ideal_above(const Order& o, const Poly& P);
Ideal random_ideal(const Order& o, std::uint64_t seed);

// Weighted pole order at the totally ramified infinite place, (3,1) only, in units of deg x = 3.
long weighted_degree(const CurveModel& c, const Elem& x);

struct Reduced {
  Ideal ideal;
  long delta = 0;  // (3,1): deg N(mu); (1,1;1,2): deg at the degree-one infinite place
};

// Distinguished representative of the class of a. Signature (3,1) here; (1,1;1,2) dispatches
// to the infrastructure reducer.
Reduced reduce_distinguished(const Order& o, const Ideal& a);
Ideal ideal_compose(const Order& o, const Ideal& a, const Ideal& b);  // reduce(a b)
Ideal ideal_pow(const Order& o, const Ideal& a, const BigInt& n);
bool is_distinguished(const Order& o, const Ideal& a);

std::string serialize(const Ideal& a);       // "q|a1|a2|a3|0|b2|b3|0|0|c3|den"
std::string wire_serialize(const Ideal& a);  // "v1|" + serialize
Ideal parse_ideal(const std::string& s);     // accepts either form

}  // namespace cubicff
