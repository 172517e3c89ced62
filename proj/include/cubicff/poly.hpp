#pragma once
// Dense univariate polynomials over F_q, constant term first.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cubicff/field.hpp"

namespace cubicff {

class Poly {
 public:
  Poly() = default;
  explicit Poly(u64 q) : q_(q) {}
  Poly(u64 q, std::vector<u64> coeffs);

  static Poly constant(u64 q, u64 c);
  static Poly monomial(u64 q, u64 c, int k);
  static Poly x(u64 q) { return monomial(q, 1, 1); }

  u64 modulus() const { return q_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  u64 operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  u64 leading() const { return c_.empty() ? 0 : c_.back(); }
  const std::vector<u64>& coeffs() const { return c_; }

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b);
  bool operator==(const Poly& o) const { return q_ == o.q_ && c_ == o.c_; }

  Poly scaled(u64 s) const;
  Poly shifted(int k) const;  // times x^k
  Poly monic() const;
  Poly derivative() const;
  u64 eval(u64 a) const;
  bool is_squarefree() const;

  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);

  std::string to_string() const;
  static Poly parse(u64 q, std::string_view text);

  // Lexicographic comparison on the coefficient tuple read as a base-q number.
  bool lex_less(const Poly& o) const;

 private:
  void trim();
  void check(const Poly& o) const;
  u64 q_ = 0;
  std::vector<u64> c_;
};

Poly gcd(Poly a, Poly b);  // monic (or zero)
struct Xgcd {
  Poly g, s, t;  // s*a + t*b = g, g monic
};
Xgcd xgcd(const Poly& a, const Poly& b);

Poly mulmod(const Poly& a, const Poly& b, const Poly& m);
Poly powmod(const Poly& base, u64 e, const Poly& m);
Poly powmod(const Poly& base, const BigInt& e, const Poly& m);
Poly invmod(const Poly& a, const Poly& m);  // throws if not invertible

BigInt big_pow(u64 q, unsigned k);

}  // namespace cubicff
