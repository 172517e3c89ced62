#include "cubicff/poly.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "cubicff/error.hpp"

namespace cubicff {

Poly::Poly(u64 q, std::vector<u64> coeffs) : q_(q), c_(std::move(coeffs)) {
  for (auto& v : c_) v %= q_;
  trim();
}

Poly Poly::constant(u64 q, u64 c) {
  Poly p(q);
  if (c % q) p.c_.push_back(c % q);
  return p;
}

Poly Poly::monomial(u64 q, u64 c, int k) {
  Poly p(q);
  if (c % q == 0) return p;
  p.c_.assign(k + 1, 0);
  p.c_[k] = c % q;
  return p;
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

void Poly::check(const Poly& o) const {
  if (q_ != o.q_) throw InvalidInput("polynomial modulus mismatch");
}

Poly Poly::operator-() const {
  Poly r(*this);
  for (auto& v : r.c_) v = neg_mod(v, q_);
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  check(o);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = add_mod(c_[i], o.c_[i], q_);
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  check(o);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = sub_mod(c_[i], o.c_[i], q_);
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  a.check(b);
  Poly r(a.q_);
  if (a.c_.empty() || b.c_.empty()) return r;
  const u64 q = a.q_;
  const std::size_t na = a.c_.size(), nb = b.c_.size();
  r.c_.assign(na + nb - 1, 0);
  const u128 sq = static_cast<u128>(q - 1) * (q - 1);
  const std::size_t shortest = std::min(na, nb);
  if (sq * shortest < (static_cast<u128>(1) << 64)) {
    // products accumulate without overflow; reduce once per output coefficient
    for (std::size_t k = 0; k < na + nb - 1; ++k) {
      std::size_t lo = k >= nb ? k - nb + 1 : 0, hi = std::min(k, na - 1);
      u64 s = 0;
      for (std::size_t i = lo; i <= hi; ++i) s += a.c_[i] * b.c_[k - i];
      r.c_[k] = s % q;
    }
  } else {
    for (std::size_t k = 0; k < na + nb - 1; ++k) {
      std::size_t lo = k >= nb ? k - nb + 1 : 0, hi = std::min(k, na - 1);
      u128 s = 0;
      for (std::size_t i = lo; i <= hi; ++i) {
        s += static_cast<u128>(a.c_[i]) * b.c_[k - i];
        if (s >> 126) s %= q;
      }
      r.c_[k] = static_cast<u64>(s % q);
    }
  }
  r.trim();
  return r;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& a, const Poly& b) {
  a.check(b);
  if (b.is_zero()) throw ComputeError("polynomial division by zero");
  const u64 q = a.q_;
  Poly quo(q);
  if (a.degree() < b.degree()) return {quo, a};
  std::vector<u64> r = a.c_;
  const int db = b.degree();
  const u64 inv = inv_mod(b.leading(), q);
  quo.c_.assign(a.degree() - db + 1, 0);
  for (int i = a.degree(); i >= db; --i) {
    u64 c = r[i];
    if (c == 0) continue;
    if (inv != 1) c = mul_mod(c, inv, q);
    quo.c_[i - db] = c;
    const u64 nc = q - c;
    for (int j = 0; j <= db; ++j) {
      if (b.c_[j]) r[i - db + j] = add_mod(r[i - db + j], mul_mod(nc, b.c_[j], q), q);
    }
  }
  r.resize(db);
  Poly rem(q);
  rem.c_ = std::move(r);
  rem.trim();
  quo.trim();
  return {quo, rem};
}

Poly operator%(const Poly& a, const Poly& b) {
  if (a.degree() < b.degree()) {
    a.check(b);
    return a;
  }
  return Poly::divmod(a, b).second;
}

Poly Poly::scaled(u64 s) const {
  s %= q_;
  if (s == 0) return Poly(q_);
  Poly r(*this);
  if (s != 1)
    for (auto& v : r.c_) v = mul_mod(v, s, q_);
  return r;
}

Poly Poly::shifted(int k) const {
  if (is_zero() || k == 0) return *this;
  Poly r(q_);
  r.c_.assign(k, 0);
  r.c_.insert(r.c_.end(), c_.begin(), c_.end());
  return r;
}

Poly Poly::monic() const {
  if (is_zero() || leading() == 1) return *this;
  return scaled(inv_mod(leading(), q_));
}

Poly Poly::derivative() const {
  Poly r(q_);
  if (c_.size() <= 1) return r;
  r.c_.resize(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) r.c_[i - 1] = mul_mod(c_[i], i % q_, q_);
  r.trim();
  return r;
}

u64 Poly::eval(u64 a) const {
  u64 r = 0;
  a %= q_;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = add_mod(mul_mod(r, a, q_), *it, q_);
  return r;
}

bool Poly::is_squarefree() const {
  if (is_zero()) return false;
  return gcd(*this, derivative()).degree() == 0;
}

std::string Poly::to_string() const {
  if (c_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(c_[i]);
  }
  return s;
}

Poly Poly::parse(u64 q, std::string_view text) {
  std::vector<u64> v;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    auto tok = text.substr(pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    u64 x = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size())
      throw InvalidInput("bad polynomial text: '" + std::string(text) + "'");
    v.push_back(x);
    pos = end + 1;
  }
  return Poly(q, std::move(v));
}

bool Poly::lex_less(const Poly& o) const {
  if (c_.size() != o.c_.size()) return c_.size() < o.c_.size();
  for (std::size_t i = c_.size(); i-- > 0;)
    if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
  return false;
}

Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Xgcd xgcd(const Poly& a, const Poly& b) {
  const u64 q = a.modulus();
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(q, 1), s1(q), t0(q), t1 = Poly::constant(q, 1);
  while (!r1.is_zero()) {
    auto [k, r] = Poly::divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly s = s0 - k * s1;
    s0 = std::move(s1);
    s1 = std::move(s);
    Poly t = t0 - k * t1;
    t0 = std::move(t1);
    t1 = std::move(t);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  u64 inv = inv_mod(r0.leading(), q);
  return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return (a * b) % m; }

Poly powmod(const Poly& base, u64 e, const Poly& m) {
  Poly r = Poly::constant(m.modulus(), 1) % m;
  Poly b = base % m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    e >>= 1;
    if (e) b = mulmod(b, b, m);
  }
  return r;
}

Poly powmod(const Poly& base, const BigInt& e, const Poly& m) {
  if (e < 0) throw InvalidInput("negative exponent");
  Poly r = Poly::constant(m.modulus(), 1) % m;
  Poly b = base % m;
  const std::size_t bits = e == 0 ? 0 : boost::multiprecision::msb(e) + 1;
  for (std::size_t i = bits; i-- > 0;) {
    r = mulmod(r, r, m);
    if (boost::multiprecision::bit_test(e, i)) r = mulmod(r, b, m);
  }
  return r;
}

Poly invmod(const Poly& a, const Poly& m) {
  Xgcd x = xgcd(a % m, m);
  if (x.g.degree() != 0) throw ComputeError("polynomial not invertible modulo m");
  return x.s % m;
}

BigInt big_pow(u64 q, unsigned k) {
  BigInt r = 1;
  for (unsigned i = 0; i < k; ++i) r *= q;
  return r;
}

}  // namespace cubicff
