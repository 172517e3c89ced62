#include "cubicff/irreducible.hpp"

#include "cubicff/error.hpp"

namespace cubicff {

namespace {

std::vector<int> prime_divisors(int n) {
  std::vector<int> ps;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

int moebius(int n) {
  int m = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      m = -m;
    }
  }
  if (n > 1) m = -m;
  return m;
}

}  // namespace

bool is_irreducible(const Poly& p) {
  if (p.is_zero()) throw InvalidInput("is_irreducible: zero polynomial");
  const int n = p.degree();
  if (n <= 0) return false;
  if (n == 1) return true;
  const u64 q = p.modulus();
  const Poly x = Poly::x(q);
  const Poly f = p.monic();
  // x^(q^i) mod f for i = 1..n
  std::vector<Poly> frob(n + 1);
  frob[0] = x % f;
  for (int i = 1; i <= n; ++i) frob[i] = powmod(frob[i - 1], q, f);
  if (!(frob[n] == frob[0])) return false;
  for (int r : prime_divisors(n)) {
    if (gcd(frob[n / r] - x, f).degree() != 0) return false;
  }
  return true;
}

u64 monic_count(u64 q, int nu) {
  u64 c = 1;
  for (int i = 0; i < nu; ++i) {
    if (c > ~0ULL / q) throw InvalidInput("enumeration size overflows 64 bits");
    c *= q;
  }
  return c;
}

Poly monic_from_index(u64 q, int nu, u64 idx) {
  std::vector<u64> c(nu + 1);
  for (int i = 0; i < nu; ++i) {
    c[i] = idx % q;
    idx /= q;
  }
  c[nu] = 1;
  return Poly(q, std::move(c));
}

void for_each_irreducible(u64 q, int nu, u64 lo, u64 hi, const std::function<void(const Poly&)>& fn) {
  if (nu < 1) throw InvalidInput("degree must be >= 1");
  const u64 total = monic_count(q, nu);
  hi = std::min(hi, total);
  if (lo >= hi) return;
  if (nu == 1) {
    for (u64 c = lo; c < hi; ++c) fn(Poly(q, {c, 1}));
    return;
  }
  if (nu == 2) {
    // x^2 + b x + c is irreducible iff b^2 - 4c is a non-residue
    const u64 four = 4 % q;
    for (u64 idx = lo; idx < hi; ++idx) {
      u64 c = idx % q, b = idx / q;
      u64 disc = sub_mod(mul_mod(b, b, q), mul_mod(four, c, q), q);
      if (legendre_symbol(disc, q) == -1) fn(Poly(q, {c, b, 1}));
    }
    return;
  }
  for (u64 idx = lo; idx < hi; ++idx) {
    Poly p = monic_from_index(q, nu, idx);
    if (p[0] == 0) continue;  // divisible by x
    if (is_irreducible(p)) fn(p);
  }
}

std::vector<Poly> iter_irreducibles(u64 q, int nu, u64 lo, u64 hi) {
  std::vector<Poly> out;
  for_each_irreducible(q, nu, lo, hi, [&](const Poly& p) { out.push_back(p); });
  return out;
}

std::vector<Poly> iter_irreducibles(u64 q, int nu) { return iter_irreducibles(q, nu, 0, monic_count(q, nu)); }

std::vector<bool> irreducible_sieve(u64 q, int nu) {
  const u64 total = monic_count(q, nu);
  if (total > 2'000'000'000ULL) throw InvalidInput("sieve too large");
  std::vector<bool> irr(total, true);
  if (nu == 1) return irr;
  // mark a*b for a irreducible of degree i <= nu/2 and b monic of degree nu-i
  std::vector<u64> pw(nu + 1, 1);
  for (int k = 1; k <= nu; ++k) pw[k] = pw[k - 1] * q;
  std::vector<u64> a(nu + 1), b(nu + 1), prod(nu + 1);
  for (int i = 1; 2 * i <= nu; ++i) {
    std::vector<bool> small = irreducible_sieve(q, i);
    const int j = nu - i;
    for (u64 ai = 0; ai < pw[i]; ++ai) {
      if (!small[ai]) continue;
      u64 t = ai;
      for (int k = 0; k < i; ++k) a[k] = t % q, t /= q;
      a[i] = 1;
      for (u64 bi = 0; bi < pw[j]; ++bi) {
        u64 s = bi;
        for (int k = 0; k < j; ++k) b[k] = s % q, s /= q;
        b[j] = 1;
        u64 idx = 0;
        for (int k = nu - 1; k >= 0; --k) {
          u128 acc = 0;
          int lo = k > j ? k - j : 0, hi = k < i ? k : i;
          for (int l = lo; l <= hi; ++l) acc += static_cast<u128>(a[l]) * b[k - l];
          idx = idx * q + static_cast<u64>(acc % q);
        }
        irr[idx] = false;
      }
    }
  }
  return irr;
}

BigInt count_irreducibles(u64 q, int nu) {
  BigInt s = 0;
  for (int d = 1; d <= nu; ++d)
    if (nu % d == 0) s += moebius(nu / d) * big_pow(q, d);
  return s / nu;
}

std::map<int, int> distinct_degree_counts(const Poly& f0) {
  std::map<int, int> out;
  const u64 q = f0.modulus();
  Poly f = f0.monic();
  const Poly x = Poly::x(q);
  Poly h = x % f;
  for (int i = 1; f.degree() >= 2 * i; ++i) {
    h = powmod(h, q, f);
    Poly g = gcd(h - x, f);
    if (g.degree() > 0) {
      out[i] += g.degree() / i;
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out[f.degree()] += 1;
  return out;
}

const char* to_string(CubicSymbol s) {
  switch (s) {
    case CubicSymbol::Zero: return "0";
    case CubicSymbol::One: return "1";
    case CubicSymbol::Iota: return "iota";
    case CubicSymbol::Iota2: return "iota^2";
  }
  return "?";
}

CubicSymbol cubic_residue_symbol_unchecked(const Poly& a, const Poly& p) {
  const u64 q = p.modulus();
  const unsigned d = static_cast<unsigned>(p.degree());
  BigInt qd = big_pow(q, d);
  if (qd % 3 != 1) throw InvalidInput("cubic residue symbol needs q^deg(P) = 1 mod 3");
  Poly r0 = a % p;
  if (r0.is_zero()) return CubicSymbol::Zero;
  Poly r = powmod(r0, BigInt((qd - 1) / 3), p);
  if (r.is_one()) return CubicSymbol::One;
  // r is a primitive cube root of unity; the canonical one is the lex-smaller of r, r^2
  Poly r2 = mulmod(r, r, p);
  return r.lex_less(r2) ? CubicSymbol::Iota : CubicSymbol::Iota2;
}

CubicSymbol cubic_residue_symbol(const Poly& a, const Poly& p) {
  if (!is_irreducible(p)) throw InvalidInput("cubic residue symbol needs an irreducible modulus");
  return cubic_residue_symbol_unchecked(a, p.monic());
}

std::optional<Poly> cube_root_mod(const Poly& a0, const Poly& p) {
  const u64 q = p.modulus();
  Poly a = a0 % p;
  if (a.is_zero()) return a;
  const BigInt Q = big_pow(q, static_cast<unsigned>(p.degree()));
  if (Q % 3 == 2) return powmod(a, BigInt((2 * Q - 1) / 3), p);
  // Q - 1 = 3^s t with 3 not dividing t
  BigInt t = Q - 1;
  int s = 0;
  while (t % 3 == 0) t /= 3, ++s;
  if (!powmod(a, BigInt((Q - 1) / 3), p).is_one()) return std::nullopt;
  // r0 = a^e with 3e = 1 + j t, so r0^3 = a * b and b = a^(j t) lies in the 3-Sylow subgroup
  BigInt e = 0;
  for (BigInt cand = 0; cand < 3; ++cand) {
    if ((cand * t + 1) % 3 == 0) {
      e = (cand * t + 1) / 3;
      break;
    }
  }
  // e = (1 + j t)/3 for j in {0,1,2}: recover j
  BigInt j = (3 * e - 1) / t;
  Poly r = powmod(a, e, p);
  Poly b = powmod(a, BigInt(j * t), p);
  if (b.is_one()) return r;
  // generator c of the 3-Sylow subgroup from a non-cube z
  Poly c;
  for (u64 k = 2;; ++k) {
    std::vector<u64> digits;
    for (u64 t2 = k; t2; t2 /= q) digits.push_back(t2 % q);
    Poly z = Poly(q, digits) % p;
    if (z.is_zero()) continue;
    if (!powmod(z, BigInt((Q - 1) / 3), p).is_one()) {
      c = powmod(z, t, p);
      break;
    }
    if (k > 10000) throw ComputeError("no cubic non-residue found");
  }
  // solve b^{-1} = c^m by base-3 digits, then multiply r by c^(m/3)
  Poly binv = invmod(b, p);
  BigInt m = 0, pw = 1;
  Poly zeta = powmod(c, BigInt(pow(BigInt(3), s - 1)), p);  // order 3
  for (int i = 0; i < s; ++i) {
    // (binv * c^-m)^(3^(s-1-i)) determines digit i
    Poly cur = mulmod(binv, invmod(powmod(c, m, p), p), p);
    Poly v = powmod(cur, BigInt(pow(BigInt(3), s - 1 - i)), p);
    int digit = 0;
    if (v.is_one()) digit = 0;
    else if (v == zeta) digit = 1;
    else if (v == mulmod(zeta, zeta, p)) digit = 2;
    else throw ComputeError("cube root: discrete log failed");
    m += digit * pw;
    pw *= 3;
  }
  if (m % 3 != 0) throw ComputeError("cube root: element not a cube in 3-Sylow");
  return mulmod(r, powmod(c, BigInt(m / 3), p), p);
}

}  // namespace cubicff
