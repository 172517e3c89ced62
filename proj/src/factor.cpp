#include "cubicff/factor.hpp"

#include <algorithm>
#include <map>

#include "cubicff/error.hpp"

namespace cubicff {

BigInt FactoredInteger::product() const {
  BigInt p = 1;
  for (const auto& [f, e] : factors)
    for (unsigned i = 0; i < e; ++i) p *= f;
  return p;
}

bool is_probable_prime(const BigInt& n, int rounds) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.backend().data(), rounds) > 0;
}

namespace {

// A nontrivial factor of the odd composite n.
BigInt brent(const BigInt& n) {
  for (unsigned long c = 1;; ++c) {
    BigInt y = 2, x, ys, g = 1, q = 1;
    const unsigned long m = 128;
    unsigned long r = 1;
    auto f = [&](const BigInt& v) { return (v * v + c) % n; };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = (q * abs(x - y)) % n;
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
      if (r > (1UL << 40)) break;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(abs(x - ys), n);
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
}

void split(const BigInt& n, std::map<BigInt, unsigned>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    ++out[n];
    return;
  }
  BigInt d = brent(n);
  split(d, out);
  split(n / d, out);
}

}  // namespace

FactoredInteger pollard_rho_factor(const BigInt& n0) {
  if (n0 < 1) throw InvalidInput("factor: n must be positive");
  FactoredInteger r;
  r.value = n0;
  std::map<BigInt, unsigned> fs;
  BigInt n = n0;
  for (unsigned p = 2; p <= 10000; p += (p == 2 ? 1 : 2)) {
    if (BigInt(p) * p > n) break;
    while (n % p == 0) {
      ++fs[BigInt(p)];
      n /= p;
    }
  }
  split(n, fs);
  r.factors.assign(fs.begin(), fs.end());
  if (r.product() != n0) throw ComputeError("factorization does not multiply back");
  return r;
}

}  // namespace cubicff
