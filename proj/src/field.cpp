#include "cubicff/field.hpp"

#include <charconv>

#include "cubicff/error.hpp"

namespace cubicff {

u64 pow_mod(u64 a, u64 e, u64 q) {
  u64 r = 1 % q;
  a %= q;
  while (e) {
    if (e & 1) r = mul_mod(r, a, q);
    a = mul_mod(a, a, q);
    e >>= 1;
  }
  return r;
}

u64 inv_mod(u64 a, u64 q) {
  a %= q;
  if (a == 0) throw ComputeError("inverse of zero mod " + std::to_string(q));
  // extended Euclid on signed 128-bit to stay clear of overflow
  __int128 t = 0, nt = 1, r = q, nr = a;
  while (nr != 0) {
    __int128 k = r / nr;
    __int128 tmp = t - k * nt;
    t = nt;
    nt = tmp;
    tmp = r - k * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw ComputeError("element not invertible");
  if (t < 0) t += q;
  return static_cast<u64>(t);
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // these bases are deterministic below 2^64
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = static_cast<u64>([&] {
      u128 r = 1, b = a % n;
      u64 e = d;
      while (e) {
        if (e & 1) r = r * b % n;
        b = b * b % n;
        e >>= 1;
      }
      return r;
    }());
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int i = 1; i < s; ++i) {
      x = static_cast<u64>(static_cast<u128>(x) * x % n);
      if (x == n - 1) {
        comp = false;
        break;
      }
    }
    if (comp) return false;
  }
  return true;
}

int legendre_symbol(u64 c, u64 q) {
  c %= q;
  if (c == 0) return 0;
  return pow_mod(c, (q - 1) / 2, q) == 1 ? 1 : -1;
}

u64 cube_root_of_unity(u64 q) {
  if (q % 3 != 1) throw InvalidInput("no cube root of unity in F_q for q != 1 mod 3");
  // z = g^((q-1)/3) for a non-cube g; then pick the smaller of z, z^2
  for (u64 g = 2; g < q; ++g) {
    u64 z = pow_mod(g, (q - 1) / 3, q);
    if (z != 1) {
      u64 z2 = mul_mod(z, z, q);
      return z < z2 ? z : z2;
    }
  }
  throw ComputeError("cube root of unity not found");
}

u64 parse_u64(const std::string& s) {
  u64 v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw InvalidInput("not an unsigned integer: '" + s + "'");
  return v;
}

}  // namespace cubicff
