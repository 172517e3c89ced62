#pragma once
// Arithmetic in F_q for a prime q < 2^63, residues held in machine words.

#include <cstdint>
#include <string>

#include <boost/multiprecision/gmp.hpp>

namespace cubicff {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using BigInt = boost::multiprecision::mpz_int;

inline u64 add_mod(u64 a, u64 b, u64 q) {
  u64 s = a + b;  // q < 2^63 so no wrap
  return s >= q ? s - q : s;
}
inline u64 sub_mod(u64 a, u64 b, u64 q) { return a >= b ? a - b : a + q - b; }
inline u64 neg_mod(u64 a, u64 q) { return a == 0 ? 0 : q - a; }
inline u64 mul_mod(u64 a, u64 b, u64 q) {
  if (q <= 0xffffffffULL) return a * b % q;
  return static_cast<u64>(static_cast<u128>(a) * b % q);
}

u64 pow_mod(u64 a, u64 e, u64 q);
u64 inv_mod(u64 a, u64 q);  // throws on a == 0
bool is_prime_u64(u64 n);    // deterministic Miller-Rabin

// Euler criterion, returns -1, 0 or 1.
int legendre_symbol(u64 c, u64 q);

// Smallest integer representative of a primitive cube root of unity (q = 1 mod 3).
u64 cube_root_of_unity(u64 q);

// Element of F_q with its modulus; thin wrapper used at API boundaries.
struct FieldElement {
  u64 value = 0;
  u64 q = 0;
  FieldElement() = default;
  FieldElement(u64 v, u64 mod) : value(v % mod), q(mod) {}
  bool operator==(const FieldElement&) const = default;
};

u64 parse_u64(const std::string& s);

}  // namespace cubicff
