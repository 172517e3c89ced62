#pragma once
// Integer factorization: trial division, then Pollard rho with Brent's cycle search.

#include <utility>
#include <vector>

#include "cubicff/field.hpp"

namespace cubicff {

struct FactoredInteger {
  BigInt value;
  std::vector<std::pair<BigInt, unsigned>> factors;  // ascending primes
  BigInt product() const;
};

bool is_probable_prime(const BigInt& n, int rounds = 64);
FactoredInteger pollard_rho_factor(const BigInt& n);

}  // namespace cubicff
