#pragma once
// Regulator R_x from a multiple h0 (factor h0, strip primes while D(2 h0/p) stays the identity),
// and the class number h = R_x h_x of a (1,1;1,2) field.

#include <optional>
#include <string>

#include "cubicff/estimate.hpp"
#include "cubicff/factor.hpp"
#include "cubicff/infrastructure.hpp"

namespace cubicff {

// D(n) is the identity at distance exactly n
bool below_is_identity(const Infrastructure& inf, const BigInt& n);

struct RegulatorResult {
  BigInt h0, Rx;
  std::optional<BigInt> hx;
  FactoredInteger factors;  // of h0
};

// l: known lower bound on R_x (1 if none). hx is set when h is given.
RegulatorResult extract_regulator(const Infrastructure& inf, const BigInt& h0, const BigInt& l = 1,
                                  const std::optional<BigInt>& h = std::nullopt);

// h as the unique admissible multiple of R_x in [E-U, E+U]. When several remain and the principal
// cycle is small enough to enumerate, candidates k R_x are filtered by testing whether k-th powers of
// random ideal classes are principal.
struct ClassNumberResult {
  std::optional<BigInt> h;
  std::string note;
};
ClassNumberResult class_number_from_regulator(const Infrastructure& inf, const Estimate& est, const BigInt& Rx,
                                              std::uint64_t seed = 1, std::uint64_t max_cycle = 2000000);

}  // namespace cubicff
