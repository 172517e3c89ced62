#pragma once
// Irreducibility, enumeration of monic irreducibles and residue symbols.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "cubicff/poly.hpp"

namespace cubicff {

bool is_irreducible(const Poly& p);

// Monic polynomial of degree nu whose lower coefficients are the base-q digits
// of idx (constant term least significant).
Poly monic_from_index(u64 q, int nu, u64 idx);
u64 monic_count(u64 q, int nu);  // q^nu, throws if it does not fit

// Visits the monic irreducibles of degree nu whose index lies in [lo, hi).
void for_each_irreducible(u64 q, int nu, u64 lo, u64 hi, const std::function<void(const Poly&)>& fn);
std::vector<Poly> iter_irreducibles(u64 q, int nu, u64 lo, u64 hi);
std::vector<Poly> iter_irreducibles(u64 q, int nu);

// Sieve of all monic degree-nu polys; bit idx set iff monic_from_index(idx) is irreducible.
std::vector<bool> irreducible_sieve(u64 q, int nu);

// (1/nu) sum_{d|nu} mu(nu/d) q^d
BigInt count_irreducibles(u64 q, int nu);

// Number of irreducible factors of each degree of a squarefree polynomial.
std::map<int, int> distinct_degree_counts(const Poly& f);

enum class CubicSymbol { Zero, One, Iota, Iota2 };
const char* to_string(CubicSymbol s);

// Cubic residue symbol [A/P]_3; requires q^deg(P) = 1 mod 3 and P irreducible.
CubicSymbol cubic_residue_symbol(const Poly& a, const Poly& p);
// Same, skipping the irreducibility check (hot loops that already know).
CubicSymbol cubic_residue_symbol_unchecked(const Poly& a, const Poly& p);

// A cube root of a modulo irreducible P, or nullopt if a is not a cube.
std::optional<Poly> cube_root_mod(const Poly& a, const Poly& p);

}  // namespace cubicff
