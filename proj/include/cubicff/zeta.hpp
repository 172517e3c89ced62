#pragma once
// Exact L-polynomial by counting places, for desk-sized fields.

#include <cstdint>
#include <vector>

#include "cubicff/curve.hpp"

namespace cubicff {

constexpr std::uint64_t kOracleGuard = 100'000'000ULL;  // q^k limit

struct LPolynomial {
  u64 q = 0;
  int g = 0;
  std::vector<BigInt> a;  // a_0 .. a_2g
  BigInt h() const;       // L(1)
};

// N_1 .. N_kmax, degree-one places of K F_{q^k}. Parallel over polynomial blocks.
std::vector<std::int64_t> place_counts(const CurveModel& c, int kmax);
// Serial reference for the same kernel.
std::vector<std::int64_t> place_counts_serial(const CurveModel& c, int kmax);

std::int64_t degree_one_place_count(const CurveModel& c, int k);

// Newton identities plus functional equation; throws if the counts are inconsistent.
LPolynomial l_polynomial_from_counts(u64 q, int g, const std::vector<std::int64_t>& N);
LPolynomial l_polynomial(const CurveModel& c);

// N_k = q^k + 1 - sum omega_j^k, recomputed exactly from L.
std::vector<BigInt> counts_from_l(const LPolynomial& L, int kmax);

std::vector<double> frobenius_angles(const LPolynomial& L);
double g_lambda(const std::vector<double>& angles, int lambda);

}  // namespace cubicff
