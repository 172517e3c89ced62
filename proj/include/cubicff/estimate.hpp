#pragma once
// Truncated Euler product estimate E of h with a bound U, |h - E| <= U.

#include <map>
#include <optional>
#include <string>

#include <boost/multiprecision/mpfr.hpp>

#include "cubicff/curve.hpp"

namespace cubicff {

using BigFloat = boost::multiprecision::mpfr_float;

enum class Variant { E1U1, E2U2, E2U3 };
std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

struct SnuRow {
  int nu = 0;
  std::int64_t S1 = 0;       // S_nu(1) (scanned when q^nu = 1 mod 3)
  BigInt I;                  // monic irreducibles of degree nu
  int Fnu = 0;               // distinct prime factors of GH of degree nu
  bool q_is_one = false;     // q^nu = 1 mod 3
};

struct SnuTable {
  u64 q = 0;
  std::map<int, SnuRow> rows;
};

// Partial S_nu(1) over a block of the canonical enumeration.
std::int64_t s_scan(const CurveModel& c, int nu, u64 lo, u64 hi);
std::int64_t s_scan_full(const CurveModel& c, int nu);         // OpenMP over blocks
std::int64_t s_scan_full_serial(const CurveModel& c, int nu);  // reference

SnuTable build_snu_table(const CurveModel& c, int max_nu);
BigInt s_value(const SnuTable& t, int nu, long n);

struct Estimate {
  Variant variant = Variant::E2U3;
  int lambda = 0;
  BigFloat logE;
  BigFloat psi;
  BigInt E, U;
  bool interval_ok = false;
  std::string note;  // fallbacks taken, if any
  SnuTable table;
};

Estimate estimate(const CurveModel& c, Variant v, std::optional<int> lambda_override = std::nullopt,
                  unsigned extra_bits = 0);

// |h - E| / U as a double
double estimate_ratio(const Estimate& e, const BigInt& h);

}  // namespace cubicff
