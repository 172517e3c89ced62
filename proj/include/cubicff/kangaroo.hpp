#pragma once
// Parallel two-herd kangaroo search in the class group (signature (3,1)) or in the
// principal infrastructure (signature (1,1;1,2)), plus a baby step giant step fallback.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cubicff/estimate.hpp"
#include "cubicff/infrastructure.hpp"

namespace cubicff {

// Mean of |h - E|/U from sampled fields, by genus (nearest genus) and log q (interpolated).
double alpha_lookup(u64 q, int g, Variant v);
// Typical deg psi of a giant step.
int phi_heuristic(int g);

unsigned hash_v(std::string_view serial);                        // 1..64
std::uint64_t hash_z(std::string_view serial, std::uint64_t theta);  // 0..theta-1

struct PlanOptions {
  int m = 2;
  BigInt b = 1, a = 0;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> theta_override;
  std::optional<double> tau_override;
  std::optional<double> alpha_override;  // replaces the table lookup
  TauRule tau_rule = TauRule::Hash;
};

struct SearchPlan {
  Signature signature = Signature::Ramified;
  int m = 2;
  double alpha_hat = 0;
  BigInt b = 1, a = 0;
  BigInt E, U;  // E moved into the class a mod b
  std::int64_t beta = 0, nu = 0;
  std::uint64_t theta = 1;
  std::vector<std::int64_t> jump_s;  // 64 entries
  TauConfig tau;
  int phi = 0;
  std::uint64_t seed = 1;
  std::string note;  // clamps applied, if any
};

SearchPlan make_plan(const CurveModel& c, const Estimate& est, const PlanOptions& opt);
// Expected number of kangaroo jumps (giant steps) over all workers, assuming |h - E| = alpha U.
double expected_jumps(const SearchPlan& p);

struct TrapRecord {
  char herd = 'T';  // 'T' or 'W'
  int worker = 0;   // index within the herd
  std::uint64_t step = 0;
  BigInt distance;
  std::string serial;  // wire serialization of the ideal
};
std::string format_trap(const TrapRecord& r);
TrapRecord parse_trap(const std::string& line);

struct SearchStats {
  std::uint64_t jumps = 0, baby_steps = 0, giant_steps = 0, traps = 0, useless = 0;
  int rounds = 0;
  double wall_seconds = 0;
  SearchStats& operator+=(const SearchStats& o);
};

struct SearchOptions {
  std::string trap_dir;         // empty: traps kept in memory only
  std::uint64_t max_jumps = 0;  // 0: 64 x expected
  double max_seconds = 0;       // 0: unlimited
  bool parallel = true;         // OpenMP over workers; false runs the serial reference
};

// How the collision was found.
enum class MatchKind { CrossHerd, Cycle };

struct WalkResult {
  BigInt multiple;  // positive; (3,1): multiple of ord(base); (1,1;1,2): multiple of 2 R_x
  MatchKind kind = MatchKind::CrossHerd;
  SearchStats stats;
};

// One search with a fixed base. Throws BudgetExhausted when the cap is hit.
// (3,1) base: random_ideal(o, base_seed).
WalkResult kangaroo_walk(const CurveModel& c, const SearchPlan& plan, const SearchOptions& opt,
                         std::uint64_t base_seed);

struct SearchResult {
  BigInt value;       // (3,1): h; (1,1;1,2): h0, a positive multiple of R_x
  bool exact = true;  // (3,1): value proven to be the unique admissible candidate
  SearchStats stats;
  std::string note;
};

SearchResult run_kangaroo(const CurveModel& c, const Estimate& est, const SearchPlan& plan,
                          const SearchOptions& opt);

// Smallest d | n with base^d = 1 (n a multiple of the order).
BigInt order_from_multiple(const Order& o, const Ideal& base, const BigInt& n);

// (3,1): the class number among the multiples of `exponent_part` in [lo, hi].
// Uses the prime support of the exponent and Sylow enumeration to separate candidates.
std::optional<BigInt> resolve_class_number(const Order& o, const BigInt& exponent_part,
                                           const BigInt& lo, const BigInt& hi,
                                           std::uint64_t seed, std::string* note = nullptr);

// Interval search by baby step giant step over [lo, hi]. (3,1): returns h; (1,1;1,2): h0.
struct BsgsResult {
  BigInt value;
  std::uint64_t baby = 0, giant = 0;
};
BsgsResult bsgs(const CurveModel& c, const BigInt& lo, const BigInt& hi, std::uint64_t seed = 1,
                std::size_t max_table = 1u << 22);

struct AlphaStats {
  double mean = 0, min = 0, max = 0;
  int n = 0, failures = 0;
  std::vector<double> ratios;
};
AlphaStats alpha_stats(u64 q, int g, int n, Variant v, std::uint64_t seed, int m = 2);

struct ExpectedTime {
  double exp1 = 0, exp2 = 0;  // seconds
};
// tg, tb: seconds per giant and baby step
ExpectedTime expected_time_report(const SearchPlan& p, const Estimate& est, const BigInt& h,
                                  double tg, double tb);

}  // namespace cubicff
