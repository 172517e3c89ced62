#pragma once
// Shared helpers for the test binaries: random curves of a given shape and brute-force oracles.

#include <optional>
#include <vector>

#include "cubicff/curve.hpp"
#include "cubicff/error.hpp"
#include "cubicff/rng.hpp"

namespace cubicff::testing {

inline Poly random_monic(u64 q, int d, Rng& rng) {
  std::vector<u64> c(d + 1);
  for (auto& x : c) x = rng.below(q);
  c[d] = 1;
  return Poly(q, c);
}

// Random valid curve of genus g and the requested signature with deg H <= deg G.
// With `family` set, deg H >= 1 and 3 | deg F curves avoid linear factors of GH.
inline std::optional<CurveModel> random_curve(u64 q, int g, Signature sig, Rng& rng, bool family = true,
                                              int tries = 2000) {
  std::vector<std::pair<int, int>> shapes;
  const int sum = sig == Signature::Ramified ? g + 1 : g + 2;
  for (int dH = family ? 1 : 0; 2 * dH <= sum; ++dH) {
    const int dG = sum - dH;
    const bool div3 = (dG + 2 * dH) % 3 == 0;
    if (div3 == (sig == Signature::Ramified)) continue;
    shapes.push_back({dG, dH});
  }
  if (shapes.empty()) return std::nullopt;
  for (int t = 0; t < tries; ++t) {
    auto [dG, dH] = shapes[rng.below(shapes.size())];
    try {
      auto c = new_curve(q, random_monic(q, dG, rng), random_monic(q, dH, rng));
      if (c.genus != g || c.signature != sig) continue;
      if (family) {
        auto f = family_filter(c);
        if (!f.deg_order_ok || !f.not_superelliptic_equivalent) continue;
      }
      return c;
    } catch (const InvalidInput&) {
    }
  }
  return std::nullopt;
}

// Number of (x, y) in F_q^2 with y^3 = F(x), by exhaustion.
inline std::int64_t affine_points(const CurveModel& c) {
  const u64 q = c.q;
  std::vector<std::int64_t> cubes(q, 0);
  for (u64 y = 0; y < q; ++y) ++cubes[mul_mod(mul_mod(y, y, q), y, q)];
  std::int64_t n = 0;
  for (u64 x = 0; x < q; ++x) n += cubes[c.F.eval(x)];
  return n;
}

}  // namespace cubicff::testing
