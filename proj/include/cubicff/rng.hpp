#pragma once
// Seeded generator with a portable bounded draw (std distributions differ across libraries).

#include <cstdint>
#include <random>

namespace cubicff {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  // uniform in [0, n), n > 0
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t x;
    do x = eng_();
    while (x >= limit);
    return x % n;
  }
  // uniform in [lo, hi]
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace cubicff
