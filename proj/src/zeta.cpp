#include "cubicff/zeta.hpp"

#include <cmath>
#include <complex>

#include <unsupported/Eigen/Polynomials>

#include "cubicff/error.hpp"

namespace cubicff {

BigInt LPolynomial::h() const {
  BigInt s = 0;
  for (const auto& v : a) s += v;
  return s;
}

namespace {

// What a degree-e prime contributes, before looking at k.
enum class PrimeKind : std::uint8_t { Ramified, NoCubeRoots, Cube, NonCube };

PrimeKind kind_of(const CurveModel& c, const Poly& P, bool qe_is_2) {
  Poly r = c.F % P;
  if (r.is_zero()) return PrimeKind::Ramified;
  if (qe_is_2) return PrimeKind::NoCubeRoots;
  return cubic_residue_symbol_unchecked(r, P) == CubicSymbol::One ? PrimeKind::Cube : PrimeKind::NonCube;
}

// degree-one places over F_{q^k} above one degree-e prime (e | k), times e
int weight(PrimeKind kind, u64 q, int e, int k) {
  const bool qk_is_2 = q % 3 == 2 && k % 2 == 1;
  switch (kind) {
    case PrimeKind::Ramified: return e;
    case PrimeKind::NoCubeRoots: return qk_is_2 ? e : 3 * e;
    case PrimeKind::Cube: return qk_is_2 ? e : 3 * e;
    case PrimeKind::NonCube: return (k / e) % 3 == 0 ? 3 * e : 0;
  }
  return 0;
}

int infinite_places(const CurveModel& c, int k) {
  switch (c.signature) {
    case Signature::Ramified: return 1;
    case Signature::UnitRankOne: return k % 2 == 0 ? 3 : 1;
    case Signature::UnitRankTwo: return 3;
    case Signature::Inert: return k % 3 == 0 ? 3 : 0;
  }
  return 0;
}

void check_guard(u64 q, int kmax) {
  long double v = std::pow(static_cast<long double>(q), kmax);
  if (v > static_cast<long double>(kOracleGuard)) throw InvalidInput("oracle guard exceeded: q^k > 1e8");
}

// Adds the contribution of degree-e primes with index in [lo, hi) to acc[k].
void count_block(const CurveModel& c, int e, int kmax, u64 lo, u64 hi, const std::vector<bool>* sieve,
                 std::vector<std::int64_t>& acc) {
  const u64 q = c.q;
  const bool qe_is_2 = q % 3 == 2 && e % 2 == 1;
  auto add = [&](PrimeKind kind) {
    for (int k = e; k <= kmax; k += e) acc[k] += weight(kind, q, e, k);
  };
  if (e == 1) {
    for (u64 cc = lo; cc < hi; ++cc) {
      u64 v = c.F.eval(neg_mod(cc, q));
      PrimeKind kind = v == 0 ? PrimeKind::Ramified
                       : qe_is_2 ? PrimeKind::NoCubeRoots
                       : pow_mod(v, (q - 1) / 3, q) == 1 ? PrimeKind::Cube
                                                         : PrimeKind::NonCube;
      add(kind);
    }
    return;
  }
  if (e == 2) {
    for_each_irreducible(q, 2, lo, hi, [&](const Poly& P) { add(kind_of(c, P, qe_is_2)); });
    return;
  }
  for (u64 idx = lo; idx < hi; ++idx) {
    if (!(*sieve)[idx]) continue;
    add(kind_of(c, monic_from_index(q, e, idx), qe_is_2));
  }
}

std::vector<std::int64_t> finish(const CurveModel& c, int kmax, std::vector<std::int64_t> acc) {
  std::vector<std::int64_t> N(kmax);
  for (int k = 1; k <= kmax; ++k) N[k - 1] = acc[k] + infinite_places(c, k);
  return N;
}

}  // namespace

std::vector<std::int64_t> place_counts_serial(const CurveModel& c, int kmax) {
  check_guard(c.q, kmax);
  std::vector<std::int64_t> acc(kmax + 1, 0);
  for (int e = 1; e <= kmax; ++e) {
    std::vector<bool> sieve;
    if (e >= 3) sieve = irreducible_sieve(c.q, e);
    count_block(c, e, kmax, 0, monic_count(c.q, e), &sieve, acc);
  }
  return finish(c, kmax, std::move(acc));
}

std::vector<std::int64_t> place_counts(const CurveModel& c, int kmax) {
  check_guard(c.q, kmax);
  std::vector<std::int64_t> acc(kmax + 1, 0);
  for (int e = 1; e <= kmax; ++e) {
    std::vector<bool> sieve;
    if (e >= 3) sieve = irreducible_sieve(c.q, e);
    const u64 total = monic_count(c.q, e);
    const u64 block = 4096;
    const long nblocks = static_cast<long>((total + block - 1) / block);
#pragma omp parallel
    {
      std::vector<std::int64_t> local(kmax + 1, 0);
#pragma omp for schedule(dynamic, 4)
      for (long b = 0; b < nblocks; ++b) {
        u64 lo = static_cast<u64>(b) * block;
        count_block(c, e, kmax, lo, std::min(total, lo + block), &sieve, local);
      }
#pragma omp critical
      for (int k = 0; k <= kmax; ++k) acc[k] += local[k];
    }
  }
  return finish(c, kmax, std::move(acc));
}

std::int64_t degree_one_place_count(const CurveModel& c, int k) {
  if (k < 1) throw InvalidInput("k must be >= 1");
  return place_counts(c, k)[k - 1];
}

LPolynomial l_polynomial_from_counts(u64 q, int g, const std::vector<std::int64_t>& N) {
  if (static_cast<int>(N.size()) < g) throw InvalidInput("need N_1..N_g");
  LPolynomial L;
  L.q = q;
  L.g = g;
  L.a.assign(2 * g + 1, 0);
  L.a[0] = 1;
  std::vector<BigInt> s(g + 1);
  for (int k = 1; k <= g; ++k) s[k] = BigInt(N[k - 1]) - 1 - big_pow(q, k);
  for (int k = 1; k <= g; ++k) {
    BigInt acc = 0;
    for (int i = 1; i <= k; ++i) acc += s[i] * L.a[k - i];
    if (acc % k != 0) throw ComputeError("Newton identity not integral: inconsistent place counts");
    L.a[k] = acc / k;
  }
  for (int i = 1; i <= g; ++i) L.a[g + i] = big_pow(q, i) * L.a[g - i];
  if (L.h() <= 0) throw ComputeError("L(1) not positive: inconsistent place counts");
  return L;
}

LPolynomial l_polynomial(const CurveModel& c) {
  return l_polynomial_from_counts(c.q, c.genus, place_counts(c, c.genus));
}

std::vector<BigInt> counts_from_l(const LPolynomial& L, int kmax) {
  auto a = [&](int i) { return i <= 2 * L.g ? L.a[i] : BigInt(0); };
  std::vector<BigInt> s(kmax + 1), N(kmax);
  for (int k = 1; k <= kmax; ++k) {
    BigInt acc = k * a(k);
    for (int i = 1; i < k; ++i) acc -= s[i] * a(k - i);
    s[k] = acc;
    N[k - 1] = s[k] + 1 + big_pow(L.q, k);
  }
  return N;
}

std::vector<double> frobenius_angles(const LPolynomial& L) {
  const int g = L.g, n = 2 * g;
  const long double sq = std::sqrt(static_cast<long double>(L.q));
  // z = u / sqrt(q): coefficient of z^m is a_{2g-m} q^{-(2g-m)/2}
  std::vector<long double> coef(n + 1);
  for (int m = 0; m <= n; ++m) coef[m] = static_cast<long double>(L.a[n - m].convert_to<long double>()) / std::pow(sq, n - m);
  Eigen::VectorXd ev(n + 1);
  for (int m = 0; m <= n; ++m) ev[m] = static_cast<double>(coef[m]);
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
  solver.compute(ev);
  std::vector<double> phis;
  for (int j = 0; j < solver.roots().size(); ++j) {
    std::complex<long double> z(solver.roots()[j].real(), solver.roots()[j].imag());
    for (int it = 0; it < 20; ++it) {
      std::complex<long double> p = 0, dp = 0;
      for (int m = n; m >= 0; --m) {
        dp = dp * z + p;
        p = p * z + coef[m];
      }
      if (std::abs(dp) < 1e-30L) break;
      std::complex<long double> step = p / dp;
      z -= step;
      if (std::abs(step) < 1e-18L) break;
    }
    std::complex<long double> p = 0;
    for (int m = n; m >= 0; --m) p = p * z + coef[m];
    // repeated roots converge slowly; the tolerance is on |L(1/omega)| relative to scale
    if (std::abs(p) > 1e-6L) throw ComputeError("root finder did not converge");
    if (std::abs(std::abs(z) - 1.0L) > 1e-6L) throw ComputeError("reciprocal root off the Weil circle");
    phis.push_back(static_cast<double>(std::abs(std::arg(z))));
  }
  std::sort(phis.begin(), phis.end());
  std::vector<double> out;
  for (int j = 0; j + 1 < n + 1 && j < n; j += 2) {
    if (std::abs(phis[j] - phis[j + 1]) > 1e-4) throw ComputeError("roots are not in conjugate pairs");
    out.push_back(0.5 * (phis[j] + phis[j + 1]));
  }
  return out;
}

double g_lambda(const std::vector<double>& angles, int lambda) {
  double s = 0;
  for (double phi : angles) s += std::cos((lambda + 1) * phi);
  return 2 * s;
}

}  // namespace cubicff
