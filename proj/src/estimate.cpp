#include "cubicff/estimate.hpp"

#include <cmath>

#include "cubicff/error.hpp"

namespace cubicff {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::E1U1: return "E1U1";
    case Variant::E2U2: return "E2U2";
    case Variant::E2U3: return "E2U3";
  }
  return "?";
}

Variant parse_variant(const std::string& s) {
  if (s == "E1U1") return Variant::E1U1;
  if (s == "E2U2") return Variant::E2U2;
  if (s == "E2U3") return Variant::E2U3;
  throw InvalidInput("unknown variant '" + s + "'");
}

namespace {

bool q_pow_is_one(u64 q, int nu) { return q % 3 == 1 || nu % 2 == 0; }

}  // namespace

std::int64_t s_scan(const CurveModel& c, int nu, u64 lo, u64 hi) {
  const u64 q = c.q;
  if (!q_pow_is_one(q, nu)) return 0;
  std::int64_t s = 0;
  if (nu == 1) {
    hi = std::min(hi, q);
    for (u64 cc = lo; cc < hi; ++cc) {
      // P = x + cc, root -cc
      const u64 root = neg_mod(cc, q);
      if (c.GH.eval(root) == 0) continue;
      s += pow_mod(c.F.eval(root), (q - 1) / 3, q) == 1 ? 2 : -1;
    }
    return s;
  }
  for_each_irreducible(q, nu, lo, hi, [&](const Poly& P) { s += z_power_sum(c, P, 1); });
  return s;
}

std::int64_t s_scan_full_serial(const CurveModel& c, int nu) { return s_scan(c, nu, 0, monic_count(c.q, nu)); }

std::int64_t s_scan_full(const CurveModel& c, int nu) {
  const u64 total = monic_count(c.q, nu);
  const u64 block = 1 << 14;
  const long nblocks = static_cast<long>((total + block - 1) / block);
  std::int64_t s = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : s)
  for (long b = 0; b < nblocks; ++b) {
    const u64 lo = static_cast<u64>(b) * block;
    s += s_scan(c, nu, lo, std::min(total, lo + block));
  }
  return s;
}

SnuTable build_snu_table(const CurveModel& c, int max_nu) {
  SnuTable t;
  t.q = c.q;
  auto ddf = distinct_degree_counts(c.GH);
  for (int nu = 1; nu <= max_nu; ++nu) {
    SnuRow r;
    r.nu = nu;
    r.I = count_irreducibles(c.q, nu);
    r.Fnu = ddf.count(nu) ? ddf[nu] : 0;
    r.q_is_one = q_pow_is_one(c.q, nu);
    r.S1 = r.q_is_one ? s_scan_full(c, nu) : 0;
    t.rows[nu] = r;
  }
  return t;
}

BigInt s_value(const SnuTable& t, int nu, long n) {
  auto it = t.rows.find(nu);
  if (it == t.rows.end()) throw InvalidInput("S_nu requested beyond the table");
  const SnuRow& r = it->second;
  const long m = ((n - 1) % 6 + 6) % 6 + 1;
  const BigInt full = 2 * (r.I - r.Fnu);
  if (!r.q_is_one) return m % 2 == 0 ? full : BigInt(0);
  return m % 3 == 0 ? full : BigInt(r.S1);
}

namespace {

BigInt to_bigint(const BigFloat& x, mpfr_rnd_t mode) {
  BigInt z;
  mpfr_get_z(z.backend().data(), x.backend().data(), mode);
  return z;
}

struct PrecisionScope {
  unsigned saved;
  explicit PrecisionScope(unsigned digits) : saved(BigFloat::default_precision()) {
    BigFloat::default_precision(digits);
  }
  ~PrecisionScope() { BigFloat::default_precision(saved); }
};

int smallest_prime_factor(int n) {
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) return p;
  return n;
}

}  // namespace

Estimate estimate(const CurveModel& c, Variant v, std::optional<int> lambda_override, unsigned extra_bits) {
  if (c.signature == Signature::Inert) throw InvalidInput("signature (1,3) is not supported");
  const int g = c.genus;
  const int lambda = lambda_override.value_or(c.lambda);
  if (lambda < 0) throw InvalidInput("lambda must be >= 0");
  const u64 q = c.q;
  const unsigned bits = static_cast<unsigned>(msb(big_pow(q, g + 2))) + 1 + 64 + extra_bits;
  PrecisionScope scope(static_cast<unsigned>(bits * 0.30103) + 2);

  Estimate est;
  est.variant = v;
  est.lambda = lambda;
  est.table = build_snu_table(c, lambda);

  const BigFloat Q(q);
  const BigFloat A = (g + 2) * log(Q) - log((Q - c.x1) * (Q - c.x2));
  BigFloat logE = A;
  const bool use_e1 = v == Variant::E1U1 || lambda == 0;
  if (use_e1) {
    for (int n = 1; n <= lambda; ++n) {
      BigInt inner = 0;
      for (int nu = 1; nu <= n; ++nu)
        if (n % nu == 0) inner += nu * s_value(est.table, nu, n / nu);
      logE += BigFloat(inner) / (n * pow(Q, n));
    }
  } else {
    for (int nu = 1; nu <= lambda; ++nu) {
      const BigFloat X = pow(Q, nu);
      const BigFloat S1(s_value(est.table, nu, 1));
      if (q_pow_is_one(q, nu)) {
        const BigFloat S3(s_value(est.table, nu, 3));
        logE += -S1 * log((X - 1) / X) + (S1 - S3) / 3 * log((pow(X, 3) - 1) / pow(X, 3));
      } else {
        const BigFloat S2(s_value(est.table, nu, 2));
        logE += -S1 * log((X - 1) / X) + (S1 - S2) / 2 * log((X * X - 1) / (X * X));
      }
    }
  }

  BigFloat psi;
  const BigFloat sq = sqrt(Q);
  if (use_e1) {
    BigFloat s_half = 0, s_full = 0;
    for (int n = 1; n <= lambda; ++n) {
      s_half += 1 / (n * pow(sq, n));
      s_full += 1 / (n * pow(Q, n));
    }
    psi = 2 * g * (log(sq / (sq - 1)) - s_half) + 2 * log(Q / (Q - 1)) - 2 * s_full;
    if (v != Variant::E1U1) est.note = "lambda = 0: the E2 bounds need lambda >= 1, psi_1 used";
  } else {
    const int L1 = lambda + 1, L2 = lambda + 2;
    const int l = smallest_prime_factor(L1);
    const BigFloat ql = pow(Q, BigFloat(l - 1) / l);
    const BigFloat tail = 2 * g / BigFloat(L2) * (sq / (sq - 1)) * pow(Q, -BigFloat(L2) / 2) +
                          4 / BigFloat(L2) * (Q / (Q - 1)) * (ql / (ql - 1)) * pow(Q, -BigFloat(L2) * (l - 1) / l);
    if (v == Variant::E2U2) {
      psi = 2 / BigFloat(L1) * (g * pow(Q, -BigFloat(L1) / 2) + pow(Q, -L1)) +
            2 * Q / ((Q - 1) * L1) * pow(Q, -L1) * (pow(Q, BigFloat(L1) / l) - 1) + tail;
    } else {
      BigInt extra = 0;
      for (int nu = 1; nu < L1; ++nu)
        if (L1 % nu == 0) extra += nu * s_value(est.table, nu, L1 / nu);
      psi = 2 * g / BigFloat(L1) * pow(Q, -BigFloat(L1) / 2) + pow(Q, -L1) / L1 * (2 + BigFloat(abs(extra))) + tail;
    }
  }

  const BigFloat Ep = exp(logE);
  est.logE = logE;
  est.psi = psi;
  est.E = to_bigint(Ep, MPFR_RNDN);
  est.U = to_bigint(Ep * (exp(psi) - 1), MPFR_RNDU);
  if (est.U < 1) est.U = 1;
  est.interval_ok = 2 * (est.E - est.U) > est.E + est.U;
  return est;
}

double estimate_ratio(const Estimate& e, const BigInt& h) {
  BigInt d = abs(h - e.E);
  return static_cast<double>(d.convert_to<long double>() / e.U.convert_to<long double>());
}

}  // namespace cubicff
