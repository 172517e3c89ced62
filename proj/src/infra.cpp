#include "cubicff/infrastructure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cubicff/error.hpp"
#include "cubicff/hash.hpp"

namespace cubicff {

// ---------------------------------------------------------------- series

Expansion::Expansion(const CurveModel& c) : c_(c) {
  if (c.F.degree() % 3 != 0 || !c.F.is_monic()) throw InvalidInput("expansion needs 3 | deg F and monic F");
  k_ = c.F.degree() / 3;
  k2_ = 2 * k_ - c.H.degree();
  cache_ = compute(static_cast<std::size_t>(8 * c.genus + 3 * c.F.degree() + 64));
}

std::shared_ptr<const ExpansionTerms> Expansion::compute(std::size_t n) const {
  const u64 q = c_.q;
  const int dF = c_.F.degree(), dH = c_.H.degree();
  auto fco = [&](std::size_t i) -> u64 { return i <= static_cast<std::size_t>(dF) ? c_.F[dF - i] : 0; };
  auto hco = [&](std::size_t i) -> u64 { return i <= static_cast<std::size_t>(dH) ? c_.H[dH - i] : 0; };
  const u64 inv3 = inv_mod(3 % q, q);
  // s^3 = f(t) with s(0) = 1, p = s^2
  std::vector<u64> s(n, 0), p(n, 0);
  s[0] = 1;
  p[0] = 1;
  for (std::size_t m = 1; m < n; ++m) {
    u64 A = 0, B = 0;
    for (std::size_t i = 1; i < m; ++i) {
      A = add_mod(A, mul_mod(s[i], s[m - i], q), q);
      B = add_mod(B, mul_mod(s[i], p[m - i], q), q);
    }
    s[m] = mul_mod(sub_mod(sub_mod(fco(m), A, q), B, q), inv3, q);
    p[m] = add_mod(add_mod(s[m], s[m], q), A, q);
  }
  // omega0 = x^{k2} p(t)/h(t)
  std::vector<u64> w(n, 0);
  for (std::size_t m = 0; m < n; ++m) {
    u64 acc = p[m];
    for (std::size_t i = 1; i <= std::min<std::size_t>(m, dH); ++i) acc = sub_mod(acc, mul_mod(hco(i), w[m - i], q), q);
    w[m] = acc;
  }
  auto t = std::make_shared<ExpansionTerms>();
  t->rho = std::move(s);
  t->omega = std::move(w);
  return t;
}

std::shared_ptr<const ExpansionTerms> Expansion::terms(std::size_t n) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (cache_->rho.size() < n) cache_ = compute(std::max(n, 2 * cache_->rho.size()));
  return cache_;
}

// ---------------------------------------------------------------- embedding

namespace {

constexpr long kMinusInf = std::numeric_limits<long>::min() / 4;

// Coefficients of c0 = u + v rho0 + w omega0, c1 = u - w omega0, c2 = v rho0 - w omega0
// at x^e for floor <= e <= top.
struct Emb {
  long top = 0, floor = 0;
  std::vector<u64> c[3];
  bool zero1 = false, zero2 = false;  // c1, c2 identically zero

  u64 at(int i, long e) const {
    if (e > top || e < floor) return 0;
    return c[i][static_cast<std::size_t>(top - e)];
  }
  // degree, kMinusInf if zero, floor - 1 if only known to be below the floor
  long deg(int i) const {
    if ((i == 1 && zero1) || (i == 2 && zero2)) return kMinusInf;
    for (std::size_t t = 0; t < c[i].size(); ++t)
      if (c[i][t]) return top - static_cast<long>(t);
    return floor - 1;
  }
};

// sum_j a_j x^j * series(x^{kk - i}) at degrees floor..top into out (added with sign)
void poly_times_series(const Poly& a, const std::vector<u64>& ser, long kk, long top, long floor,
                       std::vector<u64>& out, u64 q) {
  if (a.is_zero()) return;
  const auto& co = a.coeffs();
  for (long e = top; e >= floor; --e) {
    u128 acc = 0;
    int cnt = 0;
    // index i = kk + j - e >= 0, i < ser.size()
    long jlo = std::max<long>(0, e - kk);
    long jhi = std::min<long>(a.degree(), e - kk + static_cast<long>(ser.size()) - 1);
    for (long j = jlo; j <= jhi; ++j) {
      if (!co[j]) continue;
      acc += static_cast<u128>(co[j]) * ser[static_cast<std::size_t>(kk + j - e)];
      if (++cnt == 8) {
        acc %= q;
        cnt = 0;
      }
    }
    out[static_cast<std::size_t>(top - e)] = static_cast<u64>(acc % q);
  }
}

Emb embed(const Order& o, const Elem& x, long floor) {
  const Expansion& ex = *o.expansion();
  const u64 q = o.q();
  const long k = ex.k(), k2 = ex.k2();
  Emb r;
  r.floor = floor;
  long top = floor - 1;
  if (!x.u.is_zero()) top = std::max<long>(top, x.u.degree());
  if (!x.v.is_zero()) top = std::max<long>(top, x.v.degree() + k);
  if (!x.w.is_zero()) top = std::max<long>(top, x.w.degree() + k2);
  r.top = top;
  r.zero1 = x.u.is_zero() && x.w.is_zero();
  r.zero2 = x.v.is_zero() && x.w.is_zero();
  const std::size_t len = static_cast<std::size_t>(top - floor + 1);
  long need = 1;
  if (!x.v.is_zero()) need = std::max(need, k + x.v.degree() - floor + 1);
  if (!x.w.is_zero()) need = std::max(need, k2 + x.w.degree() - floor + 1);
  auto t = ex.terms(static_cast<std::size_t>(need));
  std::vector<u64> A(len, 0), B(len, 0);
  poly_times_series(x.v, t->rho, k, top, floor, A, q);
  poly_times_series(x.w, t->omega, k2, top, floor, B, q);
  for (int i = 0; i < 3; ++i) r.c[i].assign(len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    const long e = top - static_cast<long>(i);
    const u64 ue = e >= 0 ? x.u[static_cast<std::size_t>(e)] : 0;
    r.c[0][i] = add_mod(add_mod(ue, A[i], q), B[i], q);
    r.c[1][i] = sub_mod(ue, B[i], q);
    r.c[2][i] = sub_mod(A[i], B[i], q);
  }
  return r;
}

// Basis of the numerator module with cached embeddings; reduction w.r.t.
// nu(x) = max(deg0 x, deg1 x + s).
class Lattice {
 public:
  Lattice(const Order& o, const Ideal& a) : o_(o) {
    b_ = a.basis();
    n_ = a.a1.degree() + a.b2.degree() + a.c3.degree();
    floor_ = std::numeric_limits<long>::max();
  }

  // smallest nu over the module, with an element attaining it
  struct Result {
    long nu;
    int index;
  };

  Result reduce(long s) {
    // any nonzero x in M has deg N(x) >= n, so 3 nu >= n + 2s
    const long numin = floor_div(n_ + 2 * s + 2, 3);
    const long need = std::min(numin, numin - s) - 1;
    if (need < floor_) {
      floor_ = need - 4;
      for (int i = 0; i < 3; ++i) e_[i] = embed(o_, b_[i], floor_);
    }
    const u64 q = o_.q();
    for (int guard = 0;; ++guard) {
      if (guard > 10000) throw ComputeError("infinite-place lattice reduction did not terminate");
      long nu[3];
      u64 L[3][3];
      for (int i = 0; i < 3; ++i) {
        const long d0 = e_[i].deg(0);
        const long d1 = std::max(e_[i].deg(1), e_[i].deg(2));
        nu[i] = std::max(d0, d1 == kMinusInf ? kMinusInf : d1 + s);
        if (nu[i] < numin) throw ComputeError("degree below the norm bound (precision or lattice bug)");
        L[i][0] = e_[i].at(0, nu[i]);
        L[i][1] = e_[i].at(1, nu[i] - s);
        L[i][2] = e_[i].at(2, nu[i] - s);
      }
      u64 lam[3];
      if (!null_combination(L, q, lam)) {
        int best = 0;
        for (int i = 1; i < 3; ++i)
          if (nu[i] < nu[best]) best = i;
        return {nu[best], best};
      }
      int j = -1;
      for (int i = 0; i < 3; ++i)
        if (lam[i] && (j < 0 || nu[i] > nu[j])) j = i;
      const u64 inv = inv_mod(lam[j], q);
      Elem nb = b_[j];
      for (int i = 0; i < 3; ++i) {
        if (i == j || !lam[i]) continue;
        const Poly m = Poly::monomial(q, mul_mod(lam[i], inv, q), static_cast<int>(nu[j] - nu[i]));
        nb.u += m * b_[i].u;
        nb.v += m * b_[i].v;
        nb.w += m * b_[i].w;
      }
      b_[j] = std::move(nb);
      e_[j] = embed(o_, b_[j], floor_);
    }
  }

  const Elem& element(int i) const { return b_[i]; }
  long deg0(int i) const { return e_[i].deg(0); }

 private:
  static long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

  // nonzero lam with sum lam_i L[i] = 0, if the rows are dependent
  static bool null_combination(const u64 L[3][3], u64 q, u64 lam[3]) {
    // Gaussian elimination on the 3x3 matrix whose columns are the rows L[i]
    u64 A[3][3];
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) A[r][c] = L[c][r];
    int piv_col[3] = {-1, -1, -1};
    int row = 0;
    bool is_pivot[3] = {false, false, false};
    for (int c = 0; c < 3 && row < 3; ++c) {
      int p = -1;
      for (int r = row; r < 3; ++r)
        if (A[r][c]) {
          p = r;
          break;
        }
      if (p < 0) continue;
      std::swap(A[p], A[row]);
      const u64 inv = inv_mod(A[row][c], q);
      for (int cc = 0; cc < 3; ++cc) A[row][cc] = mul_mod(A[row][cc], inv, q);
      for (int r = 0; r < 3; ++r) {
        if (r == row || !A[r][c]) continue;
        const u64 f = A[r][c];
        for (int cc = 0; cc < 3; ++cc) A[r][cc] = sub_mod(A[r][cc], mul_mod(f, A[row][cc], q), q);
      }
      piv_col[row] = c;
      is_pivot[c] = true;
      ++row;
    }
    if (row == 3) return false;
    int free_c = 0;
    while (is_pivot[free_c]) ++free_c;
    lam[0] = lam[1] = lam[2] = 0;
    lam[free_c] = 1;
    for (int r = 0; r < row; ++r) lam[piv_col[r]] = neg_mod(A[r][free_c], q);
    return true;
  }

  const Order& o_;
  std::array<Elem, 3> b_;
  std::array<Emb, 3> e_;
  long n_ = 0;
  long floor_;
};

}  // namespace

InfDegrees infinite_degrees(const Order& o, const Elem& x) {
  if (!o.expansion()) throw InvalidInput("infinite degrees need signature (1,1;1,2)");
  if (x.is_zero()) return {kMinusInf, kMinusInf};
  // deg N(x) = deg0 + 2 deg1 >= 0 for integral x, so neither degree is below -2 * (top)
  long top = 0;
  if (!x.u.is_zero()) top = std::max<long>(top, x.u.degree());
  if (!x.v.is_zero()) top = std::max<long>(top, x.v.degree() + o.expansion()->k());
  if (!x.w.is_zero()) top = std::max<long>(top, x.w.degree() + o.expansion()->k2());
  Emb e = embed(o, x, -2 * top - 8);
  return {e.deg(0), std::max(e.deg(1), e.deg(2))};
}

Reduced reduce_rank_one(const Order& o, const Ideal& a) {
  const CurveModel& c = o.curve();
  const long T = a.den.degree();
  Lattice lat(o, a);
  auto feasible = [&](long t, long m, Elem* out) {
    auto r = lat.reduce(t - m);
    if (r.nu > t) return false;
    if (out) *out = lat.element(r.index);
    return true;
  };
  // The minimum with balanced degrees: least max(deg0, deg1), ties to the larger deg0.
  const long mu = lat.reduce(0).nu;
  const long cap = 4L * c.genus + 8;
  long m = mu;
  Elem best, cand;
  feasible(mu, m, &best);
  while (feasible(mu, m - 1, &cand)) {
    --m;
    best = cand;
    if (mu - m > cap) throw ComputeError("reduction: deg1 search did not settle");
  }
  long t = mu;
  while (feasible(t - 1, m, &cand)) {
    --t;
    best = cand;
    if (mu - t > cap) throw ComputeError("reduction: deg0 search did not settle");
  }
  Reduced r;
  r.delta = t - T;
  r.ideal = quotient_by_member(o, a, best);
  return r;
}

Reduced next_minimum(const Order& o, const Ideal& a) {
  const CurveModel& c = o.curve();
  const long T = a.den.degree();
  Lattice lat(o, a);
  Elem theta;
  for (long t = T + 1;; ++t) {
    if (t - T > 4L * c.genus + 8) throw ComputeError("baby step: no next minimum within the bound");
    auto r = lat.reduce(t - (T - 1));
    if (r.nu <= t) {
      theta = lat.element(r.index);
      Reduced out;
      out.delta = t - T;
      out.ideal = quotient_by_member(o, a, theta);
      return out;
    }
  }
}

// ---------------------------------------------------------------- infrastructure

std::string serialize(const InfraDivisor& d) { return serialize(d.ideal) + "|d=" + d.delta.str(); }

double tau_lookup(int g, int degG, int degH) {
  struct Row {
    int g, dG, dH;
    double tau;
  };
  static const Row rows[] = {{2, 2, 2, 2.96977}, {3, 4, 1, 2.92374}, {4, 6, 0, 3.87316},
                             {4, 3, 3, 4.11812}, {5, 5, 2, 5.29813}, {6, 7, 1, 5.86166},
                             {6, 4, 4, 6.10144}, {7, 9, 0, 7.50799}, {7, 6, 3, 7.72477}};
  const Row* best = nullptr;
  long best_d = 0;
  for (const Row& r : rows) {
    const long d = 100L * std::abs(r.g - g) + std::abs(r.dG - degG) + std::abs(r.dH - degH);
    if (!best || d < best_d) {
      best = &r;
      best_d = d;
    }
  }
  return best->tau;
}

Infrastructure::Infrastructure(const CurveModel& c) : o_(c) {
  if (c.signature != Signature::UnitRankOne) throw InvalidInput("infrastructure needs signature (1,1;1,2)");
}

InfraDivisor Infrastructure::identity() const { return {unit_ideal(o_), BigInt(0)}; }

InfraDivisor Infrastructure::baby_step(const InfraDivisor& d) const {
  Reduced r = next_minimum(o_, d.ideal);
  return {std::move(r.ideal), d.delta + r.delta};
}

std::pair<InfraDivisor, long> Infrastructure::giant_step(const InfraDivisor& a, const InfraDivisor& b) const {
  Reduced r = reduce_rank_one(o_, ideal_mul(o_, a.ideal, b.ideal));
  const long g = curve().genus;
  if (r.delta < -2 * g || r.delta > 0) throw ComputeError("giant step: deg psi outside [-2g, 0]");
  return {InfraDivisor{std::move(r.ideal), a.delta + b.delta + r.delta}, r.delta};
}

InfraDivisor Infrastructure::walk_to(InfraDivisor d, const BigInt& n) const {
  const int cap = 4 * curve().genus + 8;
  for (int i = 0;; ++i) {
    InfraDivisor nb = baby_step(d);
    if (nb.delta > n) return d;
    if (i >= cap) throw ComputeError("below: correction walk exceeded 4g+8 baby steps");
    d = std::move(nb);
  }
}

InfraDivisor Infrastructure::below(const BigInt& n) const {
  if (n < 0) throw InvalidInput("below: negative distance");
  InfraDivisor d = identity();
  if (n == 0) return walk_to(d, n);
  BigInt t = 0;
  for (std::size_t i = msb(n) + 1; i-- > 0;) {
    if (t > 0) {
      d = giant_step(d, d).first;
      t *= 2;
      d = walk_to(std::move(d), t);
    }
    if (bit_test(n, i)) {
      t += 1;
      d = walk_to(std::move(d), t);
    }
  }
  return d;
}

bool Infrastructure::in_s_tau(const InfraDivisor& d, const TauConfig& cfg) const {
  if (cfg.tau <= 1.0) return true;
  if (cfg.rule == TauRule::Footnote) {
    const u64 bound = static_cast<u64>(std::llround(static_cast<double>(curve().q) / cfg.tau));
    return d.ideal.den[0] < bound;
  }
  const u64 mod = static_cast<u64>(std::llround(cfg.tau * 65536.0));
  return mix_bytes(serialize(d.ideal), kKeyTau) % mod < 65536;
}

}  // namespace cubicff
