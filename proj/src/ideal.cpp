#include "cubicff/ideal.hpp"

#include <algorithm>
#include <sstream>

#include "cubicff/error.hpp"
#include "cubicff/infrastructure.hpp"
#include "cubicff/rng.hpp"

namespace cubicff {

// ---------------------------------------------------------------- elements

Order::Order(const CurveModel& c) : c_(c) {
  if (c.signature == Signature::UnitRankOne) exp_ = std::make_shared<const Expansion>(c);
}

Elem Order::one() const { return {Poly::constant(q(), 1), Poly(q()), Poly(q())}; }

Elem Order::mul(const Elem& a, const Elem& b) const {
  const Poly& G = c_.G;
  const Poly& H = c_.H;
  const Poly& GH = c_.GH;
  Elem r;
  r.u = a.u * b.u + GH * (a.v * b.w + a.w * b.v);
  r.v = a.u * b.v + a.v * b.u + G * (a.w * b.w);
  r.w = a.u * b.w + a.w * b.u + H * (a.v * b.v);
  return r;
}

Elem Order::scale(const Elem& a, const Poly& f) const { return {a.u * f, a.v * f, a.w * f}; }
Elem Order::add(const Elem& a, const Elem& b) const { return {a.u + b.u, a.v + b.v, a.w + b.w}; }
Elem Order::sub(const Elem& a, const Elem& b) const { return {a.u - b.u, a.v - b.v, a.w - b.w}; }

Poly Order::norm(const Elem& a) const {
  const Poly& G = c_.G;
  const Poly& GH = c_.GH;
  Poly n = a.u * a.u * a.u;
  if (!a.v.is_zero()) n += c_.F * (a.v * a.v * a.v);
  if (!a.w.is_zero()) n += G * GH * (a.w * a.w * a.w);
  if (!a.v.is_zero() && !a.w.is_zero() && !a.u.is_zero()) n -= (GH * (a.u * a.v * a.w)).scaled(3);
  return n;
}

Elem Order::adjugate(const Elem& a) const {
  const Poly& G = c_.G;
  const Poly& H = c_.H;
  Elem r;
  r.u = a.u * a.u - c_.GH * (a.v * a.w);
  r.v = G * (a.w * a.w) - a.u * a.v;
  r.w = H * (a.v * a.v) - a.u * a.w;
  return r;
}

Poly Order::trace(const Elem& a) const { return a.u.scaled(3); }

// ---------------------------------------------------------------- HNF

std::array<Elem, 3> Ideal::basis() const {
  const u64 q = a1.modulus();
  return {Elem{a1, Poly(q), Poly(q)}, Elem{a2, b2, Poly(q)}, Elem{a3, b3, c3}};
}

int Ideal::norm_degree() const { return a1.degree() + b2.degree() + c3.degree() - 3 * den.degree(); }

Ideal unit_ideal(const Order& o) {
  const u64 q = o.q();
  Poly one = Poly::constant(q, 1), zero(q);
  return Ideal{one, one, zero, zero, one, zero, one};
}

bool is_unit_ideal(const Ideal& a) {
  return a.den.is_one() && a.a1.is_one() && a.b2.is_one() && a.c3.is_one() && a.a2.is_zero() && a.a3.is_zero() &&
         a.b3.is_zero();
}

namespace {

struct Vec {
  Poly c[3];
  bool is_zero() const { return c[0].is_zero() && c[1].is_zero() && c[2].is_zero(); }
};

void sub_multiple(Vec& a, const Poly& k, const Vec& b, int upto) {
  for (int i = 0; i <= upto; ++i)
    if (!b.c[i].is_zero()) a.c[i] -= k * b.c[i];
}

void reduce_mod(Vec& a, const Poly& m, int upto) {
  if (m.is_zero()) return;
  for (int i = 0; i <= upto; ++i)
    if (a.c[i].degree() >= m.degree()) a.c[i] = a.c[i] % m;
}

// Eliminates coordinate k from all vectors but one; returns the pivot.
Vec eliminate(std::vector<Vec>& vs, int k, const Poly& m) {
  Vec pivot;
  bool have = false;
  std::vector<Vec> rest;
  for (auto& v : vs) {
    if (v.c[k].is_zero()) {
      if (!v.is_zero()) rest.push_back(std::move(v));
      continue;
    }
    if (!have) {
      pivot = std::move(v);
      have = true;
      continue;
    }
    Vec o = std::move(v);
    while (!o.c[k].is_zero()) {
      if (pivot.c[k].degree() < o.c[k].degree()) std::swap(pivot, o);
      // one division step of Euclid on coordinate k, applied to the whole vector
      Poly qt = pivot.c[k] / o.c[k];
      sub_multiple(pivot, qt, o, k);
      reduce_mod(pivot, m, k);
      std::swap(pivot, o);
    }
    if (!o.is_zero()) rest.push_back(std::move(o));
  }
  vs = std::move(rest);
  if (!have) throw ComputeError("hnf: generators do not span a rank-3 module");
  // make the diagonal monic
  const u64 inv = inv_mod(pivot.c[k].leading(), pivot.c[k].modulus());
  for (int i = 0; i <= k; ++i) pivot.c[i] = pivot.c[i].scaled(inv);
  return pivot;
}

}  // namespace

Ideal hnf(const Order& o, std::vector<Elem> gens, const Poly& den, const Poly& modulus) {
  const u64 q = o.q();
  std::vector<Vec> vs;
  vs.reserve(gens.size() + 3);
  for (auto& g : gens) {
    Vec v{{std::move(g.u), std::move(g.v), std::move(g.w)}};
    reduce_mod(v, modulus, 2);
    if (!v.is_zero()) vs.push_back(std::move(v));
  }
  if (!modulus.is_zero()) {
    for (int i = 0; i < 3; ++i) {
      Vec v{{Poly(q), Poly(q), Poly(q)}};
      v.c[i] = modulus;
      vs.push_back(std::move(v));
    }
  }
  Vec p3 = eliminate(vs, 2, modulus);
  Vec p2 = eliminate(vs, 1, modulus);
  Vec p1 = eliminate(vs, 0, modulus);
  Ideal r;
  r.a1 = p1.c[0];
  r.b2 = p2.c[1];
  r.c3 = p3.c[2];
  // off-diagonal reduction
  Poly k = p3.c[1] / r.b2;
  if (!k.is_zero()) sub_multiple(p3, k, p2, 1);
  r.b3 = p3.c[1];
  r.a3 = p3.c[0] % r.a1;
  r.a2 = p2.c[0] % r.a1;
  // lowest terms
  Poly g = den.monic();
  for (const Poly* e : {&r.a1, &r.a2, &r.a3, &r.b2, &r.b3, &r.c3}) {
    if (g.is_one()) break;
    g = gcd(g, *e);
  }
  r.den = den.monic();
  if (!g.is_one()) {
    r.den = r.den / g;
    for (Poly* e : {&r.a1, &r.a2, &r.a3, &r.b2, &r.b3, &r.c3}) *e = *e / g;
  }
  return r;
}

Ideal hnf(const Order& o, std::vector<Elem> gens, const Poly& den) {
  return hnf(o, std::move(gens), den, Poly(o.q()));
}

bool contains(const Ideal& a, const Elem& x, const Poly& den_x) {
  // x/den_x in (1/den) M  <=>  den * x in den_x * M
  const Poly& d = a.den;
  Poly u = x.u * d, v = x.v * d, w = x.w * d;
  Poly A1 = a.a1 * den_x, A2 = a.a2 * den_x, A3 = a.a3 * den_x;
  Poly B2 = a.b2 * den_x, B3 = a.b3 * den_x, C3 = a.c3 * den_x;
  auto [k3, r3] = Poly::divmod(w, C3);
  if (!r3.is_zero()) return false;
  v -= k3 * B3;
  u -= k3 * A3;
  auto [k2, r2] = Poly::divmod(v, B2);
  if (!r2.is_zero()) return false;
  u -= k2 * A2;
  return (u % A1).is_zero();
}

bool is_closed(const Order& o, const Ideal& a) {
  const u64 q = o.q();
  const Elem rho{Poly(q), Poly::constant(q, 1), Poly(q)};
  const Elem omega{Poly(q), Poly(q), Poly::constant(q, 1)};
  for (const Elem& b : a.basis()) {
    if (!contains(a, o.mul(rho, b), a.den)) return false;
    if (!contains(a, o.mul(omega, b), a.den)) return false;
  }
  return true;
}

Ideal ideal_mul(const Order& o, const Ideal& a, const Ideal& b) {
  std::vector<Elem> gens;
  gens.reserve(9);
  auto ba = a.basis(), bb = b.basis();
  for (const Elem& x : ba)
    for (const Elem& y : bb) gens.push_back(o.mul(x, y));
  return hnf(o, std::move(gens), a.den * b.den, a.a1 * b.a1);
}

Ideal principal_ideal(const Order& o, const Elem& x, const Poly& den) {
  const u64 q = o.q();
  const Elem rho{Poly(q), Poly::constant(q, 1), Poly(q)};
  const Elem omega{Poly(q), Poly(q), Poly::constant(q, 1)};
  Poly n = o.norm(x);
  if (n.is_zero()) throw InvalidInput("principal ideal of zero");
  return hnf(o, {x, o.mul(rho, x), o.mul(omega, x)}, den, n);
}

namespace {

// (1/x) M as (1/(den N(x))) xbar M; `m` is a polynomial known to lie in xbar M.
Ideal divide_impl(const Order& o, const Ideal& a, const Elem& x, const Poly& m) {
  Elem xb = o.adjugate(x);
  Poly n = o.norm(x);
  std::vector<Elem> gens;
  for (const Elem& b : a.basis()) gens.push_back(o.mul(xb, b));
  return hnf(o, std::move(gens), a.den * n, m.monic());
}

}  // namespace

Ideal quotient_by_member(const Order& o, const Ideal& a, const Elem& mu) {
  Ideal num = a;
  num.den = Poly::constant(o.q(), 1);
  return divide_impl(o, num, mu, o.norm(mu));
}

Ideal divide_by_element(const Order& o, const Ideal& a, const Elem& x) {
  Poly n = o.norm(x);
  if (n.is_zero()) throw InvalidInput("division by zero element");
  // N(x) a1 = xbar (x a1) lies in xbar M
  return divide_impl(o, a, x, n * a.a1);
}

Ideal ideal_inverse(const Order& o, const Ideal& a) {
  const u64 q = o.q();
  const CurveModel& c = o.curve();
  // dual module: coordinates T^{-1} B^{-T}; with B upper triangular the adjugate is explicit
  const Poly &a1 = a.a1, &a2 = a.a2, &a3 = a.a3, &b2 = a.b2, &b3 = a.b3, &c3 = a.c3;
  // inverse of B times det(B): rows of adj(B)
  Poly z(q);
  Poly adj[3][3] = {{b2 * c3, -(a2 * c3), a2 * b3 - a3 * b2}, {z, a1 * c3, -(a1 * b3)}, {z, z, a1 * b2}};
  // columns of B^{-T} det = rows of adj(B) read as columns: column j = (adj[j][0], adj[j][1], adj[j][2])
  std::vector<Elem> dual;
  for (int j = 0; j < 3; ++j) {
    // 3GH T^{-1} = [[GH,0,0],[0,0,1],[0,1,0]]
    dual.push_back(Elem{c.GH * adj[j][0], adj[j][2], adj[j][1]});
  }
  Poly det = a1 * b2 * c3;
  // A* = (a.den / (GH det)) span(dual); times c^2 with c = <GH, rho, omega>
  Ideal cc = hnf(o, {Elem{c.GH, z, z}, Elem{z, Poly::constant(q, 1), z}, Elem{z, z, Poly::constant(q, 1)}},
                 Poly::constant(q, 1), c.GH);
  Ideal c2 = ideal_mul(o, cc, cc);
  std::vector<Elem> gens;
  for (const Elem& d : dual)
    for (const Elem& e : c2.basis()) gens.push_back(o.scale(o.mul(d, e), a.den));
  return hnf(o, std::move(gens), c.GH * det);
}

// ---------------------------------------------------------------- primes

namespace {

Poly cube_root_of_unity_mod(const Poly& P) {
  const u64 q = P.modulus();
  const BigInt Q = big_pow(q, static_cast<unsigned>(P.degree()));
  for (u64 k = 2;; ++k) {
    std::vector<u64> digits;
    for (u64 t = k; t; t /= q) digits.push_back(t % q);
    Poly z = Poly(q, digits) % P;
    if (z.is_zero()) continue;
    Poly zeta = powmod(z, BigInt((Q - 1) / 3), P);
    if (!zeta.is_one()) return zeta;
    if (k > 100000) throw ComputeError("no cubic non-residue found");
  }
}

Ideal prime_from_root(const Order& o, const Poly& P, const Poly& r) {
  const u64 q = o.q();
  const CurveModel& c = o.curve();
  Poly s = mulmod(mulmod(r, r, P), invmod(c.H % P, P), P);
  Ideal p;
  p.den = Poly::constant(q, 1);
  p.a1 = P;
  p.a2 = (-r) % P;
  p.b2 = Poly::constant(q, 1);
  p.a3 = (-s) % P;
  p.b3 = Poly(q);
  p.c3 = Poly::constant(q, 1);
  return p;
}

}  // namespace

std::vector<Ideal> prime_ideals_above(const Order& o, const Poly& P0) {
  const CurveModel& c = o.curve();
  const u64 q = o.q();
  Poly P = P0.monic();
  SplitType st = classify_prime(c, P, 1);
  switch (st.tag) {
    case SplitTag::Inert: return {};
    case SplitTag::Ramified: {
      Poly one = Poly::constant(q, 1), zero(q);
      return {Ideal{one, P, zero, zero, one, zero, one}};
    }
    case SplitTag::Partial: {
      auto r = cube_root_mod(c.F, P);
      if (!r) throw ComputeError("partial prime without a cube root");
      return {prime_from_root(o, P, *r)};
    }
    case SplitTag::Split: {
      auto r = cube_root_mod(c.F, P);
      if (!r) throw ComputeError("split prime without a cube root");
      if (!(mulmod(mulmod(*r, *r, P), *r, P) == c.F % P)) throw ComputeError("cube root check failed");
      Poly zeta = cube_root_of_unity_mod(P);
      Poly r2 = mulmod(*r, zeta, P), r3 = mulmod(r2, zeta, P);
      std::vector<Ideal> out{prime_from_root(o, P, *r), prime_from_root(o, P, r2), prime_from_root(o, P, r3)};
      std::sort(out.begin(), out.end(), [](const Ideal& x, const Ideal& y) { return serialize(x) < serialize(y); });
      return out;
    }
  }
  return {};
}

Ideal prime_ideal_above(const Order& o, const Poly& P) {
  auto ps = prime_ideals_above(o, P);
  if (ps.empty()) throw InvalidInput("inert prime has no prime of degree deg P above it");
  return ps.front();
}

Ideal random_ideal(const Order& o, std::uint64_t seed) {
  const CurveModel& c = o.curve();
  const u64 q = o.q();
  Rng rng(seed);
  Ideal acc = unit_ideal(o);
  int taken = 0;
  const int want = c.genus + 2;
  for (int attempts = 0; taken < want; ++attempts) {
    if (attempts > 100 * want + 1000) throw ComputeError("random_ideal: too few small primes");
    // degree-two primes too: with few split linear primes the ramified ones (3-torsion) would dominate
    Poly P = rng.below(2) ? Poly(q, {rng.below(q), 1}) : Poly(q, {rng.below(q), rng.below(q), 1});
    if (P.degree() == 2 && !is_irreducible(P)) continue;
    auto ps = prime_ideals_above(o, P);
    if (ps.empty()) continue;
    const Ideal& p = ps[rng.below(ps.size())];
    acc = ideal_compose(o, acc, p);
    ++taken;
  }
  return acc;
}

// ---------------------------------------------------------------- reduction, signature (3,1)

namespace {

constexpr long kNegInf = -(1L << 40);

long offset(const CurveModel& c, int k) {
  const long dF = c.F.degree(), dH = c.H.degree();
  return k == 0 ? 0 : k == 1 ? dF : 2 * dF - 3 * dH;
}

struct Lead {
  long wdeg;
  int pos;
  u64 lc;
};

Lead lead_of(const CurveModel& c, const Elem& x) {
  Lead best{kNegInf, -1, 0};
  const Poly* comp[3] = {&x.u, &x.v, &x.w};
  for (int k = 0; k < 3; ++k) {
    if (comp[k]->is_zero()) continue;
    long d = 3L * comp[k]->degree() + offset(c, k);
    if (d > best.wdeg) best = {d, k, comp[k]->leading()};
  }
  return best;
}

// Shifted Popov-style reduction: afterwards the leading positions are distinct.
int popov_min(const CurveModel& c, std::array<Elem, 3>& B) {
  const u64 q = c.q;
  for (int guard = 0;; ++guard) {
    if (guard > 100000) throw ComputeError("lattice reduction did not terminate");
    Lead L[3];
    for (int i = 0; i < 3; ++i) L[i] = lead_of(c, B[i]);
    int hit_i = -1, hit_j = -1;
    for (int i = 0; i < 3 && hit_i < 0; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (L[i].pos == L[j].pos) {
          hit_i = i;
          hit_j = j;
          break;
        }
    if (hit_i < 0) {
      int best = 0;
      for (int i = 1; i < 3; ++i)
        if (L[i].wdeg < L[best].wdeg) best = i;
      return best;
    }
    int i = hit_i, j = hit_j;
    if (L[i].wdeg < L[j].wdeg) std::swap(i, j);
    const int k = static_cast<int>((L[i].wdeg - L[j].wdeg) / 3);
    const u64 f = mul_mod(L[i].lc, inv_mod(L[j].lc, q), q);
    const Poly m = Poly::monomial(q, f, k);
    B[i].u -= m * B[j].u;
    B[i].v -= m * B[j].v;
    B[i].w -= m * B[j].w;
  }
}

Reduced reduce_ramified(const Order& o, const Ideal& a) {
  const CurveModel& c = o.curve();
  std::array<Elem, 3> B = a.basis();
  const int i = popov_min(c, B);
  const Elem& mu = B[i];
  // (1/mu) (1/den) M with mu = alpha/den is (1/alpha) M
  Reduced r;
  r.delta = lead_of(c, mu).wdeg - 3L * a.den.degree();
  r.ideal = quotient_by_member(o, a, mu);
  return r;
}

}  // namespace

long weighted_degree(const CurveModel& c, const Elem& x) { return lead_of(c, x).wdeg; }

Reduced reduce_distinguished(const Order& o, const Ideal& a) {
  switch (o.curve().signature) {
    case Signature::Ramified: return reduce_ramified(o, a);
    case Signature::UnitRankOne: return reduce_rank_one(o, a);
    default: throw InvalidInput("reduction is only supported for signatures (3,1) and (1,1;1,2)");
  }
}

Ideal ideal_compose(const Order& o, const Ideal& a, const Ideal& b) {
  return reduce_distinguished(o, ideal_mul(o, a, b)).ideal;
}

Ideal ideal_pow(const Order& o, const Ideal& a, const BigInt& n) {
  if (n < 0) throw InvalidInput("negative exponent");
  Ideal r = unit_ideal(o);
  if (n == 0) return r;
  const Ideal base = reduce_distinguished(o, a).ideal;
  for (std::size_t i = msb(n) + 1; i-- > 0;) {
    r = ideal_compose(o, r, r);
    if (bit_test(n, i)) r = ideal_compose(o, r, base);
  }
  return r;
}

bool is_distinguished(const Order& o, const Ideal& a) { return reduce_distinguished(o, a).ideal == a; }

// ---------------------------------------------------------------- serialization

std::string serialize(const Ideal& a) {
  std::string s = std::to_string(a.a1.modulus());
  for (const Poly* p : {&a.a1, &a.a2, &a.a3})
    s += '|', s += p->to_string();
  s += "|0|";
  s += a.b2.to_string();
  s += '|';
  s += a.b3.to_string();
  s += "|0|0|";
  s += a.c3.to_string();
  s += '|';
  s += a.den.to_string();
  return s;
}

std::string wire_serialize(const Ideal& a) { return "v1|" + serialize(a); }

Ideal parse_ideal(const std::string& s0) {
  std::string s = s0.rfind("v1|", 0) == 0 ? s0.substr(3) : s0;
  std::vector<std::string> f;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, '|')) f.push_back(tok);
  if (f.size() != 11) throw InvalidInput("bad ideal serialization");
  const u64 q = parse_u64(f[0]);
  auto P = [&](int i) { return Poly::parse(q, f[i]); };
  if (!P(4).is_zero() || !P(7).is_zero() || !P(8).is_zero()) throw InvalidInput("ideal matrix not triangular");
  Ideal a;
  a.a1 = P(1);
  a.a2 = P(2);
  a.a3 = P(3);
  a.b2 = P(5);
  a.b3 = P(6);
  a.c3 = P(9);
  a.den = P(10);
  return a;
}

}  // namespace cubicff
