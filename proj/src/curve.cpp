#include "cubicff/curve.hpp"

#include <numeric>

#include "cubicff/error.hpp"

namespace cubicff {

std::string to_string(Signature s) {
  switch (s) {
    case Signature::Ramified: return "(3,1)";
    case Signature::UnitRankOne: return "(1,1;1,2)";
    case Signature::UnitRankTwo: return "(1,1;1,1;1,1)";
    case Signature::Inert: return "(1,3)";
  }
  return "?";
}

const char* to_string(SplitTag t) {
  switch (t) {
    case SplitTag::Ramified: return "Ramified";
    case SplitTag::Partial: return "Partial";
    case SplitTag::Split: return "Split";
    case SplitTag::Inert: return "Inert";
  }
  return "?";
}

int lambda_for_genus(int g) {
  // floor((2g-1)/5) when g = 2 mod 5, nearest integer otherwise
  const int n = 2 * g - 1;
  if (g % 5 == 2) return n / 5;
  return (2 * n + 5) / 10;
}

CurveModel new_curve(u64 q, const Poly& G, const Poly& H) {
  if (q < 5) throw InvalidInput("q must be at least 5");
  if (!is_prime_u64(q)) throw InvalidInput("q must be prime");
  if (G.modulus() != q || H.modulus() != q) throw InvalidInput("G, H must be over F_q");
  if (!G.is_monic() || !H.is_monic()) throw InvalidInput("G and H must be monic");
  if (!G.is_squarefree() || !H.is_squarefree()) throw InvalidInput("G and H must be squarefree");
  if (gcd(G, H).degree() != 0) throw InvalidInput("G and H must be coprime");
  CurveModel c;
  c.q = q;
  c.G = G;
  c.H = H;
  c.GH = G * H;
  c.F = c.GH * H;
  const int dF = c.F.degree(), dGH = c.GH.degree();
  c.genus = dF % 3 == 0 ? dGH - 2 : dGH - 1;
  if (c.genus < 1) throw InvalidInput("genus must be at least 1");
  if (dF % 3 != 0) {
    c.signature = Signature::Ramified;
  } else if (q % 3 == 2) {
    c.signature = Signature::UnitRankOne;
    c.x1 = 1;
    c.x2 = -1;
  } else {
    c.signature = Signature::UnitRankTwo;
    c.x1 = 1;
    c.x2 = 1;
  }
  c.lambda = lambda_for_genus(c.genus);
  return c;
}

CurveModel new_curve(const std::string& q, const std::string& G, const std::string& H) {
  u64 qq = parse_u64(q);
  if (qq < 5 || !is_prime_u64(qq)) throw InvalidInput("q must be a prime >= 5");
  return new_curve(qq, Poly::parse(qq, G), Poly::parse(qq, H));
}

int SplitType::places() const {
  switch (tag) {
    case SplitTag::Ramified: return 1;
    case SplitTag::Partial: return 2;
    case SplitTag::Split: return 3;
    case SplitTag::Inert: return 1;
  }
  return 0;
}
int SplitType::ramification() const { return tag == SplitTag::Ramified ? 3 : 1; }
int SplitType::residue_degree() const { return tag == SplitTag::Inert ? 3 : 1; }

namespace {

// q^e mod 3 for e >= 1
int q_pow_mod3(u64 q, long e) {
  int r = static_cast<int>(q % 3);
  return r == 1 || e % 2 == 0 ? 1 : 2;
}

}  // namespace

SplitType classify_prime(const CurveModel& c, const Poly& P, int k) {
  if (k < 1) throw InvalidInput("extension degree must be >= 1");
  if (!P.is_monic() || !is_irreducible(P)) throw InvalidInput("classify_prime needs a monic irreducible");
  if ((c.F % P).is_zero()) return {SplitTag::Ramified};
  const long d = P.degree();
  const long L = std::lcm(d, static_cast<long>(k));  // residue degree of the P-factors over F_{q^k}
  if (q_pow_mod3(c.q, L) == 2) {
    // the partial case for the factor; note Partial places have degrees 1 and 2 relative to it
    return {SplitTag::Partial};
  }
  bool cube;
  if (q_pow_mod3(c.q, d) == 2) {
    cube = true;  // every element of F_{q^d} is a cube
  } else {
    cube = cubic_residue_symbol_unchecked(c.F, P) == CubicSymbol::One || (L / d) % 3 == 0;
  }
  return {cube ? SplitTag::Split : SplitTag::Inert};
}

int z_power_sum(const CurveModel& c, const Poly& P, long n) {
  if (n < 1) throw InvalidInput("n must be >= 1");
  if ((c.GH % P).is_zero()) return 0;
  const long d = P.degree();
  if (q_pow_mod3(c.q, d) == 2) return n % 2 == 0 ? 2 : 0;
  if (n % 3 == 0) return 2;
  return cubic_residue_symbol_unchecked(c.F, P) == CubicSymbol::One ? 2 : -1;
}

FamilyReport family_filter(const CurveModel& c) {
  FamilyReport r;
  r.genus_ok = c.genus >= 4;
  r.deg_order_ok = c.H.degree() >= 1 && c.H.degree() <= c.G.degree();
  r.not_superelliptic_equivalent = true;
  if (c.deg_F() % 3 == 0) {
    // GH has a root in F_q iff gcd(GH, x^q - x) is nontrivial
    Poly xq = powmod(Poly::x(c.q), c.q, c.GH);
    r.not_superelliptic_equivalent = gcd(xq - Poly::x(c.q), c.GH).degree() == 0;
  }
  return r;
}

Normalized normalize_curve(u64 q, const Poly& G0, const Poly& H0) {
  if (q < 5 || !is_prime_u64(q)) throw InvalidInput("q must be a prime >= 5");
  if (G0.is_zero() || H0.is_zero()) throw InvalidInput("G and H must be nonzero");
  const u64 cf = mul_mod(G0.leading(), mul_mod(H0.leading(), H0.leading(), q), q);
  const Poly G = G0.monic(), H = H0.monic();
  const int n = G.degree() + 2 * H.degree();
  u64 l = 1, s = 1;  // x = l x', Y = s Y', need cf * l^n = s^3
  if (n % 3 != 0) {
    const int t = n % 3 == 1 ? 2 : 1;  // 1 + t n = 0 mod 3
    l = pow_mod(cf, t, q);
    const u64 e = (1 + static_cast<u64>(t) * n) / 3;
    s = pow_mod(cf, e, q);
  } else {
    auto r = cube_root_mod(Poly::constant(q, cf), Poly::x(q));
    if (!r) throw InvalidInput("leading coefficient is not a cube: signature (1,3) is not supported");
    s = (*r)[0];
  }
  auto rescale = [&](const Poly& f) {
    // f(l x) / l^deg f
    std::vector<u64> c(f.coeffs());
    const int d = f.degree();
    const u64 linv = inv_mod(l, q);
    for (int i = 0; i <= d; ++i) c[i] = mul_mod(c[i], pow_mod(linv, d - i, q), q);
    return Poly(q, std::move(c));
  };
  Normalized out;
  out.curve = new_curve(q, rescale(G), rescale(H));
  out.x_scale = l;
  out.y_scale = s;
  return out;
}

}  // namespace cubicff
