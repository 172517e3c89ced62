#pragma once
// Purely cubic curve Y^3 = G H^2 over F_q.

#include <string>

#include "cubicff/irreducible.hpp"
#include "cubicff/poly.hpp"

namespace cubicff {

enum class Signature { Ramified, UnitRankOne, UnitRankTwo, Inert };
// "(3,1)", "(1,1;1,2)", "(1,1;1,1;1,1)", "(1,3)"
std::string to_string(Signature s);

struct CurveModel {
  u64 q = 0;
  Poly G, H, F, GH;
  int genus = 0;
  Signature signature = Signature::Ramified;
  int lambda = 0;
  int x1 = 0, x2 = 0;

  int deg_F() const { return F.degree(); }
};

// Validates and classifies. Throws InvalidInput on bad input.
CurveModel new_curve(u64 q, const Poly& G, const Poly& H);
CurveModel new_curve(const std::string& q, const std::string& G, const std::string& H);

int lambda_for_genus(int g);

enum class SplitTag { Ramified, Partial, Split, Inert };
const char* to_string(SplitTag t);

struct SplitType {
  SplitTag tag;
  // z-pair encoded by the tag: Ramified (0,0), Partial (1,-1), Split (1,1), Inert (iota, iota^2)
  int places() const;         // number of places above P (over the extension)
  int ramification() const;   // e of each
  int residue_degree() const; // f of each, relative to the P-factor degree
};

// Splitting of P (irreducible over F_q) in the constant extension of degree k.
SplitType classify_prime(const CurveModel& c, const Poly& P, int k = 1);

// z_1(P)^n + z_2(P)^n in {-1, 0, 2}.
int z_power_sum(const CurveModel& c, const Poly& P, long n);

struct FamilyReport {
  bool genus_ok = false;
  bool not_superelliptic_equivalent = false;
  bool deg_order_ok = false;
};
FamilyReport family_filter(const CurveModel& c);

// Makes Y^3 = c G H^2 (G, H arbitrary leading coefficients) monic by x -> l x, Y -> s Y.
struct Normalized {
  CurveModel curve;
  u64 x_scale = 1;   // x = x_scale * x'
  u64 y_scale = 1;   // Y = y_scale * Y'
};
Normalized normalize_curve(u64 q, const Poly& G, const Poly& H);

}  // namespace cubicff
