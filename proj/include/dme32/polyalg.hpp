#pragma once

// Exponent-matrix inversion mod q^k-1, univariate polynomial gcd/roots over
// the extension fields, and the resultant of two bivariate quadratics.

#include <array>
#include <vector>

#include "dme32/tower.hpp"

namespace dme32 {

// 2x2 or 3x3 integer exponent matrix; top-left dim x dim of e is used
struct ExpMatrix {
  int dim = 0;
  std::array<std::array<mpz_class, 3>, 3> e{};
  mpz_class modulus;
  bool operator==(const ExpMatrix& o) const { return dim == o.dim && e == o.e && modulus == o.modulus; }
};

ExpMatrix exp_matrix_inverse(const ExpMatrix& m);
ExpMatrix exp_matrix_inverse(const ExpMatrix& m, const mpz_class& modulus);

// dense univariate polynomial, index = degree; normalized form drops
// trailing zero coefficients
using UniPoly2 = std::vector<Ext2Elem>;
using UniPoly3 = std::vector<Ext3Elem>;

UniPoly2 upoly_trim(const Tower& t, UniPoly2 f);
UniPoly3 upoly_trim(const Tower& t, UniPoly3 f);
int upoly_deg(const UniPoly2& f);
int upoly_deg(const UniPoly3& f);

UniPoly2 upoly_mul(const Tower& t, const UniPoly2& f, const UniPoly2& g);
UniPoly3 upoly_mul(const Tower& t, const UniPoly3& f, const UniPoly3& g);
UniPoly2 upoly_add(const Tower& t, const UniPoly2& f, const UniPoly2& g);
UniPoly3 upoly_add(const Tower& t, const UniPoly3& f, const UniPoly3& g);
// remainder of f by g, g != 0
UniPoly2 upoly_rem(const Tower& t, const UniPoly2& f, const UniPoly2& g);
UniPoly3 upoly_rem(const Tower& t, const UniPoly3& f, const UniPoly3& g);
Ext2Elem upoly_eval(const Tower& t, const UniPoly2& f, Ext2Elem x);
Ext3Elem upoly_eval(const Tower& t, const UniPoly3& f, Ext3Elem x);

// monic gcd; gcd(0,0) = 0
UniPoly2 upoly_gcd(const Tower& t, const UniPoly2& f, const UniPoly2& g);
UniPoly3 upoly_gcd(const Tower& t, const UniPoly3& f, const UniPoly3& g);

// all roots in the coefficient field, deduplicated, unordered
std::vector<Ext2Elem> upoly_roots(const Tower& t, const UniPoly2& f);
std::vector<Ext3Elem> upoly_roots(const Tower& t, const UniPoly3& f);

// bivariate polynomial of total degree <= 2 over F_{q^3};
// c[i][j] = coefficient of u^i v^j
struct BiQuad3 {
  std::array<std::array<Ext3Elem, 3>, 3> c{};
};

Ext3Elem biquad_eval(const Tower& t, const BiQuad3& p, Ext3Elem u, Ext3Elem v);

// Sylvester resultant eliminating variable 1 (u) or 2 (v); degree <= 4 in the
// survivor
UniPoly3 resultant_eliminate(const Tower& t, const BiQuad3& p, const BiQuad3& q, int eliminate);

}  // namespace dme32
