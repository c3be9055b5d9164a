#pragma once

// Tower F_q -> F_{q^2} = F_q[T]/(T^2+aT+b) -> F_{q^3} = F_q[S]/(S^3+cS^2+dS+e)
// plus the 2x2/3x3 matrix helpers used for block-linear maps.

#include <array>
#include <cstdint>

#include "dme32/gf.hpp"

namespace dme32 {

struct Ext2Elem {
  FqElem c0 = 0, c1 = 0;
  bool operator==(const Ext2Elem&) const = default;
  bool is_zero() const { return c0 == 0 && c1 == 0; }
};

struct Ext3Elem {
  FqElem c0 = 0, c1 = 0, c2 = 0;
  bool operator==(const Ext3Elem&) const = default;
  bool is_zero() const { return c0 == 0 && c1 == 0 && c2 == 0; }
};

struct TowerParams {
  BaseFieldParams base;
  FqElem quad_a = 0, quad_b = 0;              // T^2 + aT + b
  FqElem cubic_c = 0, cubic_d = 0, cubic_e = 0;  // S^3 + cS^2 + dS + e
  bool operator==(const TowerParams&) const = default;
};

using Vec6 = std::array<FqElem, 6>;
using Mat2 = std::array<std::array<FqElem, 2>, 2>;
using Mat3 = std::array<std::array<FqElem, 3>, 3>;

class Tower {
public:
  Tower() = default;
  explicit Tower(const TowerParams& tp);

  const TowerParams& params() const { return tp_; }
  const BaseField& base() const { return bf_; }
  int w() const { return bf_.w(); }

  const mpz_class& order(int level) const { return ord_[level - 1]; }  // q^level - 1

  // level 2
  Ext2Elem add2(Ext2Elem x, Ext2Elem y) const { return {x.c0 ^ y.c0, x.c1 ^ y.c1}; }
  Ext2Elem mul2(Ext2Elem x, Ext2Elem y) const {
    const BaseField& f = bf_;
    FqElem t = f.mul(x.c1, y.c1);
    return {f.mul(x.c0, y.c0) ^ f.mul(t, tp_.quad_b),
            f.mul(x.c0, y.c1) ^ f.mul(x.c1, y.c0) ^ f.mul(t, tp_.quad_a)};
  }
  Ext2Elem inv2(Ext2Elem x) const;
  Ext2Elem pow2(Ext2Elem x, const mpz_class& e) const;

  // level 3
  Ext3Elem add3(Ext3Elem x, Ext3Elem y) const {
    return {x.c0 ^ y.c0, x.c1 ^ y.c1, x.c2 ^ y.c2};
  }
  Ext3Elem mul3(Ext3Elem x, Ext3Elem y) const;
  Ext3Elem inv3(Ext3Elem x) const;
  Ext3Elem pow3(Ext3Elem x, const mpz_class& e) const;

  Mat2 h_matrix(Ext2Elem alpha) const;  // coordinate action of mult-by-alpha
  Mat3 g_matrix(Ext3Elem lambda) const;

private:
  TowerParams tp_;
  BaseField bf_;
  Ext3Elem r4_;  // S^4 reduced: (ce, cd+e, c^2+d)
  mpz_class ord_[3];
};

// spec-facing aliases; the tower level is carried by the element type
inline FqElem ext_mul(const Tower& t, FqElem a, FqElem b) { return t.base().mul(a, b); }
inline Ext2Elem ext_mul(const Tower& t, Ext2Elem a, Ext2Elem b) { return t.mul2(a, b); }
inline Ext3Elem ext_mul(const Tower& t, Ext3Elem a, Ext3Elem b) { return t.mul3(a, b); }
inline FqElem ext_inv(const Tower& t, FqElem a) { return t.base().inv(a); }
inline Ext2Elem ext_inv(const Tower& t, Ext2Elem a) { return t.inv2(a); }
inline Ext3Elem ext_inv(const Tower& t, Ext3Elem a) { return t.inv3(a); }
inline FqElem ext_pow(const Tower& t, FqElem a, const mpz_class& e) { return t.base().pow(a, e); }
inline Ext2Elem ext_pow(const Tower& t, Ext2Elem a, const mpz_class& e) { return t.pow2(a, e); }
inline Ext3Elem ext_pow(const Tower& t, Ext3Elem a, const mpz_class& e) { return t.pow3(a, e); }
inline Mat2 mul_matrix_h(const Tower& t, Ext2Elem alpha) { return t.h_matrix(alpha); }
inline Mat3 mul_matrix_g(const Tower& t, Ext3Elem lambda) { return t.g_matrix(lambda); }

inline std::array<Ext2Elem, 3> reblock2(const Vec6& v) {
  return {Ext2Elem{v[0], v[1]}, Ext2Elem{v[2], v[3]}, Ext2Elem{v[4], v[5]}};
}
inline Vec6 unblock2(const std::array<Ext2Elem, 3>& b) {
  return {b[0].c0, b[0].c1, b[1].c0, b[1].c1, b[2].c0, b[2].c1};
}
inline std::array<Ext3Elem, 2> reblock3(const Vec6& v) {
  return {Ext3Elem{v[0], v[1], v[2]}, Ext3Elem{v[3], v[4], v[5]}};
}
inline Vec6 unblock3(const std::array<Ext3Elem, 2>& b) {
  return {b[0].c0, b[0].c1, b[0].c2, b[1].c0, b[1].c1, b[1].c2};
}

// column j as an extension element
inline Ext2Elem col2(const Mat2& m, int j) { return {m[0][j], m[1][j]}; }
inline Ext3Elem col3(const Mat3& m, int j) { return {m[0][j], m[1][j], m[2][j]}; }

FqElem mat2_det(const BaseField& f, const Mat2& m);
FqElem mat3_det(const BaseField& f, const Mat3& m);
Mat2 mat2_mul(const BaseField& f, const Mat2& x, const Mat2& y);
Mat3 mat3_mul(const BaseField& f, const Mat3& x, const Mat3& y);
Mat2 mat2_inv(const BaseField& f, const Mat2& m);
Mat3 mat3_inv(const BaseField& f, const Mat3& m);
std::array<FqElem, 2> mat2_vec(const BaseField& f, const Mat2& m, std::array<FqElem, 2> v);
std::array<FqElem, 3> mat3_vec(const BaseField& f, const Mat3& m, std::array<FqElem, 3> v);

bool quad_modulus_irreducible(const BaseField& f, FqElem a, FqElem b);
bool cubic_modulus_irreducible(const BaseField& f, FqElem c, FqElem d, FqElem e);

TowerParams gen_tower_params(int w, std::uint64_t seed);
TowerParams nist_tower();  // the published 48-bit parameter tower

}  // namespace dme32
