#include "dme32/tower.hpp"

#include <random>

namespace dme32 {

Tower::Tower(const TowerParams& tp) : tp_(tp), bf_(tp.base) {
  if (!quad_modulus_irreducible(bf_, tp.quad_a, tp.quad_b))
    fail(errc::invalid_params, "quadratic modulus not irreducible");
  if (!cubic_modulus_irreducible(bf_, tp.cubic_c, tp.cubic_d, tp.cubic_e))
    fail(errc::invalid_params, "cubic modulus not irreducible");
  FqElem c = tp.cubic_c, d = tp.cubic_d, e = tp.cubic_e;
  r4_ = {bf_.mul(c, e), bf_.mul(c, d) ^ e, bf_.mul(c, c) ^ d};
  mpz_class q = mpz_class(1) << bf_.w();
  ord_[0] = q - 1;
  ord_[1] = q * q - 1;
  ord_[2] = q * q * q - 1;
}

Ext2Elem Tower::inv2(Ext2Elem x) const {
  if (x.is_zero()) fail(errc::zero_inverse, "inverse of zero (level 2)");
  const BaseField& f = bf_;
  // norm x * conj(x) with conj(a0+a1 T) = (a0 + a1*a) + a1 T
  FqElem n = f.mul(x.c0, x.c0) ^ f.mul(tp_.quad_a, f.mul(x.c0, x.c1)) ^
             f.mul(tp_.quad_b, f.mul(x.c1, x.c1));
  FqElem ni = f.inv(n);
  return {f.mul(ni, x.c0 ^ f.mul(tp_.quad_a, x.c1)), f.mul(ni, x.c1)};
}

Ext2Elem Tower::pow2(Ext2Elem x, const mpz_class& e) const {
  if (x.is_zero()) {
    if (sgn(e) == 0) fail(errc::undefined_power, "0^0 (level 2)");
    return {0, 0};
  }
  mpz_class r = e % ord_[1];
  if (r < 0) r += ord_[1];
  Ext2Elem acc{1, 0}, base = x;
  size_t nbits = mpz_sizeinbase(r.get_mpz_t(), 2);
  if (r == 0) return acc;
  for (size_t i = 0; i < nbits; ++i) {
    if (mpz_tstbit(r.get_mpz_t(), i)) acc = mul2(acc, base);
    if (i + 1 < nbits) base = mul2(base, base);
  }
  return acc;
}

Ext3Elem Tower::mul3(Ext3Elem x, Ext3Elem y) const {
  const BaseField& f = bf_;
  // schoolbook product, then reduce S^3 and S^4
  FqElem p0 = f.mul(x.c0, y.c0);
  FqElem p1 = f.mul(x.c0, y.c1) ^ f.mul(x.c1, y.c0);
  FqElem p2 = f.mul(x.c0, y.c2) ^ f.mul(x.c1, y.c1) ^ f.mul(x.c2, y.c0);
  FqElem p3 = f.mul(x.c1, y.c2) ^ f.mul(x.c2, y.c1);
  FqElem p4 = f.mul(x.c2, y.c2);
  // S^3 = cS^2 + dS + e, S^4 = r4
  FqElem c = tp_.cubic_c, d = tp_.cubic_d, e = tp_.cubic_e;
  return {p0 ^ f.mul(p3, e) ^ f.mul(p4, r4_.c0),
          p1 ^ f.mul(p3, d) ^ f.mul(p4, r4_.c1),
          p2 ^ f.mul(p3, c) ^ f.mul(p4, r4_.c2)};
}

Ext3Elem Tower::inv3(Ext3Elem x) const {
  if (x.is_zero()) fail(errc::zero_inverse, "inverse of zero (level 3)");
  Mat3 g = g_matrix(x);
  Mat3 gi = mat3_inv(bf_, g);
  return {gi[0][0], gi[1][0], gi[2][0]};  // column of 1 = x^{-1} * 1
}

Ext3Elem Tower::pow3(Ext3Elem x, const mpz_class& e) const {
  if (x.is_zero()) {
    if (sgn(e) == 0) fail(errc::undefined_power, "0^0 (level 3)");
    return {0, 0, 0};
  }
  mpz_class r = e % ord_[2];
  if (r < 0) r += ord_[2];
  Ext3Elem acc{1, 0, 0}, base = x;
  if (r == 0) return acc;
  size_t nbits = mpz_sizeinbase(r.get_mpz_t(), 2);
  for (size_t i = 0; i < nbits; ++i) {
    if (mpz_tstbit(r.get_mpz_t(), i)) acc = mul3(acc, base);
    if (i + 1 < nbits) base = mul3(base, base);
  }
  return acc;
}

Mat2 Tower::h_matrix(Ext2Elem alpha) const {
  if (alpha.is_zero()) fail(errc::zero_inverse, "H of zero");
  const BaseField& f = bf_;
  // columns: alpha*1 and alpha*T
  return {{{alpha.c0, f.mul(alpha.c1, tp_.quad_b)},
           {alpha.c1, alpha.c0 ^ f.mul(alpha.c1, tp_.quad_a)}}};
}

Mat3 Tower::g_matrix(Ext3Elem lambda) const {
  if (lambda.is_zero()) fail(errc::zero_inverse, "G of zero");
  Ext3Elem s{0, 1, 0};
  Ext3Elem c1 = mul3(lambda, s);
  Ext3Elem c2 = mul3(c1, s);
  return {{{lambda.c0, c1.c0, c2.c0}, {lambda.c1, c1.c1, c2.c1}, {lambda.c2, c1.c2, c2.c2}}};
}

FqElem mat2_det(const BaseField& f, const Mat2& m) {
  return f.mul(m[0][0], m[1][1]) ^ f.mul(m[0][1], m[1][0]);
}

FqElem mat3_det(const BaseField& f, const Mat3& m) {
  FqElem d = 0;
  d ^= f.mul(m[0][0], f.mul(m[1][1], m[2][2]) ^ f.mul(m[1][2], m[2][1]));
  d ^= f.mul(m[0][1], f.mul(m[1][0], m[2][2]) ^ f.mul(m[1][2], m[2][0]));
  d ^= f.mul(m[0][2], f.mul(m[1][0], m[2][1]) ^ f.mul(m[1][1], m[2][0]));
  return d;
}

Mat2 mat2_mul(const BaseField& f, const Mat2& x, const Mat2& y) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r[i][j] = f.mul(x[i][0], y[0][j]) ^ f.mul(x[i][1], y[1][j]);
  return r;
}

Mat3 mat3_mul(const BaseField& f, const Mat3& x, const Mat3& y) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r[i][j] = f.mul(x[i][0], y[0][j]) ^ f.mul(x[i][1], y[1][j]) ^ f.mul(x[i][2], y[2][j]);
  return r;
}

Mat2 mat2_inv(const BaseField& f, const Mat2& m) {
  FqElem det = mat2_det(f, m);
  if (det == 0) fail(errc::not_invertible, "singular 2x2 matrix");
  FqElem di = f.inv(det);
  return {{{f.mul(di, m[1][1]), f.mul(di, m[0][1])},
           {f.mul(di, m[1][0]), f.mul(di, m[0][0])}}};
}

Mat3 mat3_inv(const BaseField& f, const Mat3& m) {
  FqElem det = mat3_det(f, m);
  if (det == 0) fail(errc::not_invertible, "singular 3x3 matrix");
  FqElem di = f.inv(det);
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      FqElem cof = f.mul(m[r0][c0], m[r1][c1]) ^ f.mul(m[r0][c1], m[r1][c0]);
      r[i][j] = f.mul(di, cof);
    }
  return r;
}

std::array<FqElem, 2> mat2_vec(const BaseField& f, const Mat2& m, std::array<FqElem, 2> v) {
  return {f.mul(m[0][0], v[0]) ^ f.mul(m[0][1], v[1]),
          f.mul(m[1][0], v[0]) ^ f.mul(m[1][1], v[1])};
}

std::array<FqElem, 3> mat3_vec(const BaseField& f, const Mat3& m, std::array<FqElem, 3> v) {
  std::array<FqElem, 3> r{};
  for (int i = 0; i < 3; ++i)
    r[i] = f.mul(m[i][0], v[0]) ^ f.mul(m[i][1], v[1]) ^ f.mul(m[i][2], v[2]);
  return r;
}

bool quad_modulus_irreducible(const BaseField& f, FqElem a, FqElem b) {
  // char 2: T^2+aT+b irreducible iff a != 0 and Tr(b/a^2) = 1
  if (a == 0) return false;
  if (b == 0) return false;
  FqElem ai = f.inv(f.mul(a, a));
  return f.trace(f.mul(b, ai)) == 1;
}

namespace {

// degree <= 2 remainder of S^q against the cubic, tracking no full division
struct CubicCtx {
  const BaseField& f;
  FqElem c, d, e;
  FqElem r4_0, r4_1, r4_2;
  std::array<FqElem, 3> mul(std::array<FqElem, 3> x, std::array<FqElem, 3> y) const {
    FqElem p0 = f.mul(x[0], y[0]);
    FqElem p1 = f.mul(x[0], y[1]) ^ f.mul(x[1], y[0]);
    FqElem p2 = f.mul(x[0], y[2]) ^ f.mul(x[1], y[1]) ^ f.mul(x[2], y[0]);
    FqElem p3 = f.mul(x[1], y[2]) ^ f.mul(x[2], y[1]);
    FqElem p4 = f.mul(x[2], y[2]);
    return {p0 ^ f.mul(p3, e) ^ f.mul(p4, r4_0),
            p1 ^ f.mul(p3, d) ^ f.mul(p4, r4_1),
            p2 ^ f.mul(p3, c) ^ f.mul(p4, r4_2)};
  }
};

}  // namespace

bool cubic_modulus_irreducible(const BaseField& f, FqElem c, FqElem d, FqElem e) {
  // a cubic is reducible over F_q iff it has a root there; no root iff
  // gcd(S^3+cS^2+dS+e, S^q - S) = 1
  if (e == 0) return false;  // S divides it
  CubicCtx ctx{f, c, d, e, f.mul(c, e), f.mul(c, d) ^ e, f.mul(c, c) ^ d};
  std::array<FqElem, 3> s{0, 1, 0};
  std::array<FqElem, 3> r = s;
  for (int i = 0; i < f.w(); ++i) r = ctx.mul(r, r);
  // g1 = S^q + S mod cubic, degree <= 2
  std::array<FqElem, 3> g1{r[0], r[1] ^ 1, r[2]};
  if (g1[0] == 0 && g1[1] == 0 && g1[2] == 0) return false;  // cubic splits
  // gcd(cubic, g1): first reduce the cubic by g1, then one more step
  if (g1[2] != 0) {
    // cubic = (S + t1)(g1) + linear remainder, coefficients via synthetic division
    FqElem lc = f.inv(g1[2]);
    FqElem u2 = f.mul(g1[1], lc), u1 = f.mul(g1[0], lc);  // monic g1: S^2+u2 S+u1
    // S^3+cS^2+dS+e mod (S^2+u2 S+u1)
    FqElem q1 = c ^ u2;
    FqElem rem1 = d ^ u1 ^ f.mul(q1, u2);
    FqElem rem0 = e ^ f.mul(q1, u1);
    if (rem1 == 0 && rem0 == 0) return false;
    if (rem1 == 0) return true;  // gcd is a nonzero constant
    // gcd(g1, rem1*S+rem0): root check
    FqElem root = f.mul(rem0, f.inv(rem1));
    FqElem val = f.mul(root, root) ^ f.mul(u2, root) ^ u1;
    return val != 0;
  }
  if (g1[1] != 0) {
    FqElem root = f.mul(g1[0], f.inv(g1[1]));
    FqElem val = f.mul(f.mul(root, root), root) ^ f.mul(c, f.mul(root, root)) ^ f.mul(d, root) ^ e;
    return val != 0;
  }
  return true;  // nonzero constant gcd
}

TowerParams gen_tower_params(int w, std::uint64_t seed) {
  if (w < 3 || w > 64) fail(errc::invalid_params, "w out of range");
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  std::uint64_t mask = (w == 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << w) - 1);
  TowerParams tp;
  tp.base.w = w;
  for (;;) {
    tp.base.base_modulus = (rng() & mask) | 1;
    if (base_modulus_irreducible(tp.base)) break;
  }
  BaseField f(tp.base);
  for (;;) {
    tp.quad_a = rng() & mask;
    tp.quad_b = rng() & mask;
    if (quad_modulus_irreducible(f, tp.quad_a, tp.quad_b)) break;
  }
  for (;;) {
    tp.cubic_c = rng() & mask;
    tp.cubic_d = rng() & mask;
    tp.cubic_e = rng() & mask;
    if (cubic_modulus_irreducible(f, tp.cubic_c, tp.cubic_d, tp.cubic_e)) break;
  }
  return tp;
}

namespace {

constexpr std::uint64_t bits(std::initializer_list<int> l) {
  std::uint64_t v = 0;
  for (int b : l) v |= std::uint64_t(1) << b;
  return v;
}

}  // namespace

TowerParams nist_tower() {
  TowerParams tp;
  tp.base.w = 48;
  tp.base.base_modulus = bits({28, 27, 1, 0});  // x^48 + x^28 + x^27 + x + 1
  tp.quad_a = bits({43, 38, 36, 34, 29, 26, 25, 24, 23, 22, 21, 20, 19, 13, 9, 8, 4, 3, 1, 0});
  tp.quad_b = bits({47, 46, 45, 43, 40, 39, 38, 37, 35, 31, 30, 27, 26, 24, 23, 22, 21, 18,
                    17, 16, 14, 9, 8, 7, 3, 2, 0});
  tp.cubic_c = bits({43, 42, 41, 40, 38, 37, 36, 34, 33, 29, 26, 24, 22, 20, 19, 17, 15, 14,
                     13, 12, 11, 8, 5, 3, 2, 1});
  tp.cubic_d = bits({46, 45, 44, 41, 38, 37, 33, 32, 31, 30, 25, 21, 20, 17, 16, 15, 14, 12,
                     10, 9, 8, 7, 4, 3, 2, 1, 0});
  tp.cubic_e = bits({47, 46, 42, 39, 38, 35, 32, 26, 25, 24, 23, 20, 19, 17, 15, 14, 13, 12,
                     11, 9, 8, 6, 5, 2, 1});
  return tp;
}

}  // namespace dme32
