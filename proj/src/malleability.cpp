#include "dme32/malleability.hpp"

#include "dme32/errors.hpp"

namespace dme32 {

PrivateKey transform_abc(const PrivateKey& k, const System& sys, Ext2Elem alpha,
                         Ext2Elem beta, Ext2Elem gamma) {
  const Tower& t = sys.tower();
  const BaseField& f = t.base();
  if (alpha.is_zero() || beta.is_zero() || gamma.is_zero())
    fail(errc::zero_inverse, "transform_abc needs nonzero scalings");
  Ext2Elem d = t.mul2(t.pow2(alpha, sys.E().e[1][0]), t.pow2(gamma, sys.E().e[1][2]));
  if (d.c1 != 0 || d.c0 == 0)
    fail(errc::constraint_violated, "alpha^E21 * gamma^E23 not in F_q*");
  const FqElem dinv = f.inv(d.c0);
  Ext2Elem sc1 = t.mul2(t.pow2(alpha, sys.E().e[0][0]), t.pow2(beta, sys.E().e[0][1]));
  Ext2Elem sc3 = t.mul2(t.pow2(beta, sys.E().e[2][1]), t.pow2(gamma, sys.E().e[2][2]));
  Mat2 h1i = mat2_inv(f, t.h_matrix(sc1));
  Mat2 h3i = mat2_inv(f, t.h_matrix(sc3));
  Mat3 m1{};
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m1[r][c] = h1i[r][c];
  m1[2][2] = dinv;
  Mat3 m2{};
  m2[0][0] = dinv;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m2[1 + r][1 + c] = h3i[r][c];
  PrivateKey out = k;
  out.L11 = mat2_mul(f, t.h_matrix(alpha), k.L11);
  out.L12 = mat2_mul(f, t.h_matrix(beta), k.L12);
  out.L13 = mat2_mul(f, t.h_matrix(gamma), k.L13);
  out.L21 = mat3_mul(f, k.L21, m1);
  out.L22 = mat3_mul(f, k.L22, m2);
  return out;
}

PrivateKey transform_lm(const PrivateKey& k, const System& sys, Ext3Elem lambda, Ext3Elem mu) {
  const Tower& t = sys.tower();
  const BaseField& f = t.base();
  if (lambda.is_zero() || mu.is_zero())
    fail(errc::zero_inverse, "transform_lm needs nonzero scalings");
  Ext3Elem s1 = t.mul3(t.pow3(lambda, sys.F().e[0][0]), t.pow3(mu, sys.F().e[0][1]));
  Ext3Elem s2 = t.mul3(t.pow3(lambda, sys.F().e[1][0]), t.pow3(mu, sys.F().e[1][1]));
  PrivateKey out = k;
  out.L21 = mat3_mul(f, t.g_matrix(lambda), k.L21);
  out.L22 = mat3_mul(f, t.g_matrix(mu), k.L22);
  out.L31 = mat3_mul(f, k.L31, mat3_inv(f, t.g_matrix(s1)));
  out.L32 = mat3_mul(f, k.L32, mat3_inv(f, t.g_matrix(s2)));
  return out;
}

std::pair<PrivateKey, NormalizedKeyTag> normalize_key(const PrivateKey& k, const System& sys) {
  const Tower& t = sys.tower();
  const BaseField& f = t.base();
  const mpz_class& o2 = t.order(2);
  mpz_class e21 = sys.E().e[1][0] % o2;
  mpz_class e23 = sys.E().e[1][2] % o2;

  Ext2Elem alpha = t.inv2(col2(k.L11, 1));
  Ext2Elem beta = t.inv2(col2(k.L12, 1));
  Ext2Elem tau = col2(k.L13, 1);
  Ext2Elem xi = t.mul2(t.pow2(alpha, o2 - e21), t.pow2(tau, e23));

  NormalizedKeyTag tag;
  FqElem s;
  if (xi.c0 != 0) {
    tag.branch = NormalBranch::unit_c;
    s = f.inv(xi.c0);
    tag.c_value = f.mul(xi.c1, s);
  } else {
    tag.branch = NormalBranch::pure_t;
    tag.c_value = 0;
    s = f.inv(xi.c1);
  }

  mpz_class e23inv;
  mpz_invert(e23inv.get_mpz_t(), e23.get_mpz_t(), o2.get_mpz_t());
  Ext2Elem gamma =
      t.pow2(t.mul2(Ext2Elem{s, 0}, t.pow2(alpha, o2 - e21)), e23inv);

  PrivateKey k1 = transform_abc(k, sys, alpha, beta, gamma);
  Ext3Elem lambda = t.inv3(col3(k1.L21, 2));
  Ext3Elem mu = t.inv3(col3(k1.L22, 0));
  return {transform_lm(k1, sys, lambda, mu), tag};
}

bool same_public_key(const PrivateKey& a, const PrivateKey& b, const System& sys) {
  return derive_public_key(a, sys) == derive_public_key(b, sys);
}

}  // namespace dme32
