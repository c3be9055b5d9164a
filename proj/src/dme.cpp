#include "dme32/dme.hpp"

#include <random>

#include "dme32/errors.hpp"

namespace dme32 {

namespace {

mpz_class mat3_exp_det(const ExpMatrix& m) {
  // generic signed 3x3 determinant
  const auto& e = m.e;
  return e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
         e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
         e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
}

mpz_class exp_det(const ExpMatrix& m) {
  if (m.dim == 2) return m.e[0][0] * m.e[1][1] - m.e[0][1] * m.e[1][0];
  return mat3_exp_det(m);
}

bool coprime(const mpz_class& a, const mpz_class& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g == 1;
}

bool power_of_two(const mpz_class& e) {
  return e > 0 && mpz_popcount(e.get_mpz_t()) == 1;
}

// which L1 blocks feed each E row (the fixed zero-pattern)
constexpr int kRowCols[3][2] = {{0, 1}, {0, 2}, {1, 2}};

}  // namespace

System::System(const SystemParams& p) : p_(p), t_(p.tower) {
  const mpz_class& o1 = t_.order(1);
  const mpz_class& o2 = t_.order(2);
  const mpz_class& o3 = t_.order(3);
  if (p_.E.dim != 3 || p_.F.dim != 2)
    fail(errc::invalid_params, "E must be 3x3 and F 2x2");
  if (p_.E.modulus != o2) fail(errc::invalid_params, "E modulus must be q^2-1");
  if (p_.F.modulus != o3) fail(errc::invalid_params, "F modulus must be q^3-1");
  if (p_.E.e[0][2] != 0 || p_.E.e[1][1] != 0 || p_.E.e[2][0] != 0)
    fail(errc::invalid_params, "E zero-pattern violated");
  for (int i = 0; i < 3; ++i)
    for (int j : kRowCols[i])
      if (!power_of_two(p_.E.e[i][j]))
        fail(errc::invalid_params, "E entries must be powers of 2");
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!power_of_two(p_.F.e[i][j]))
        fail(errc::invalid_params, "F entries must be powers of 2");
  if (!coprime(exp_det(p_.E), o2)) fail(errc::invalid_params, "E not invertible mod q^2-1");
  if (!coprime(p_.E.e[1][0], o2) || !coprime(p_.E.e[1][2], o2))
    fail(errc::invalid_params, "E21/E23 not invertible mod q^2-1");
  mpz_class df = exp_det(p_.F);
  if (!coprime(df, o3)) fail(errc::invalid_params, "F not invertible mod q^3-1");
  if (!coprime(df, o1)) fail(errc::invalid_params, "F not invertible mod q-1");
  Einv_ = exp_matrix_inverse(p_.E);
  Finv3_ = exp_matrix_inverse(p_.F);
  Finv1_ = exp_matrix_inverse(p_.F, o1);
}

std::uint64_t System::canon(const mpz_class& e) const {
  if (e == 0) return 0;
  mpz_class em1 = e - 1;
  return mpz_fdiv_ui(em1.get_mpz_t(), t_.base().order()) + 1;
}

std::uint64_t System::canon(std::uint64_t e) const {
  if (e == 0) return 0;
  return (e - 1) % t_.base().order() + 1;
}

SystemParams gen_system_params(int w, std::uint64_t seed, Preset preset) {
  if (w < 3 || w > 64) fail(errc::invalid_params, "w out of range");
  SystemParams p;
  mpz_class q = mpz_class(1) << w;
  mpz_class o1 = q - 1, o2 = q * q - 1, o3 = q * q * q - 1;
  p.E.dim = 3;
  p.E.modulus = o2;
  p.F.dim = 2;
  p.F.modulus = o3;
  if (preset == Preset::nist) {
    if (w != 48) fail(errc::invalid_params, "nist preset is defined at w=48");
    p.tower = nist_tower();
    auto pw = [](int k) -> mpz_class { return mpz_class(1) << k; };
    p.E.e = {{{pw(24), pw(59), 0}, {pw(21), 0, pw(28)}, {0, pw(29), pw(65)}}};
    p.F.e = {{{pw(50), pw(24), 0}, {pw(7), pw(88), 0}, {0, 0, 0}}};
    return p;
  }
  p.tower = gen_tower_params(w, seed);
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL);
  auto pw2 = [&](int span) -> mpz_class { return mpz_class(1) << (int)(rng() % span); };
  for (;;) {
    p.E.e = {};
    for (int i = 0; i < 3; ++i)
      for (int j : kRowCols[i]) p.E.e[i][j] = pw2(2 * w);
    if (coprime(exp_det(p.E), o2)) break;
  }
  for (;;) {
    p.F.e = {};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) p.F.e[i][j] = pw2(3 * w);
    mpz_class d = exp_det(p.F);
    if (coprime(d, o3) && coprime(d, o1)) break;
  }
  return p;
}

PrivateKey keygen(const System& sys, std::uint64_t seed) {
  const BaseField& f = sys.base();
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x3c6ef372fe94f82bULL);
  auto el = [&] { return (FqElem)rng() & f.order(); };
  auto m2 = [&] {
    Mat2 m;
    do {
      for (auto& row : m)
        for (auto& x : row) x = el();
    } while (mat2_det(f, m) == 0);
    return m;
  };
  auto m3 = [&] {
    Mat3 m;
    do {
      for (auto& row : m)
        for (auto& x : row) x = el();
    } while (mat3_det(f, m) == 0);
    return m;
  };
  PrivateKey k;
  k.L11 = m2();
  k.L12 = m2();
  k.L13 = m2();
  k.L21 = m3();
  k.L22 = m3();
  k.L31 = m3();
  k.L32 = m3();
  return k;
}

std::array<Ext2Elem, 3> exp_map(const System& sys, const ExpMatrix& m,
                                const std::array<Ext2Elem, 3>& blocks) {
  if (m.dim != 3) fail(errc::invalid_params, "exp_map on Ext2 needs a 3x3 matrix");
  const Tower& t = sys.tower();
  const mpz_class& ord = t.order(2);
  for (const auto& b : blocks)
    if (b.is_zero()) fail(errc::zero_block, "zero block in exp_map");
  std::array<Ext2Elem, 3> out;
  for (int i = 0; i < 3; ++i) {
    Ext2Elem acc{1, 0};
    for (int j = 0; j < 3; ++j) {
      if (m.e[i][j] % ord == 0) continue;
      acc = t.mul2(acc, t.pow2(blocks[j], m.e[i][j]));
    }
    out[i] = acc;
  }
  return out;
}

std::array<Ext3Elem, 2> exp_map(const System& sys, const ExpMatrix& m,
                                const std::array<Ext3Elem, 2>& blocks) {
  if (m.dim != 2) fail(errc::invalid_params, "exp_map on Ext3 needs a 2x2 matrix");
  const Tower& t = sys.tower();
  const mpz_class& ord = t.order(3);
  for (const auto& b : blocks)
    if (b.is_zero()) fail(errc::zero_block, "zero block in exp_map");
  std::array<Ext3Elem, 2> out;
  for (int i = 0; i < 2; ++i) {
    Ext3Elem acc{1, 0, 0};
    for (int j = 0; j < 2; ++j) {
      if (m.e[i][j] % ord == 0) continue;
      acc = t.mul3(acc, t.pow3(blocks[j], m.e[i][j]));
    }
    out[i] = acc;
  }
  return out;
}

Vec6 encrypt_private(const PrivateKey& sk, const System& sys, const Vec6& m) {
  const Tower& t = sys.tower();
  const BaseField& f = t.base();
  auto mb = reblock2(m);
  for (const auto& b : mb)
    if (b.is_zero()) fail(errc::zero_block, "plaintext block is zero");
  auto x1 = mat2_vec(f, sk.L11, {m[0], m[1]});
  auto x2 = mat2_vec(f, sk.L12, {m[2], m[3]});
  auto x3 = mat2_vec(f, sk.L13, {m[4], m[5]});
  auto u = exp_map(sys, sys.E(), reblock2({x1[0], x1[1], x2[0], x2[1], x3[0], x3[1]}));
  Vec6 v = unblock2(u);
  auto w1 = mat3_vec(f, sk.L21, {v[0], v[1], v[2]});
  auto w2 = mat3_vec(f, sk.L22, {v[3], v[4], v[5]});
  auto s = exp_map(sys, sys.F(), reblock3({w1[0], w1[1], w1[2], w2[0], w2[1], w2[2]}));
  Vec6 z = unblock3(s);
  auto c1 = mat3_vec(f, sk.L31, {z[0], z[1], z[2]});
  auto c2 = mat3_vec(f, sk.L32, {z[3], z[4], z[5]});
  return {c1[0], c1[1], c1[2], c2[0], c2[1], c2[2]};
}

Vec6 decrypt(const PrivateKey& sk, const System& sys, const Vec6& ct) {
  const Tower& t = sys.tower();
  const BaseField& f = t.base();
  auto z1 = mat3_vec(f, mat3_inv(f, sk.L31), {ct[0], ct[1], ct[2]});
  auto z2 = mat3_vec(f, mat3_inv(f, sk.L32), {ct[3], ct[4], ct[5]});
  auto s = reblock3({z1[0], z1[1], z1[2], z2[0], z2[1], z2[2]});
  for (const auto& b : s)
    if (b.is_zero()) fail(errc::invalid_ciphertext, "zero block inverting L3");
  auto tt = exp_map(sys, sys.Finv3(), s);
  Vec6 wv = unblock3(tt);
  auto v1 = mat3_vec(f, mat3_inv(f, sk.L21), {wv[0], wv[1], wv[2]});
  auto v2 = mat3_vec(f, mat3_inv(f, sk.L22), {wv[3], wv[4], wv[5]});
  auto u = reblock2({v1[0], v1[1], v1[2], v2[0], v2[1], v2[2]});
  for (const auto& b : u)
    if (b.is_zero()) fail(errc::invalid_ciphertext, "zero block inverting L2");
  auto x = exp_map(sys, sys.Einv(), u);
  Vec6 xv = unblock2(x);
  auto m1 = mat2_vec(f, mat2_inv(f, sk.L11), {xv[0], xv[1]});
  auto m2 = mat2_vec(f, mat2_inv(f, sk.L12), {xv[2], xv[3]});
  auto m3 = mat2_vec(f, mat2_inv(f, sk.L13), {xv[4], xv[5]});
  return {m1[0], m1[1], m2[0], m2[1], m3[0], m3[1]};
}

namespace {

// symbolic polynomials during expansion: exact integer exponent vectors,
// coefficients in F_q, F_{q^2} or F_{q^3}
using ExpVec = std::array<mpz_class, 6>;
template <class C>
using SymPoly = std::map<ExpVec, C>;

Ext2Elem sym_add(const Tower& t, Ext2Elem a, Ext2Elem b) { return t.add2(a, b); }
Ext3Elem sym_add(const Tower& t, Ext3Elem a, Ext3Elem b) { return t.add3(a, b); }
FqElem sym_add(const Tower&, FqElem a, FqElem b) { return a ^ b; }
bool sym_zero(Ext2Elem a) { return a.is_zero(); }
bool sym_zero(Ext3Elem a) { return a.is_zero(); }
bool sym_zero(FqElem a) { return a == 0; }

template <class C>
void sym_accum(const Tower& t, SymPoly<C>& p, const ExpVec& ev, C c) {
  if (sym_zero(c)) return;
  auto it = p.find(ev);
  if (it == p.end()) {
    p.emplace(ev, c);
    return;
  }
  it->second = sym_add(t, it->second, c);
  if (sym_zero(it->second)) p.erase(it);
}

// raise to a power-of-2 exponent: char-2 Frobenius distributes over the sum
template <class C>
SymPoly<C> sym_frob(const Tower& t, const SymPoly<C>& p, const mpz_class& e) {
  SymPoly<C> r;
  for (const auto& [ev, c] : p) {
    ExpVec e2;
    for (int i = 0; i < 6; ++i) e2[i] = ev[i] * e;
    r.emplace(std::move(e2), ext_pow(t, c, e));
  }
  return r;
}

template <class C>
SymPoly<C> sym_mul(const Tower& t, const SymPoly<C>& a, const SymPoly<C>& b) {
  SymPoly<C> r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      ExpVec ev;
      for (int i = 0; i < 6; ++i) ev[i] = ea[i] + eb[i];
      sym_accum(t, r, ev, ext_mul(t, ca, cb));
    }
  return r;
}

void sym_axpy(const Tower& t, SymPoly<FqElem>& acc, FqElem s, const SymPoly<FqElem>& p) {
  if (s == 0) return;
  for (const auto& [ev, c] : p) sym_accum(t, acc, ev, t.base().mul(s, c));
}

}  // namespace

PublicKey derive_public_key(const PrivateKey& sk, const System& sys) {
  const Tower& t = sys.tower();
  // (i) each L1 block image as a linear form over F_{q^2}
  const Mat2* l1[3] = {&sk.L11, &sk.L12, &sk.L13};
  std::array<SymPoly<Ext2Elem>, 3> lin;
  for (int bi = 0; bi < 3; ++bi)
    for (int vi = 0; vi < 2; ++vi) {
      Ext2Elem c = col2(*l1[bi], vi);
      if (c.is_zero()) continue;
      ExpVec ev{};
      ev[2 * bi + vi] = 1;
      lin[bi].emplace(ev, c);
    }
  // (ii) E-map rows: two Frobenius powers multiplied
  std::array<SymPoly<Ext2Elem>, 3> u;
  for (int i = 0; i < 3; ++i) {
    int j1 = kRowCols[i][0], j2 = kRowCols[i][1];
    u[i] = sym_mul(t, sym_frob(t, lin[j1], sys.E().e[i][j1]),
                   sym_frob(t, lin[j2], sys.E().e[i][j2]));
  }
  // (iii) split into F_q coordinates, apply L2
  std::array<SymPoly<FqElem>, 6> q2;
  for (int i = 0; i < 3; ++i)
    for (const auto& [ev, c] : u[i]) {
      if (c.c0) q2[2 * i].emplace(ev, c.c0);
      if (c.c1) q2[2 * i + 1].emplace(ev, c.c1);
    }
  std::array<SymPoly<FqElem>, 6> p2;
  for (int r = 0; r < 3; ++r)
    for (int j = 0; j < 3; ++j) {
      sym_axpy(t, p2[r], sk.L21[r][j], q2[j]);
      sym_axpy(t, p2[3 + r], sk.L22[r][j], q2[3 + j]);
    }
  // regroup into two F_{q^3}-coefficient polynomials
  std::array<SymPoly<Ext3Elem>, 2> tg;
  for (int h = 0; h < 2; ++h)
    for (int k = 0; k < 3; ++k)
      for (const auto& [ev, c] : p2[3 * h + k]) {
        Ext3Elem& e3 = tg[h][ev];
        if (k == 0)
          e3.c0 = c;
        else if (k == 1)
          e3.c1 = c;
        else
          e3.c2 = c;
      }
  // (iv) F-map rows
  std::array<SymPoly<Ext3Elem>, 2> s;
  for (int i = 0; i < 2; ++i)
    s[i] = sym_mul(t, sym_frob(t, tg[0], sys.F().e[i][0]),
                   sym_frob(t, tg[1], sys.F().e[i][1]));
  // (v) split, apply L3
  std::array<SymPoly<FqElem>, 6> q3;
  for (int i = 0; i < 2; ++i)
    for (const auto& [ev, c] : s[i]) {
      if (c.c0) q3[3 * i].emplace(ev, c.c0);
      if (c.c1) q3[3 * i + 1].emplace(ev, c.c1);
      if (c.c2) q3[3 * i + 2].emplace(ev, c.c2);
    }
  std::array<SymPoly<FqElem>, 6> p3;
  for (int r = 0; r < 3; ++r)
    for (int j = 0; j < 3; ++j) {
      sym_axpy(t, p3[r], sk.L31[r][j], q3[j]);
      sym_axpy(t, p3[3 + r], sk.L32[r][j], q3[3 + j]);
    }
  // (vi) canonical exponents, merge, drop zeros
  PublicKey pk;
  for (int comp = 0; comp < 6; ++comp) {
    for (const auto& [ev, c] : p3[comp]) {
      Monomial mon;
      for (int i = 0; i < 6; ++i) mon[i] = sys.canon(ev[i]);
      auto it = pk.polys[comp].find(mon);
      if (it == pk.polys[comp].end()) {
        if (c) pk.polys[comp].emplace(mon, c);
      } else {
        it->second ^= c;
        if (!it->second) pk.polys[comp].erase(it);
      }
    }
  }
  return pk;
}

Vec6 eval_public(const PublicKey& pk, const System& sys, const Vec6& x) {
  const BaseField& f = sys.base();
  Vec6 out{};
  for (int comp = 0; comp < 6; ++comp) {
    FqElem acc = 0;
    for (const auto& [mon, c] : pk.polys[comp]) {
      FqElem term = c;
      for (int i = 0; i < 6 && term; ++i) {
        if (mon[i] == 0) continue;
        term = x[i] ? f.mul(term, f.pow_u(x[i], mon[i])) : 0;
      }
      acc ^= term;
    }
    out[comp] = acc;
  }
  return out;
}

FqElem coeff_lookup(const PublicKey& pk, int comp, Monomial mon, const System& sys) {
  if (comp < 0 || comp > 5) fail(errc::invalid_params, "component out of range");
  for (auto& e : mon) e = sys.canon(e);
  auto it = pk.polys[comp].find(mon);
  return it == pk.polys[comp].end() ? 0 : it->second;
}

namespace {

using EvSet = std::set<std::array<mpz_class, 6>>;

EvSet ev_scale(const EvSet& s, const mpz_class& e) {
  EvSet r;
  for (const auto& ev : s) {
    std::array<mpz_class, 6> e2;
    for (int i = 0; i < 6; ++i) e2[i] = ev[i] * e;
    r.insert(std::move(e2));
  }
  return r;
}

EvSet ev_mink(const EvSet& a, const EvSet& b) {
  EvSet r;
  for (const auto& ea : a)
    for (const auto& eb : b) {
      std::array<mpz_class, 6> ev;
      for (int i = 0; i < 6; ++i) ev[i] = ea[i] + eb[i];
      r.insert(std::move(ev));
    }
  return r;
}

}  // namespace

std::array<std::set<Monomial>, 6> structural_support(const System& sys) {
  std::array<EvSet, 3> lin;
  for (int bi = 0; bi < 3; ++bi)
    for (int vi = 0; vi < 2; ++vi) {
      std::array<mpz_class, 6> ev{};
      ev[2 * bi + vi] = 1;
      lin[bi].insert(ev);
    }
  std::array<EvSet, 3> u;
  for (int i = 0; i < 3; ++i) {
    int j1 = kRowCols[i][0], j2 = kRowCols[i][1];
    u[i] = ev_mink(ev_scale(lin[j1], sys.E().e[i][j1]),
                   ev_scale(lin[j2], sys.E().e[i][j2]));
  }
  // L2 mixes (u1,u2) coordinates into the first F_{q^3} block, (u2,u3) into
  // the second
  EvSet half0 = u[0], half1 = u[2];
  half0.insert(u[1].begin(), u[1].end());
  half1.insert(u[1].begin(), u[1].end());
  std::array<std::set<Monomial>, 6> out;
  for (int i = 0; i < 2; ++i) {
    EvSet s = ev_mink(ev_scale(half0, sys.F().e[i][0]), ev_scale(half1, sys.F().e[i][1]));
    std::set<Monomial> mons;
    for (const auto& ev : s) {
      Monomial m;
      for (int k = 0; k < 6; ++k) m[k] = sys.canon(ev[k]);
      mons.insert(m);
    }
    for (int r = 0; r < 3; ++r) out[3 * i + r] = mons;
  }
  return out;
}

}  // namespace dme32
