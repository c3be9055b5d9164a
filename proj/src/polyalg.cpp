#include "dme32/polyalg.hpp"

#include <random>

namespace dme32 {

namespace {

mpz_class mat_det(const ExpMatrix& m) {
  const auto& e = m.e;
  if (m.dim == 2) return e[0][0] * e[1][1] - e[0][1] * e[1][0];
  return e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
         e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
         e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
}

// adapters so the polynomial routines work at both tower levels
struct Ops2 {
  const Tower& t;
  using elem = Ext2Elem;
  static constexpr int level = 2;
  elem add(elem a, elem b) const { return t.add2(a, b); }
  elem mul(elem a, elem b) const { return t.mul2(a, b); }
  elem inv(elem a) const { return t.inv2(a); }
  static bool zero(elem a) { return a.is_zero(); }
  static elem one() { return {1, 0}; }
  elem rand(std::mt19937_64& r) const {
    return {FqElem(r()) & t.base().order(), FqElem(r()) & t.base().order()};
  }
  std::uint64_t hash(elem a) const { return a.c0 * 0x9e3779b97f4a7c15ULL ^ a.c1; }
};

struct Ops3 {
  const Tower& t;
  using elem = Ext3Elem;
  static constexpr int level = 3;
  elem add(elem a, elem b) const { return t.add3(a, b); }
  elem mul(elem a, elem b) const { return t.mul3(a, b); }
  elem inv(elem a) const { return t.inv3(a); }
  static bool zero(elem a) { return a.is_zero(); }
  static elem one() { return {1, 0, 0}; }
  elem rand(std::mt19937_64& r) const {
    auto m = t.base().order();
    return {FqElem(r()) & m, FqElem(r()) & m, FqElem(r()) & m};
  }
  std::uint64_t hash(elem a) const {
    return (a.c0 * 0x9e3779b97f4a7c15ULL ^ a.c1) * 0xbf58476d1ce4e5b9ULL ^ a.c2;
  }
};

template <class O>
using P = std::vector<typename O::elem>;

template <class O>
P<O> trim(const O&, P<O> f) {
  while (!f.empty() && O::zero(f.back())) f.pop_back();
  return f;
}

template <class E>
int deg(const std::vector<E>& f) {
  return int(f.size()) - 1;  // assumes trimmed; -1 for zero
}

template <class O>
P<O> add(const O& o, const P<O>& f, const P<O>& g) {
  P<O> r(std::max(f.size(), g.size()), typename O::elem{});
  for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
  for (size_t i = 0; i < g.size(); ++i) r[i] = o.add(r[i], g[i]);
  return trim(o, r);
}

template <class O>
P<O> mul(const O& o, const P<O>& f, const P<O>& g) {
  if (f.empty() || g.empty()) return {};
  P<O> r(f.size() + g.size() - 1, typename O::elem{});
  for (size_t i = 0; i < f.size(); ++i) {
    if (O::zero(f[i])) continue;
    for (size_t j = 0; j < g.size(); ++j) r[i + j] = o.add(r[i + j], o.mul(f[i], g[j]));
  }
  return trim(o, r);
}

template <class O>
P<O> rem(const O& o, P<O> f, const P<O>& g) {
  if (g.empty()) fail(errc::degenerate_system, "division by zero polynomial");
  auto lci = o.inv(g.back());
  while (f.size() >= g.size()) {
    auto c = o.mul(f.back(), lci);
    size_t shift = f.size() - g.size();
    if (!O::zero(c))
      for (size_t i = 0; i < g.size(); ++i) f[shift + i] = o.add(f[shift + i], o.mul(c, g[i]));
    f.pop_back();
    while (!f.empty() && O::zero(f.back())) f.pop_back();
  }
  return f;
}

template <class O>
P<O> monic(const O& o, P<O> f) {
  if (f.empty()) return f;
  auto lci = o.inv(f.back());
  for (auto& c : f) c = o.mul(c, lci);
  return f;
}

template <class O>
P<O> gcd(const O& o, P<O> f, P<O> g) {
  f = trim(o, f);
  g = trim(o, g);
  while (!g.empty()) {
    f = rem(o, f, g);
    std::swap(f, g);
  }
  return monic(o, f);
}

template <class O>
typename O::elem eval(const O& o, const P<O>& f, typename O::elem x) {
  typename O::elem r{};
  for (size_t i = f.size(); i-- > 0;) r = o.add(o.mul(r, x), f[i]);
  return r;
}

// x^(2^k) mod f for all the Frobenius work below
template <class O>
P<O> sqr_mod(const O& o, const P<O>& a, const P<O>& f) {
  return rem(o, mul(o, a, a), f);
}

template <class O>
std::vector<typename O::elem> roots_of(const O& o, P<O> f) {
  f = trim(o, f);
  std::vector<typename O::elem> out;
  if (deg(f) <= 0) return out;
  int d = o.t.w() * O::level;  // field has 2^d elements

  // radical: gcd(f, x^Q - x); x^Q mod f by d squarings
  P<O> x{typename O::elem{}, O::one()};
  P<O> xq = rem(o, x, f);
  for (int i = 0; i < d; ++i) xq = sqr_mod(o, xq, f);
  P<O> g = gcd(o, f, add(o, xq, x));  // squarefree product of the linear factors

  std::uint64_t seed = 0x51ed2701a2b5e4d3ULL;
  for (auto& c : f) seed = seed * 0x100000001b3ULL ^ o.hash(c);
  std::mt19937_64 rng(seed);

  // Cantor-Zassenhaus style splitting with the GF(2) trace map
  std::vector<P<O>> stack{g};
  while (!stack.empty()) {
    P<O> cur = stack.back();
    stack.pop_back();
    int dc = deg(cur);
    if (dc <= 0) continue;
    if (dc == 1) {
      // monic x + c -> root c in characteristic 2
      out.push_back(cur[0]);
      continue;
    }
    for (;;) {
      auto theta = o.rand(rng);
      if (O::zero(theta)) continue;
      // U = sum_{i<d} (theta x)^(2^i) mod cur, the trace of theta*x
      P<O> tx{typename O::elem{}, theta};
      P<O> term = rem(o, tx, cur);
      P<O> u = term;
      for (int i = 1; i < d; ++i) {
        term = sqr_mod(o, term, cur);
        u = add(o, u, term);
      }
      P<O> h = gcd(o, cur, u);
      int dh = deg(h);
      if (dh > 0 && dh < dc) {
        // cur = h * cofactor; the division is exact
        P<O> quo(cur.size() - h.size() + 1, typename O::elem{});
        P<O> r0 = cur;
        auto lci = o.inv(h.back());
        while (r0.size() >= h.size() && !r0.empty()) {
          auto c = o.mul(r0.back(), lci);
          size_t shift = r0.size() - h.size();
          quo[shift] = c;
          for (size_t i = 0; i < h.size(); ++i)
            r0[shift + i] = o.add(r0[shift + i], o.mul(c, h[i]));
          while (!r0.empty() && O::zero(r0.back())) r0.pop_back();
        }
        stack.push_back(h);
        stack.push_back(trim(o, quo));
        break;
      }
    }
  }
  return out;
}

}  // namespace

ExpMatrix exp_matrix_inverse(const ExpMatrix& m, const mpz_class& modulus) {
  if (m.dim != 2 && m.dim != 3) fail(errc::invalid_params, "exp matrix dim");
  mpz_class det = mat_det(m);
  mpz_class det_inv;
  mpz_class dm = det % modulus;
  if (dm < 0) dm += modulus;
  if (mpz_invert(det_inv.get_mpz_t(), dm.get_mpz_t(), modulus.get_mpz_t()) == 0)
    fail(errc::not_invertible, "exp matrix determinant not invertible");
  ExpMatrix r;
  r.dim = m.dim;
  r.modulus = modulus;
  const auto& e = m.e;
  if (m.dim == 2) {
    r.e[0][0] = e[1][1];
    r.e[0][1] = -e[0][1];
    r.e[1][0] = -e[1][0];
    r.e[1][1] = e[0][0];
  } else {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
        r.e[i][j] = e[r0][c0] * e[r1][c1] - e[r0][c1] * e[r1][c0];
      }
  }
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) {
      mpz_class v = (r.e[i][j] * det_inv) % modulus;
      if (v < 0) v += modulus;
      r.e[i][j] = v;
    }
  return r;
}

ExpMatrix exp_matrix_inverse(const ExpMatrix& m) { return exp_matrix_inverse(m, m.modulus); }

UniPoly2 upoly_trim(const Tower& t, UniPoly2 f) { return trim(Ops2{t}, std::move(f)); }
UniPoly3 upoly_trim(const Tower& t, UniPoly3 f) { return trim(Ops3{t}, std::move(f)); }
int upoly_deg(const UniPoly2& f) { return int(f.size()) - 1; }
int upoly_deg(const UniPoly3& f) { return int(f.size()) - 1; }

UniPoly2 upoly_mul(const Tower& t, const UniPoly2& f, const UniPoly2& g) { return mul(Ops2{t}, f, g); }
UniPoly3 upoly_mul(const Tower& t, const UniPoly3& f, const UniPoly3& g) { return mul(Ops3{t}, f, g); }
UniPoly2 upoly_add(const Tower& t, const UniPoly2& f, const UniPoly2& g) { return add(Ops2{t}, f, g); }
UniPoly3 upoly_add(const Tower& t, const UniPoly3& f, const UniPoly3& g) { return add(Ops3{t}, f, g); }
UniPoly2 upoly_rem(const Tower& t, const UniPoly2& f, const UniPoly2& g) { return rem(Ops2{t}, f, g); }
UniPoly3 upoly_rem(const Tower& t, const UniPoly3& f, const UniPoly3& g) { return rem(Ops3{t}, f, g); }
Ext2Elem upoly_eval(const Tower& t, const UniPoly2& f, Ext2Elem x) { return eval(Ops2{t}, f, x); }
Ext3Elem upoly_eval(const Tower& t, const UniPoly3& f, Ext3Elem x) { return eval(Ops3{t}, f, x); }
UniPoly2 upoly_gcd(const Tower& t, const UniPoly2& f, const UniPoly2& g) { return gcd(Ops2{t}, f, g); }
UniPoly3 upoly_gcd(const Tower& t, const UniPoly3& f, const UniPoly3& g) { return gcd(Ops3{t}, f, g); }
std::vector<Ext2Elem> upoly_roots(const Tower& t, const UniPoly2& f) { return roots_of(Ops2{t}, f); }
std::vector<Ext3Elem> upoly_roots(const Tower& t, const UniPoly3& f) { return roots_of(Ops3{t}, f); }

Ext3Elem biquad_eval(const Tower& t, const BiQuad3& p, Ext3Elem u, Ext3Elem v) {
  Ext3Elem r{};
  Ext3Elem up[3] = {{1, 0, 0}, u, t.mul3(u, u)};
  Ext3Elem vp[3] = {{1, 0, 0}, v, t.mul3(v, v)};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; i + j < 3; ++j)
      if (!p.c[i][j].is_zero()) r = t.add3(r, t.mul3(p.c[i][j], t.mul3(up[i], vp[j])));
  return r;
}

namespace {

// determinant of a small matrix of polynomials by cofactor expansion
UniPoly3 poly_det(const Tower& t, std::vector<std::vector<UniPoly3>>& m, std::vector<int>& cols) {
  size_t row = m.size() - cols.size();
  if (cols.size() == 1) return m[row][cols[0]];
  UniPoly3 acc;
  for (size_t k = 0; k < cols.size(); ++k) {
    int c = cols[k];
    if (m[row][c].empty()) continue;
    std::vector<int> rest;
    for (size_t i = 0; i < cols.size(); ++i)
      if (i != k) rest.push_back(cols[i]);
    UniPoly3 sub = poly_det(t, m, rest);
    acc = upoly_add(t, acc, upoly_mul(t, m[row][c], sub));  // char 2: no signs
  }
  return acc;
}

UniPoly3 poly_pow(const Tower& t, UniPoly3 base, int e) {
  UniPoly3 r{Ext3Elem{1, 0, 0}};
  for (int i = 0; i < e; ++i) r = upoly_mul(t, r, base);
  return r;
}

}  // namespace

UniPoly3 resultant_eliminate(const Tower& t, const BiQuad3& p, const BiQuad3& q, int eliminate) {
  if (eliminate != 1 && eliminate != 2) fail(errc::invalid_params, "eliminate must be 1 or 2");
  // coefficients of the eliminated variable, each a polynomial in the survivor
  auto coeffs = [&](const BiQuad3& b) {
    std::array<UniPoly3, 3> r;
    for (int i = 0; i < 3; ++i) {
      UniPoly3 ci(3, Ext3Elem{});
      for (int j = 0; i + j < 3; ++j) ci[j] = (eliminate == 1) ? b.c[i][j] : b.c[j][i];
      r[i] = upoly_trim(t, ci);
    }
    return r;
  };
  auto pc = coeffs(p), qc = coeffs(q);
  int dp = 2, dq = 2;
  while (dp >= 0 && pc[dp].empty()) --dp;
  while (dq >= 0 && qc[dq].empty()) --dq;
  if (dp < 0 || dq < 0) fail(errc::degenerate_system, "zero polynomial in resultant");
  if (dp == 0) return poly_pow(t, pc[0], dq);
  if (dq == 0) return poly_pow(t, qc[0], dp);

  int n = dp + dq;
  std::vector<std::vector<UniPoly3>> syl(n, std::vector<UniPoly3>(n));
  for (int r = 0; r < dq; ++r)
    for (int k = 0; k <= dp; ++k) syl[r][r + k] = pc[dp - k];
  for (int r = 0; r < dp; ++r)
    for (int k = 0; k <= dq; ++k) syl[dq + r][r + k] = qc[dq - k];

  std::vector<int> cols(n);
  for (int i = 0; i < n; ++i) cols[i] = i;
  UniPoly3 res = poly_det(t, syl, cols);
  res = upoly_trim(t, res);
  if (res.empty()) fail(errc::degenerate_system, "resultant vanishes identically");
  return res;
}

}  // namespace dme32
