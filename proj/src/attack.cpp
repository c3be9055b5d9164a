#include "dme32/attack.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <sstream>

#include "dme32/errors.hpp"
#include "dme32/polyalg.hpp"

namespace dme32 {

namespace {

FqElem coord3(const Ext3Elem& x, int r) { return r == 0 ? x.c0 : (r == 1 ? x.c1 : x.c2); }

// x^e with the 0^0 = 1 convention for absent variables
FqElem pw(const BaseField& f, FqElem x, std::uint64_t e) {
  if (e == 0) return 1;
  if (x == 0) return 0;
  return f.pow_u(x, e);
}

}  // namespace

EtaColumns extract_eta_columns(const PublicKey& pk, const System& sys) {
  const mpz_class& E21 = sys.E().e[1][0];
  const mpz_class& E23 = sys.E().e[1][2];
  const mpz_class Ftop = sys.F().e[0][0] + sys.F().e[0][1];
  const mpz_class Fbot = sys.F().e[1][0] + sys.F().e[1][1];

  // variable pairs: (x2,x6) c-column, (x1,x5) f, (x1,x6) g, (x2,x5) h
  const std::array<std::pair<int, int>, 4> pairs{{{1, 5}, {0, 4}, {0, 5}, {1, 4}}};
  EtaColumns out;
  std::array<std::array<FqElem, 6>*, 4> dest{&out.col_c, &out.col_f, &out.col_g, &out.col_h};
  for (int p = 0; p < 4; ++p) {
    auto [i, j] = pairs[p];
    for (int comp = 0; comp < 6; ++comp) {
      const mpz_class& Fr = comp < 3 ? Ftop : Fbot;
      Monomial mon{};
      mon[i] = sys.canon(E21 * Fr);
      mon[j] = sys.canon(E23 * Fr);
      (*dest[p])[comp] = coeff_lookup(pk, comp, mon, sys);
    }
  }
  bool any = false;
  for (FqElem x : out.col_c) any = any || x != 0;
  if (!any) fail(errc::missing_monomials, "no (x2,x6) coefficients in public key");
  return out;
}

FGHValues recover_fgh(const EtaColumns& cols, const System& sys) {
  const BaseField& f = sys.base();
  int it = -1, ib = -1;
  for (int i = 0; i < 3 && it < 0; ++i)
    if (cols.col_c[i] != 0) it = i;
  for (int i = 3; i < 6 && ib < 0; ++i)
    if (cols.col_c[i] != 0) ib = i;
  if (it < 0 || ib < 0) fail(errc::missing_monomials, "c-column vanishes on one half");

  const ExpMatrix Fi = sys.Finv1();
  FqElem ict = f.inv(cols.col_c[it]);
  FqElem icb = f.inv(cols.col_c[ib]);
  auto solve_pair = [&](const std::array<FqElem, 6>& col,
                        const char* name) -> std::array<FqElem, 2> {
    FqElem rt = col[it], rb = col[ib];
    if (rt == 0 || rb == 0) fail(errc::zero_quotient, std::string("zero quotient ") + name);
    FqElem qt = f.mul(rt, ict);
    FqElem qb = f.mul(rb, icb);
    return {f.mul(f.pow(qt, Fi.e[0][0]), f.pow(qb, Fi.e[0][1])),
            f.mul(f.pow(qt, Fi.e[1][0]), f.pow(qb, Fi.e[1][1]))};
  };
  auto fp = solve_pair(cols.col_f, "f");
  auto gp = solve_pair(cols.col_g, "g");
  auto hp = solve_pair(cols.col_h, "h");
  return {fp[0], fp[1], gp[0], gp[1], hp[0], hp[1]};
}

FqElem solve_c(const FGHValues& v, const System& sys) {
  const BaseField& f = sys.base();
  FqElem a = sys.tower().params().quad_a, b = sys.tower().params().quad_b;
  // (f1 + c f2' T)(1 + cT) = (g1 + c g2' T)(h1 + c h2' T) over F_q[T]/(T^2+aT+b)
  //   1-coord: b(f2' + g2'h2') c^2 + f1 + g1h1 = 0
  //   T-coord: a(f2' + g2'h2') c^2 + (f1 + f2' + g1h2' + g2'h1) c = 0
  FqElem k = v.f2p ^ f.mul(v.g2p, v.h2p);
  FqElem B1 = f.mul(b, k), C1 = v.f1 ^ f.mul(v.g1, v.h1);
  FqElem A2 = f.mul(a, k), B2 = v.f1 ^ v.f2p ^ f.mul(v.g1, v.h2p) ^ f.mul(v.g2p, v.h1);
  if (A2 != 0) {
    FqElem c = f.mul(B2, f.inv(A2));
    if (c == 0) fail(errc::no_common_root, "T-coordinate equation has only the zero root");
    if ((f.mul(B1, f.mul(c, c)) ^ C1) != 0)
      fail(errc::no_common_root, "quadratic pair has no common root");
    return c;
  }
  if (B2 != 0) fail(errc::no_common_root, "degenerate T-coordinate equation is unsatisfiable");
  if (B1 == 0) {
    if (C1 == 0) fail(errc::ambiguous_root, "both coordinate equations vanish");
    fail(errc::no_common_root, "1-coordinate equation is unsatisfiable");
  }
  FqElem c = f.sqrt(f.mul(C1, f.inv(B1)));
  if (c == 0) fail(errc::no_common_root, "square root collapses to zero");
  return c;
}

namespace {

RecoveredL1 recover_l1_direct(const PublicKey& pk, const System& sys) {
  const BaseField& f = sys.base();
  const Tower& tw = sys.tower();
  EtaColumns cols = extract_eta_columns(pk, sys);
  FGHValues vals = recover_fgh(cols, sys);
  FqElem c = solve_c(vals, sys);

  Ext2Elem fv{vals.f1, f.mul(c, vals.f2p)};
  Ext2Elem hv{vals.h1, f.mul(c, vals.h2p)};
  mpz_class o2 = tw.order(2);
  mpz_class e21i, e23i;
  mpz_invert(e21i.get_mpz_t(), mpz_class(sys.E().e[1][0] % o2).get_mpz_t(), o2.get_mpz_t());
  mpz_invert(e23i.get_mpz_t(), mpz_class(sys.E().e[1][2] % o2).get_mpz_t(), o2.get_mpz_t());

  Ext2Elem l31 = tw.pow2(hv, e23i);
  Ext2Elem l11 = tw.pow2(tw.mul2(fv, tw.inv2(hv)), e21i);
  Ext2Elem l32 = tw.pow2(Ext2Elem{1, c}, e23i);

  RecoveredL1 out;
  out.c = c;
  for (int i = 0; i < 6; ++i) {
    const mpz_class& Fr = i < 3 ? sys.F().e[0][1] : sys.F().e[1][1];
    out.eta[i] = f.mul(cols.col_c[i], f.inv(f.pow(c, Fr)));
  }
  out.L11 = {{{l11.c0, 1}, {l11.c1, 0}}};
  out.L13 = {{{l31.c0, l32.c0}, {l31.c1, l32.c1}}};
  return out;
}

}  // namespace

PublicKey substitute_x5x6(const PublicKey& pk, const System& sys, FqElem t5, FqElem t6) {
  const BaseField& f = sys.base();
  if (f.mul(t5, t6) == 1) fail(errc::invalid_params, "substitution matrix is singular");
  const std::uint64_t order = f.order();
  auto canon_sum = [order](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
    if (a == 0 && b == 0) return 0;
    unsigned __int128 s = (unsigned __int128)a + b;
    return (std::uint64_t)((s - 1) % order) + 1;
  };
  // (ca*x5 + cb*x6)^e in char 2: one term per submask of e
  auto expand = [&](std::uint64_t e, FqElem ca, FqElem cb) {
    std::vector<std::array<std::uint64_t, 3>> terms;  // (k5, k6, coef)
    std::uint64_t sub = e;
    while (true) {
      std::uint64_t k = sub, r = e - k;
      FqElem co = f.mul(pw(f, ca, k), pw(f, cb, r));
      if (co) terms.push_back({k, r, co});
      if (sub == 0) break;
      sub = (sub - 1) & e;
    }
    return terms;
  };

  PublicKey out;
  for (int comp = 0; comp < 6; ++comp) {
    std::map<Monomial, FqElem> acc;
    for (const auto& [ev, cf] : pk.polys[comp]) {
      auto t1 = expand(ev[4], 1, t5);
      auto t2 = expand(ev[5], t6, 1);
      for (const auto& [k5a, k6a, ca] : t1)
        for (const auto& [k5b, k6b, cb] : t2) {
          Monomial nev = ev;
          nev[4] = canon_sum(k5a, k5b);
          nev[5] = canon_sum(k6a, k6b);
          acc[nev] ^= f.mul(cf, f.mul(ca, cb));
        }
    }
    for (const auto& [ev, cf] : acc)
      if (cf) out.polys[comp].emplace(ev, cf);
  }
  return out;
}

RecoveredL1 recover_l1(const PublicKey& pk, const System& sys) {
  const BaseField& f = sys.base();
  const std::uint64_t mask = f.order();
  std::uint64_t tried = 0;
  // diagonal sweep: both parameters stay small, since curing a degenerate
  // L13 second column needs t5 != 0 while zero f/g/h coordinates need t6 != 0
  auto attempt = [&](std::uint64_t t5, std::uint64_t t6) -> std::optional<RecoveredL1> {
    if (f.mul(t5, t6) == 1) return std::nullopt;
    if (++tried > 256) fail(errc::fallback_exhausted, "no admissible variable change found");
    try {
      PublicKey pk2 = (t5 || t6) ? substitute_x5x6(pk, sys, t5, t6) : pk;
      RecoveredL1 rec = recover_l1_direct(pk2, sys);
      rec.subst_t5 = t5;
      rec.subst_t6 = t6;
      rec.pk = std::move(pk2);
      return rec;
    } catch (const dme_error&) {
      return std::nullopt;
    }
  };
  for (std::uint64_t d = 0;; ++d) {
    for (std::uint64_t t6 = 0; t6 <= d; ++t6)
      if (auto rec = attempt(d, t6)) return *rec;
    for (std::uint64_t t5 = 0; t5 < d; ++t5)
      if (auto rec = attempt(t5, d)) return *rec;
    if (d == mask) break;
  }
  fail(errc::fallback_exhausted, "variable-change sweep exhausted");
}

Vec6 reduced_eval(const PublicKey& pk, const L1Blocks& l1, const System& sys, const Vec6& v) {
  const BaseField& f = sys.base();
  auto blocks = reblock2(v);
  for (const auto& b : blocks)
    if (b.is_zero()) fail(errc::zero_block, "reduced map needs nonzero base blocks");
  Vec6 y = unblock2(exp_map(sys, sys.Einv(), blocks));
  auto x0 = mat2_vec(f, mat2_inv(f, l1.L11), {y[0], y[1]});
  auto x1 = mat2_vec(f, mat2_inv(f, l1.L12), {y[2], y[3]});
  auto x2 = mat2_vec(f, mat2_inv(f, l1.L13), {y[4], y[5]});
  return eval_public(pk, sys, {x0[0], x0[1], x1[0], x1[1], x2[0], x2[1]});
}

std::optional<ZTable> collect_z(const PublicKey& pk, const L1Blocks& l1, const System& sys,
                                std::uint64_t seed) {
  const BaseField& f = sys.base();
  const std::uint64_t mask = f.order();

  // the reduced map is F_q-linear in the 18 products v_i^{ea} v_j^{eb}
  std::uint64_t F11 = sys.canon(sys.F().e[0][0]), F12 = sys.canon(sys.F().e[0][1]);
  std::uint64_t F21 = sys.canon(sys.F().e[1][0]), F22 = sys.canon(sys.F().e[1][1]);
  std::map<std::array<std::uint64_t, 4>, int> seen;
  std::vector<std::array<std::uint64_t, 4>> monos;
  int colof[2][3][3];
  for (int fam = 0; fam < 2; ++fam) {
    std::uint64_t ea = fam == 0 ? F11 : F21, eb = fam == 0 ? F12 : F22;
    for (int i = 0; i < 3; ++i)
      for (int j = 3; j < 6; ++j) {
        std::array<std::uint64_t, 4> key{(std::uint64_t)i, (std::uint64_t)j, ea, eb};
        auto [itr, fresh] = seen.emplace(key, (int)monos.size());
        if (fresh) monos.push_back(key);
        colof[fam][i][j - 3] = itr->second;
      }
  }
  const int K = (int)monos.size();
  const int nrows = K + 2;

  for (int restart = 0; restart < 4; ++restart) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0xd1b54a32d192ed03ULL + restart);
    std::vector<std::vector<FqElem>> A;
    A.reserve(nrows);
    int tries = 0;
    while ((int)A.size() < nrows) {
      if (++tries > 1000) return std::nullopt;
      Vec6 v;
      for (auto& x : v) x = rng() & mask;
      if ((v[0] | v[1]) == 0 || (v[2] | v[3]) == 0 || (v[4] | v[5]) == 0) continue;
      std::vector<FqElem> row(K + 6, 0);
      for (const auto& [key, idx] : seen)
        row[idx] ^= f.mul(f.pow_u(v[key[0]], key[2]), f.pow_u(v[key[1]], key[3]));
      Vec6 val = reduced_eval(pk, l1, sys, v);
      for (int c = 0; c < 6; ++c) row[K + c] = val[c];
      A.push_back(std::move(row));
    }

    int r = 0;
    for (int col = 0; col < K && r < nrows; ++col) {
      int sel = -1;
      for (int t = r; t < nrows; ++t)
        if (A[t][col] != 0) {
          sel = t;
          break;
        }
      if (sel < 0) {
        r = -1;  // rank deficient sample set, resample
        break;
      }
      std::swap(A[r], A[sel]);
      FqElem pv = f.inv(A[r][col]);
      for (auto& x : A[r]) x = f.mul(x, pv);
      for (int t = 0; t < nrows; ++t)
        if (t != r && A[t][col] != 0) {
          FqElem ft = A[t][col];
          for (int c2 = col; c2 < K + 6; ++c2) A[t][c2] ^= f.mul(ft, A[r][c2]);
        }
      ++r;
    }
    if (r < K) continue;

    for (int t = K; t < nrows; ++t)
      for (int c = 0; c < K + 6; ++c)
        if (A[t][c] != 0) return std::nullopt;  // inconsistent: wrong candidate

    ZTable z;
    for (int i = 0; i < 3; ++i)
      for (int j = 3; j < 6; ++j) {
        int c0 = colof[0][i][j - 3], c1 = colof[1][i][j - 3];
        auto& zv = z.at(i, j);
        for (int c = 0; c < 6; ++c) {
          zv[c] = A[c0][K + c];
          if (c1 != c0) zv[c] ^= A[c1][K + c];
        }
      }
    return z;
  }
  return std::nullopt;
}

namespace {

BiQuad3 affine_product(const Tower& tw, const std::array<Ext3Elem, 3>& p,
                       const std::array<Ext3Elem, 3>& q) {
  // (p0 u + p1 v + p2)(q0 u + q1 v + q2); index 0 -> u, 1 -> v, 2 -> 1
  static constexpr int du[3] = {1, 0, 0}, dv[3] = {0, 1, 0};
  BiQuad3 r;
  for (int a = 0; a < 3; ++a) {
    if (p[a].is_zero()) continue;
    for (int b = 0; b < 3; ++b) {
      if (q[b].is_zero()) continue;
      auto& cell = r.c[du[a] + du[b]][dv[a] + dv[b]];
      cell = tw.add3(cell, tw.mul3(p[a], q[b]));
    }
  }
  return r;
}

bool biquad_zero(const BiQuad3& p) {
  for (const auto& row : p.c)
    for (const auto& x : row)
      if (!x.is_zero()) return false;
  return true;
}

int biquad_deg_u(const BiQuad3& p) {
  for (int i = 2; i >= 0; --i)
    for (int j = 0; j < 3; ++j)
      if (!p.c[i][j].is_zero()) return i;
  return -1;
}

UniPoly3 subst_v(const Tower& tw, const BiQuad3& p, Ext3Elem v) {
  UniPoly3 out(3, Ext3Elem{});
  for (int i = 0; i < 3; ++i) {
    UniPoly3 row{p.c[i][0], p.c[i][1], p.c[i][2]};
    out[i] = upoly_eval(tw, upoly_trim(tw, row), v);
  }
  return upoly_trim(tw, out);
}

}  // namespace

std::vector<ThetaCandidate> solve_thetas(const ZTable& z, int half, const System& sys,
                                         int* resultant_degree) {
  const BaseField& f = sys.base();
  const Tower& tw = sys.tower();
  const int off = half == 0 ? 0 : 3;
  if (resultant_degree) *resultant_degree = -1;

  auto aform = [&](int i, int j) -> std::array<Ext3Elem, 3> {
    const auto& zz = z.at(i, j);
    return {Ext3Elem{zz[off + 0], 0, 0}, Ext3Elem{zz[off + 1], 0, 0},
            Ext3Elem{zz[off + 2], 0, 0}};
  };

  // 2x2 balance relations A_a A_b = A_c A_d among the nine affine forms
  static constexpr int quads[5][4][2] = {
      {{0, 3}, {1, 4}, {0, 4}, {1, 3}}, {{0, 3}, {1, 5}, {0, 5}, {1, 3}},
      {{0, 3}, {2, 4}, {0, 4}, {2, 3}}, {{1, 3}, {2, 4}, {1, 4}, {2, 3}},
      {{0, 4}, {1, 5}, {0, 5}, {1, 4}}};
  std::vector<BiQuad3> eqs;
  for (const auto& q : quads) {
    BiQuad3 lhs = affine_product(tw, aform(q[0][0], q[0][1]), aform(q[1][0], q[1][1]));
    BiQuad3 rhs = affine_product(tw, aform(q[2][0], q[2][1]), aform(q[3][0], q[3][1]));
    BiQuad3 eq;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) eq.c[i][j] = tw.add3(lhs.c[i][j], rhs.c[i][j]);
    if (!biquad_zero(eq)) eqs.push_back(eq);
  }
  if (eqs.size() < 2) return {};

  // first pair with genuine u-dependence and a nonvanishing resultant
  UniPoly3 res;
  const BiQuad3 *P1 = nullptr, *P2 = nullptr;
  for (size_t i = 0; i < eqs.size() && !P1; ++i) {
    if (biquad_deg_u(eqs[i]) < 1) continue;
    for (size_t j = i + 1; j < eqs.size() && !P1; ++j) {
      if (biquad_deg_u(eqs[j]) < 1) continue;
      try {
        res = resultant_eliminate(tw, eqs[i], eqs[j], 1);
        P1 = &eqs[i];
        P2 = &eqs[j];
      } catch (const dme_error&) {
      }
    }
  }
  if (!P1) return {};
  if (resultant_degree) *resultant_degree = upoly_deg(res);

  std::vector<ThetaCandidate> cands;
  for (const Ext3Elem& th2 : upoly_roots(tw, res)) {
    UniPoly3 u1 = subst_v(tw, *P1, th2);
    UniPoly3 u2 = subst_v(tw, *P2, th2);
    UniPoly3 g = upoly_gcd(tw, u1, u2);
    if (upoly_deg(g) < 1) continue;
    for (const Ext3Elem& th1 : upoly_roots(tw, g)) cands.push_back({th1, th2});
  }

  std::vector<ThetaCandidate> good;
  for (const auto& cand : cands) {
    std::array<std::array<Ext3Elem, 3>, 3> X;
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i)
      for (int j = 3; j < 6 && ok; ++j) {
        const auto& zz = z.at(i, j);
        Ext3Elem x{f.mul(zz[off + 0], cand.th1.c0) ^ f.mul(zz[off + 1], cand.th2.c0) ^
                       zz[off + 2],
                   f.mul(zz[off + 0], cand.th1.c1) ^ f.mul(zz[off + 1], cand.th2.c1),
                   f.mul(zz[off + 0], cand.th1.c2) ^ f.mul(zz[off + 1], cand.th2.c2)};
        if (x.is_zero()) ok = false;
        X[i][j - 3] = x;
      }
    for (int i1 = 0; i1 < 3 && ok; ++i1)
      for (int i2 = i1 + 1; i2 < 3 && ok; ++i2)
        for (int j1 = 0; j1 < 3 && ok; ++j1)
          for (int j2 = j1 + 1; j2 < 3 && ok; ++j2) {
            Ext3Elem lhs = tw.mul3(X[i1][j1], X[i2][j2]);
            Ext3Elem rhs = tw.mul3(X[i1][j2], X[i2][j1]);
            if (!(lhs.c0 == rhs.c0 && lhs.c1 == rhs.c1 && lhs.c2 == rhs.c2)) ok = false;
          }
    if (ok) good.push_back(cand);
  }
  return good;
}

std::array<Ext3Elem, 6> recover_zetas(const ThetaCandidate& top, const ThetaCandidate& bot,
                                      const ZTable& z, const System& sys) {
  const BaseField& f = sys.base();
  const Tower& tw = sys.tower();
  auto eval_x = [&](const ThetaCandidate& th, int off, int i, int j) -> Ext3Elem {
    const auto& zz = z.at(i, j);
    return {f.mul(zz[off + 0], th.th1.c0) ^ f.mul(zz[off + 1], th.th2.c0) ^ zz[off + 2],
            f.mul(zz[off + 0], th.th1.c1) ^ f.mul(zz[off + 1], th.th2.c1),
            f.mul(zz[off + 0], th.th1.c2) ^ f.mul(zz[off + 1], th.th2.c2)};
  };
  auto eq3 = [](const Ext3Elem& a, const Ext3Elem& b) {
    return a.c0 == b.c0 && a.c1 == b.c1 && a.c2 == b.c2;
  };

  static constexpr int base_pairs[5][2] = {{0, 3}, {0, 4}, {0, 5}, {1, 3}, {2, 3}};
  std::array<std::vector<Ext3Elem>, 6> collected;
  for (const auto& pr : base_pairs) {
    int i = pr[0], j = pr[1];
    Ext3Elem X = eval_x(top, 0, i, j);
    Ext3Elem Y = eval_x(bot, 3, i, j);
    auto zeta_pair = exp_map(sys, sys.Finv3(), std::array<Ext3Elem, 2>{X, Y});
    collected[i].push_back(zeta_pair[0]);
    collected[j].push_back(zeta_pair[1]);
  }
  std::array<Ext3Elem, 6> zeta;
  for (int k = 0; k < 6; ++k) {
    for (const auto& v : collected[k])
      if (!eq3(v, collected[k][0]))
        fail(errc::inconsistent, "zeta cross-checks disagree");
    zeta[k] = collected[k][0];
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j) {
      Ext3Elem lhs = tw.mul3(tw.pow3(zeta[i], sys.F().e[0][0]), tw.pow3(zeta[j], sys.F().e[0][1]));
      if (!eq3(lhs, eval_x(top, 0, i, j))) fail(errc::inconsistent, "top half equation fails");
      Ext3Elem lhs2 = tw.mul3(tw.pow3(zeta[i], sys.F().e[1][0]), tw.pow3(zeta[j], sys.F().e[1][1]));
      if (!eq3(lhs2, eval_x(bot, 3, i, j))) fail(errc::inconsistent, "bottom half equation fails");
    }
  return zeta;
}

std::optional<PrivateKey> recover_l2l3(const PublicKey& pk, const L1Blocks& l1,
                                       const System& sys, std::uint64_t seed, int* dtop,
                                       int* dbot) {
  const BaseField& f = sys.base();
  auto z = collect_z(pk, l1, sys, seed);
  if (!z) return std::nullopt;
  int d0 = -1, d1 = -1;
  auto top = solve_thetas(*z, 0, sys, &d0);
  auto bot = solve_thetas(*z, 1, sys, &d1);
  if (dtop) *dtop = d0;
  if (dbot) *dbot = d1;

  for (const auto& tc : top)
    for (const auto& bc : bot) {
      try {
        auto zeta = recover_zetas(tc, bc, *z, sys);
        PrivateKey key;
        key.L11 = l1.L11;
        key.L12 = l1.L12;
        key.L13 = l1.L13;
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) {
            key.L21[r][c] = coord3(zeta[c], r);
            key.L22[r][c] = coord3(zeta[3 + c], r);
          }
        Mat3 thm{}, bhm{};
        const std::array<Ext3Elem, 3> tcols{tc.th1, tc.th2, Ext3Elem{1, 0, 0}};
        const std::array<Ext3Elem, 3> bcols{bc.th1, bc.th2, Ext3Elem{1, 0, 0}};
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) {
            thm[r][c] = coord3(tcols[c], r);
            bhm[r][c] = coord3(bcols[c], r);
          }
        key.L31 = mat3_inv(f, thm);
        key.L32 = mat3_inv(f, bhm);
        if (derive_public_key(key, sys) == pk) return key;
      } catch (const dme_error&) {
      }
    }
  return std::nullopt;
}

std::string AttackReport::summary() const {
  std::ostringstream os;
  os << "L1 recovery: " << (degenerate_branch ? "variable-change fallback" : "direct")
     << " (t5=" << subst_t5 << ", t6=" << subst_t6 << "), " << l1_millis << " ms\n";
  os << "L12 search: " << candidates_tried << " candidates, " << search_millis << " ms\n";
  os << "resultant degrees: top=" << resultant_deg_top << " bottom=" << resultant_deg_bot
     << "\n";
  os << "verified: " << (verified ? "true" : "false") << "\n";
  return os.str();
}

std::string AttackReport::machine_line() const {
  std::ostringstream os;
  os << "candidates_tried=" << candidates_tried << " branch="
     << (degenerate_branch ? "degenerate" : "unit_c") << " subst=" << subst_t5 << ","
     << subst_t6 << " resultant_deg=" << resultant_deg_top << "," << resultant_deg_bot
     << " verified=" << (verified ? "true" : "false");
  return os.str();
}

std::pair<PrivateKey, AttackReport> full_attack(const PublicKey& pk, const System& sys,
                                                int workers) {
  const BaseField& f = sys.base();
  AttackReport rep;
  auto t0 = std::chrono::steady_clock::now();
  RecoveredL1 rec = recover_l1(pk, sys);
  auto t1 = std::chrono::steady_clock::now();
  rep.l1_millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
  rep.degenerate_branch = rec.subst_t5 != 0 || rec.subst_t6 != 0;
  rep.subst_t5 = rec.subst_t5;
  rep.subst_t6 = rec.subst_t6;

  SearchResult sr = workers > 1 ? search_l12(rec.pk, rec, sys, workers)
                                : search_l12_serial(rec.pk, rec, sys);
  auto t2 = std::chrono::steady_clock::now();
  rep.search_millis = std::chrono::duration<double, std::milli>(t2 - t1).count();
  rep.candidates_tried = sr.candidates_tried;
  rep.resultant_deg_top = sr.resultant_deg_top;
  rep.resultant_deg_bot = sr.resultant_deg_bot;

  PrivateKey key = sr.key;
  if (rep.degenerate_branch) {
    Mat2 M{{{1, rec.subst_t5}, {rec.subst_t6, 1}}};
    key.L13 = mat2_mul(f, key.L13, mat2_inv(f, M));
  }
  if (!(derive_public_key(key, sys) == pk))
    fail(errc::verification_failed, "mapped-back key does not match the public key");
  rep.verified = true;
  return {key, rep};
}

}  // namespace dme32
