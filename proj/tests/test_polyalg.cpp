#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "dme32/polyalg.hpp"

using namespace dme32;

namespace {

Tower make_tower(int w, std::uint64_t seed = 1) { return Tower(gen_tower_params(w, seed)); }

Ext3Elem rnd3(const Tower& t, std::mt19937_64& rng) {
  auto m = t.base().order();
  return {rng() & m, rng() & m, rng() & m};
}

// enumerate all of F_{q^3} for exhaustive oracles at tiny w
std::vector<Ext3Elem> all3(const Tower& t) {
  std::uint64_t q = t.base().order() + 1;
  std::vector<Ext3Elem> v;
  v.reserve(q * q * q);
  for (std::uint64_t a = 0; a < q; ++a)
    for (std::uint64_t b = 0; b < q; ++b)
      for (std::uint64_t c = 0; c < q; ++c) v.push_back({a, b, c});
  return v;
}

UniPoly3 linear(const Tower& t, Ext3Elem r) {
  // x + r, root r in char 2
  (void)t;
  return {r, Ext3Elem{1, 0, 0}};
}

bool contains(const std::vector<Ext3Elem>& v, Ext3Elem x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

mpz_class p2(int k) { return mpz_class(1) << k; }

}  // namespace

TEST_CASE("exp matrix inverse") {
  mpz_class mod2 = (mpz_class(1) << 16) - 1;  // q^2-1 at w=8
  ExpMatrix id;
  id.dim = 2;
  id.e[0][0] = 1;
  id.e[1][1] = 1;
  id.modulus = mod2;
  CHECK(exp_matrix_inverse(id) == id);

  // the published F at w=48, inverted mod q^3-1
  mpz_class mod3_48 = (mpz_class(1) << 144) - 1;
  ExpMatrix f;
  f.dim = 2;
  f.e[0][0] = p2(50);
  f.e[0][1] = p2(24);
  f.e[1][0] = p2(7);
  f.e[1][1] = p2(88);
  f.modulus = mod3_48;
  ExpMatrix fi = exp_matrix_inverse(f);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      mpz_class acc = 0;
      for (int k = 0; k < 2; ++k) acc += f.e[i][k] * fi.e[k][j];
      acc %= mod3_48;
      CHECK(acc == (i == j ? 1 : 0));
    }

  // random toy 3x3 with the E zero-pattern, mod q^2-1 at w=8
  std::mt19937_64 rng(3);
  int done = 0;
  while (done < 20) {
    ExpMatrix e;
    e.dim = 3;
    e.modulus = mod2;
    e.e[0][0] = p2(int(rng() % 16));
    e.e[0][1] = p2(int(rng() % 16));
    e.e[1][0] = p2(int(rng() % 16));
    e.e[1][2] = p2(int(rng() % 16));
    e.e[2][1] = p2(int(rng() % 16));
    e.e[2][2] = p2(int(rng() % 16));
    ExpMatrix ei;
    try {
      ei = exp_matrix_inverse(e);
    } catch (const dme_error&) {
      continue;
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        mpz_class acc = 0;
        for (int k = 0; k < 3; ++k) acc += e.e[i][k] * ei.e[k][j];
        acc %= mod2;
        CHECK(acc == (i == j ? 1 : 0));
      }
    ++done;
  }

  ExpMatrix sing;
  sing.dim = 2;
  sing.e[0][0] = 3;  // det = 3*5 - 15 = 0
  sing.e[0][1] = 15;
  sing.e[1][0] = 1;
  sing.e[1][1] = 5;
  sing.modulus = mod2;
  CHECK_THROWS_AS(exp_matrix_inverse(sing), dme_error);
}

TEST_CASE("upoly gcd") {
  Tower t = make_tower(8);
  std::mt19937_64 rng(5);
  Ext3Elem r = rnd3(t, rng), s = rnd3(t, rng), u = rnd3(t, rng);
  // distinct by construction below
  s.c0 ^= 1;
  u.c1 ^= 1;
  if (s == r) s.c2 ^= 1;
  if (u == r || u == s) u.c0 ^= 2;

  UniPoly3 fr = upoly_mul(t, linear(t, r), linear(t, s));
  UniPoly3 gr = upoly_mul(t, linear(t, r), linear(t, u));
  UniPoly3 g = upoly_gcd(t, fr, gr);
  CHECK(g == linear(t, r));

  CHECK(upoly_gcd(t, fr, UniPoly3{}) == upoly_mul(t, fr, {t.inv3(fr.back())}));
  CHECK(upoly_gcd(t, UniPoly3{}, UniPoly3{}).empty());

  for (int i = 0; i < 50; ++i) {
    UniPoly3 a(1 + rng() % 5, Ext3Elem{}), b(1 + rng() % 5, Ext3Elem{});
    for (auto& c : a) c = rnd3(t, rng);
    for (auto& c : b) c = rnd3(t, rng);
    a = upoly_trim(t, a);
    b = upoly_trim(t, b);
    UniPoly3 d = upoly_gcd(t, a, b);
    if (!d.empty()) {
      if (!a.empty()) CHECK(upoly_rem(t, a, d).empty());
      if (!b.empty()) CHECK(upoly_rem(t, b, d).empty());
    }
  }
}

TEST_CASE("upoly roots constructed cases") {
  Tower t = make_tower(8);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    Ext3Elem r = rnd3(t, rng), s = rnd3(t, rng);
    if (r == s) s.c0 ^= 1;
    auto rt = upoly_roots(t, linear(t, r));
    REQUIRE(rt.size() == 1);
    CHECK(rt[0] == r);

    UniPoly3 q = upoly_mul(t, linear(t, r), linear(t, s));
    auto rt2 = upoly_roots(t, q);
    REQUIRE(rt2.size() == 2);
    CHECK(contains(rt2, r));
    CHECK(contains(rt2, s));

    // quartic with two roots and an irreducible quadratic factor x^2 + x + n,
    // irreducible iff Tr(n) = 1 over F_{q^3}
    Ext3Elem n;
    for (;;) {
      n = rnd3(t, rng);
      Ext3Elem tr{};
      Ext3Elem x = n;
      for (int i = 0; i < 24; ++i) {
        tr = t.add3(tr, x);
        x = t.mul3(x, x);
      }
      if (tr == Ext3Elem{1, 0, 0}) break;
    }
    UniPoly3 quad{n, Ext3Elem{1, 0, 0}, Ext3Elem{1, 0, 0}};
    UniPoly3 quartic = upoly_mul(t, q, quad);
    auto rt4 = upoly_roots(t, quartic);
    REQUIRE(rt4.size() == 2);
    CHECK(contains(rt4, r));
    CHECK(contains(rt4, s));
    for (auto& root : rt4) CHECK(upoly_eval(t, quartic, root).is_zero());
  }
}

TEST_CASE("upoly roots exhaustive oracle small field") {
  // level 3 at w=4: 4096 elements scanned directly
  Tower t = make_tower(4);
  auto universe = all3(t);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 25; ++trial) {
    UniPoly3 f(5, Ext3Elem{});
    for (auto& c : f) c = rnd3(t, rng);
    f = upoly_trim(t, f);
    if (upoly_deg(f) < 1) continue;
    std::vector<Ext3Elem> expect;
    for (auto& x : universe)
      if (upoly_eval(t, f, x).is_zero()) expect.push_back(x);
    auto got = upoly_roots(t, f);
    CHECK(got.size() == expect.size());
    for (auto& r : expect) CHECK(contains(got, r));
  }
}

TEST_CASE("upoly roots level 2 exhaustive at w=8") {
  Tower t = make_tower(8);
  std::uint64_t q = t.base().order() + 1;
  std::mt19937_64 rng(11);
  auto m = t.base().order();
  for (int trial = 0; trial < 10; ++trial) {
    UniPoly2 f(5, Ext2Elem{});
    for (auto& c : f) c = {rng() & m, rng() & m};
    f = upoly_trim(t, f);
    if (upoly_deg(f) < 1) continue;
    std::vector<Ext2Elem> expect;
    for (std::uint64_t a = 0; a < q; ++a)
      for (std::uint64_t b = 0; b < q; ++b)
        if (upoly_eval(t, f, {a, b}).is_zero()) expect.push_back({a, b});
    auto got = upoly_roots(t, f);
    CHECK(got.size() == expect.size());
    for (auto& r : expect)
      CHECK(std::find(got.begin(), got.end(), r) != got.end());
  }
}

TEST_CASE("resultant hand case") {
  Tower t = make_tower(8);
  // P = uv - 1, Q = u - v; eliminating u leaves v^2 - 1
  BiQuad3 p, q;
  p.c[1][1] = {1, 0, 0};
  p.c[0][0] = {1, 0, 0};  // char 2: -1 = 1
  q.c[1][0] = {1, 0, 0};
  q.c[0][1] = {1, 0, 0};
  UniPoly3 r = resultant_eliminate(t, p, q, 1);
  REQUIRE(upoly_deg(r) == 2);
  UniPoly3 expect{Ext3Elem{1, 0, 0}, Ext3Elem{}, Ext3Elem{1, 0, 0}};
  // make monic for comparison
  auto lci = t.inv3(r.back());
  for (auto& c : r) c = t.mul3(c, lci);
  CHECK(r == expect);
}

TEST_CASE("resultant vanishes at common zeros") {
  Tower t = make_tower(8);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    Ext3Elem u0 = rnd3(t, rng), v0 = rnd3(t, rng);
    BiQuad3 p, q;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; i + j < 3; ++j) {
        p.c[i][j] = rnd3(t, rng);
        q.c[i][j] = rnd3(t, rng);
      }
    // adjust constants so (u0, v0) is a common zero
    p.c[0][0] = t.add3(p.c[0][0], biquad_eval(t, p, u0, v0));
    q.c[0][0] = t.add3(q.c[0][0], biquad_eval(t, q, u0, v0));
    REQUIRE(biquad_eval(t, p, u0, v0).is_zero());
    for (int elim : {1, 2}) {
      UniPoly3 r;
      try {
        r = resultant_eliminate(t, p, q, elim);
      } catch (const dme_error& e) {
        CHECK(e.code == errc::degenerate_system);
        continue;
      }
      CHECK(upoly_deg(r) <= 4);
      Ext3Elem survivor = (elim == 1) ? v0 : u0;
      CHECK(upoly_eval(t, r, survivor).is_zero());
    }
  }
}

TEST_CASE("resultant exhaustive oracle tiny field") {
  // all common zeros over F_{q^3}^2 at w=3 project into the resultant roots
  Tower t = make_tower(3);
  auto universe = all3(t);
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 6; ++trial) {
    BiQuad3 p, q;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; i + j < 3; ++j) {
        p.c[i][j] = rnd3(t, rng);
        q.c[i][j] = rnd3(t, rng);
      }
    UniPoly3 r;
    try {
      r = resultant_eliminate(t, p, q, 1);
    } catch (const dme_error&) {
      continue;
    }
    auto roots = upoly_roots(t, r);
    for (auto& u : universe)
      for (auto& v : universe)
        if (biquad_eval(t, p, u, v).is_zero() && biquad_eval(t, q, u, v).is_zero())
          CHECK(contains(roots, v));
  }
}
