#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dme32/dme.hpp"
#include "dme32/errors.hpp"

using namespace dme32;

namespace {

Vec6 random_valid_m(const System& sys, std::mt19937_64& rng) {
  const FqElem mask = sys.base().order();
  for (;;) {
    Vec6 m;
    for (auto& x : m) x = (FqElem)rng() & mask;
    auto b = reblock2(m);
    if (!b[0].is_zero() && !b[1].is_zero() && !b[2].is_zero()) return m;
  }
}

}  // namespace

TEST_CASE("parameter generation invariants and determinism") {
  for (int w : {3, 8, 13}) {
    for (std::uint64_t seed : {0ULL, 1ULL, 2ULL, 41ULL}) {
      SystemParams p = gen_system_params(w, seed);
      SystemParams p2 = gen_system_params(w, seed);
      CHECK(p == p2);
      System sys(p);  // ctor validates both invertibility invariants
      CHECK(p.E.e[0][2] == 0);
      CHECK(p.E.e[1][1] == 0);
      CHECK(p.E.e[2][0] == 0);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(mpz_popcount(p.F.e[i][j].get_mpz_t()) == 1);
    }
    CHECK(!(gen_system_params(w, 5) == gen_system_params(w, 6)));
  }
}

TEST_CASE("nist preset matches the published matrices") {
  SystemParams p = gen_system_params(48, 0, Preset::nist);
  CHECK(p.tower == nist_tower());
  auto pw = [](int k) -> mpz_class { return mpz_class(1) << k; };
  CHECK(p.E.e[0][0] == pw(24));
  CHECK(p.E.e[0][1] == pw(59));
  CHECK(p.E.e[1][0] == pw(21));
  CHECK(p.E.e[1][2] == pw(28));
  CHECK(p.E.e[2][1] == pw(29));
  CHECK(p.E.e[2][2] == pw(65));
  CHECK(p.F.e[0][0] == pw(50));
  CHECK(p.F.e[0][1] == pw(24));
  CHECK(p.F.e[1][0] == pw(7));
  CHECK(p.F.e[1][1] == pw(88));
  System sys(p);
  CHECK(sys.w() == 48);
  CHECK_THROWS_AS(gen_system_params(8, 0, Preset::nist), dme_error);
}

TEST_CASE("keygen determinism and invertible blocks") {
  System sys(gen_system_params(8, 3));
  const BaseField& f = sys.base();
  CHECK(keygen(sys, 17) == keygen(sys, 17));
  CHECK(!(keygen(sys, 17) == keygen(sys, 18)));
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    PrivateKey k = keygen(sys, seed);
    for (const Mat2* m : {&k.L11, &k.L12, &k.L13}) CHECK(mat2_det(f, *m) != 0);
    for (const Mat3* m : {&k.L21, &k.L22, &k.L31, &k.L32}) CHECK(mat3_det(f, *m) != 0);
  }
}

TEST_CASE("exp_map definition, identity, round trip") {
  System sys(gen_system_params(8, 1));
  const Tower& t = sys.tower();
  std::mt19937_64 rng(99);
  const FqElem mask = sys.base().order();
  auto re2 = [&] {
    Ext2Elem x;
    do {
      x = {(FqElem)rng() & mask, (FqElem)rng() & mask};
    } while (x.is_zero());
    return x;
  };
  auto re3 = [&] {
    Ext3Elem x;
    do {
      x = {(FqElem)rng() & mask, (FqElem)rng() & mask, (FqElem)rng() & mask};
    } while (x.is_zero());
    return x;
  };

  ExpMatrix id;
  id.dim = 3;
  id.modulus = t.order(2);
  for (int i = 0; i < 3; ++i) id.e[i][i] = 1;
  std::array<Ext2Elem, 3> xs = {re2(), re2(), re2()};
  CHECK(exp_map(sys, id, xs) == xs);

  // second component with E22 = 0 is x1^E21 * x3^E23
  auto u = exp_map(sys, sys.E(), xs);
  CHECK(u[1] == t.mul2(t.pow2(xs[0], sys.E().e[1][0]), t.pow2(xs[2], sys.E().e[1][2])));

  for (int trial = 0; trial < 100; ++trial) {
    std::array<Ext2Elem, 3> v = {re2(), re2(), re2()};
    CHECK(exp_map(sys, sys.Einv(), exp_map(sys, sys.E(), v)) == v);
    std::array<Ext3Elem, 2> v3 = {re3(), re3()};
    CHECK(exp_map(sys, sys.Finv3(), exp_map(sys, sys.F(), v3)) == v3);
  }

  xs[1] = {0, 0};
  CHECK_THROWS_AS(exp_map(sys, sys.E(), xs), dme_error);
}

TEST_CASE("encrypt/decrypt round trip") {
  System sys(gen_system_params(8, 2));
  PrivateKey sk = keygen(sys, 7);
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    Vec6 m = random_valid_m(sys, rng);
    Vec6 ct = encrypt_private(sk, sys, m);
    CHECK(decrypt(sk, sys, ct) == m);
  }

  System nist(gen_system_params(48, 0, Preset::nist));
  PrivateKey nk = keygen(nist, 5);
  for (int trial = 0; trial < 10; ++trial) {
    Vec6 m = random_valid_m(nist, rng);
    CHECK(decrypt(nk, nist, encrypt_private(nk, nist, m)) == m);
  }
}

TEST_CASE("domain errors") {
  System sys(gen_system_params(8, 2));
  PrivateKey sk = keygen(sys, 7);
  CHECK_THROWS_AS(encrypt_private(sk, sys, Vec6{0, 0, 1, 2, 3, 4}), dme_error);
  CHECK_THROWS_AS(encrypt_private(sk, sys, Vec6{1, 2, 3, 4, 0, 0}), dme_error);
  CHECK_THROWS_AS(decrypt(sk, sys, Vec6{0, 0, 0, 0, 0, 0}), dme_error);
  try {
    encrypt_private(sk, sys, Vec6{0, 0, 1, 2, 3, 4});
    CHECK(false);
  } catch (const dme_error& e) {
    CHECK(e.code == errc::zero_block);
  }
  try {
    decrypt(sk, sys, Vec6{0, 0, 0, 0, 0, 0});
    CHECK(false);
  } catch (const dme_error& e) {
    CHECK(e.code == errc::invalid_ciphertext);
  }

  // a perturbed ciphertext either decrypts to a consistent preimage or errors
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 100; ++trial) {
    Vec6 ct = encrypt_private(sk, sys, random_valid_m(sys, rng));
    ct[rng() % 6] ^= 1 + ((FqElem)rng() & (sys.base().order() - 1));
    try {
      Vec6 m2 = decrypt(sk, sys, ct);
      CHECK(encrypt_private(sk, sys, m2) == ct);
    } catch (const dme_error& e) {
      CHECK(e.code == errc::invalid_ciphertext);
    }
  }
}

TEST_CASE("public key evaluation agrees with the private composition") {
  std::mt19937_64 rng(77);
  System sys(gen_system_params(8, 4));
  PrivateKey sk = keygen(sys, 11);
  PublicKey pk = derive_public_key(sk, sys);
  CHECK(pk == derive_public_key(sk, sys));
  for (int trial = 0; trial < 1000; ++trial) {
    Vec6 m = random_valid_m(sys, rng);
    CHECK(eval_public(pk, sys, m) == encrypt_private(sk, sys, m));
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PrivateKey k = keygen(sys, 100 + seed);
    PublicKey p = derive_public_key(k, sys);
    for (int trial = 0; trial < 50; ++trial) {
      Vec6 m = random_valid_m(sys, rng);
      CHECK(eval_public(p, sys, m) == encrypt_private(k, sys, m));
    }
  }

  System nist(gen_system_params(48, 0, Preset::nist));
  PrivateKey nk = keygen(nist, 8);
  PublicKey npk = derive_public_key(nk, nist);
  for (int trial = 0; trial < 20; ++trial) {
    Vec6 m = random_valid_m(nist, rng);
    CHECK(eval_public(npk, nist, m) == encrypt_private(nk, nist, m));
  }
}

TEST_CASE("support soundness") {
  for (std::uint64_t seed : {0ULL, 9ULL}) {
    System sys(gen_system_params(8, seed));
    auto supp = structural_support(sys);
    for (std::uint64_t ks = 0; ks < 10; ++ks) {
      PublicKey pk = derive_public_key(keygen(sys, ks), sys);
      for (int comp = 0; comp < 6; ++comp)
        for (const auto& [mon, c] : pk.polys[comp]) {
          CHECK(c != 0);
          CHECK(supp[comp].count(mon) == 1);
        }
    }
  }
  System nist(gen_system_params(48, 0, Preset::nist));
  auto supp = structural_support(nist);
  PublicKey pk = derive_public_key(keygen(nist, 3), nist);
  for (int comp = 0; comp < 6; ++comp)
    for (const auto& [mon, c] : pk.polys[comp]) CHECK(supp[comp].count(mon) == 1);
}

TEST_CASE("exponent canonicalization") {
  System sys(gen_system_params(8, 4));
  const std::uint64_t o1 = sys.base().order();
  CHECK(sys.canon(mpz_class(0)) == 0);
  CHECK(sys.canon(mpz_class(1)) == 1);
  CHECK(sys.canon(mpz_class(o1)) == o1);
  CHECK(sys.canon(mpz_class(o1) + 1) == 1);
  CHECK(sys.canon(mpz_class(o1) * 3 + 7) == 7);

  PrivateKey sk = keygen(sys, 11);
  PublicKey pk = derive_public_key(sk, sys);
  for (int comp = 0; comp < 6; ++comp)
    for (const auto& [mon, c] : pk.polys[comp]) {
      Monomial raw = mon;
      for (auto& e : raw)
        if (e) e += o1;
      CHECK(coeff_lookup(pk, comp, raw, sys) == c);
    }
  CHECK(coeff_lookup(pk, 0, Monomial{1, 2, 3, 4, 5, 6}, sys) == 0);

  PublicKey empty;
  CHECK(eval_public(empty, sys, Vec6{1, 2, 3, 4, 5, 6}) == Vec6{0, 0, 0, 0, 0, 0});
}
