#pragma once

// The (3,2,q) scheme itself: parameters, keys, the staged encryption map, its
// inverse, and the symbolic expansion of the composition into a public
// coefficient table.

#include <array>
#include <map>
#include <set>

#include "dme32/polyalg.hpp"

namespace dme32 {

struct SystemParams {
  TowerParams tower;
  ExpMatrix E;  // 3x3, rows (.,.,0) (.,0,.) (0,.,.), modulus q^2-1
  ExpMatrix F;  // 2x2, all entries nonzero, modulus q^3-1
  bool operator==(const SystemParams&) const = default;
};

// validated parameter context with the tower and the inverse exponent
// matrices precomputed
class System {
public:
  explicit System(const SystemParams& p);

  const SystemParams& params() const { return p_; }
  const Tower& tower() const { return t_; }
  const BaseField& base() const { return t_.base(); }
  int w() const { return t_.w(); }

  const ExpMatrix& E() const { return p_.E; }
  const ExpMatrix& F() const { return p_.F; }
  const ExpMatrix& Einv() const { return Einv_; }   // mod q^2-1
  const ExpMatrix& Finv3() const { return Finv3_; }  // mod q^3-1
  const ExpMatrix& Finv1() const { return Finv1_; }  // mod q-1

  // exponent reduced into {0} u [1, q-1]
  std::uint64_t canon(const mpz_class& e) const;
  std::uint64_t canon(std::uint64_t e) const;

private:
  SystemParams p_;
  Tower t_;
  ExpMatrix Einv_, Finv3_, Finv1_;
};

struct PrivateKey {
  Mat2 L11{}, L12{}, L13{};
  Mat3 L21{}, L22{}, L31{}, L32{};
  bool operator==(const PrivateKey&) const = default;
};

// canonical exponent vector: entry 0 or in [1, q-1]
using Monomial = std::array<std::uint64_t, 6>;

struct PublicKey {
  std::array<std::map<Monomial, FqElem>, 6> polys;  // nonzero coefficients only
  bool operator==(const PublicKey&) const = default;
};

enum class Preset { none, nist };

SystemParams gen_system_params(int w, std::uint64_t seed, Preset preset = Preset::none);

PrivateKey keygen(const System& sys, std::uint64_t seed);

// component i = prod_j blocks[j]^(M[i][j]); blocks must all be nonzero
std::array<Ext2Elem, 3> exp_map(const System& sys, const ExpMatrix& m,
                                const std::array<Ext2Elem, 3>& blocks);
std::array<Ext3Elem, 2> exp_map(const System& sys, const ExpMatrix& m,
                                const std::array<Ext3Elem, 2>& blocks);

Vec6 encrypt_private(const PrivateKey& sk, const System& sys, const Vec6& m);
Vec6 decrypt(const PrivateKey& sk, const System& sys, const Vec6& ct);

PublicKey derive_public_key(const PrivateKey& sk, const System& sys);
Vec6 eval_public(const PublicKey& pk, const System& sys, const Vec6& x);

// comp is 0-based; mon is canonicalized before lookup; absent -> 0
FqElem coeff_lookup(const PublicKey& pk, int comp, Monomial mon, const System& sys);

// exponent support implied by E and F alone (key-independent superset)
std::array<std::set<Monomial>, 6> structural_support(const System& sys);

}  // namespace dme32
