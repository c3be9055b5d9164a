#pragma once

// equivalent-key transformations and reduction to the normal form with unit
// second/third/first columns and a constrained L13 second column

#include <utility>

#include "dme32/dme.hpp"

namespace dme32 {

enum class NormalBranch { unit_c, pure_t };

struct NormalizedKeyTag {
  NormalBranch branch = NormalBranch::unit_c;
  FqElem c_value = 0;  // (a+bT)^E23 = 1+cT in branch unit_c
  bool operator==(const NormalizedKeyTag&) const = default;
};

// left-multiply the L1 blocks by H(alpha), H(beta), H(gamma) and absorb the
// scalings into L2; requires alpha^E21 * gamma^E23 in F_q*
PrivateKey transform_abc(const PrivateKey& k, const System& sys, Ext2Elem alpha,
                         Ext2Elem beta, Ext2Elem gamma);

// left-multiply the L2 blocks by G(lambda), G(mu) and absorb into L3
PrivateKey transform_lm(const PrivateKey& k, const System& sys, Ext3Elem lambda, Ext3Elem mu);

std::pair<PrivateKey, NormalizedKeyTag> normalize_key(const PrivateKey& k, const System& sys);

bool same_public_key(const PrivateKey& a, const PrivateKey& b, const System& sys);

}  // namespace dme32
