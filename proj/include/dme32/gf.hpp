#pragma once

// GF(2^w) arithmetic for 3 <= w <= 64. An element is a bit vector packed in a
// uint64_t, bit i = coefficient of x^i. Widths up to 16 get log/exp tables,
// wider fields use shift-xor carry-less multiplication.

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "dme32/errors.hpp"

namespace dme32 {

using FqElem = std::uint64_t;
using u128 = unsigned __int128;

// monic degree-w modulus; bits 0..w-1 stored, the leading x^w term is implicit
struct BaseFieldParams {
  int w = 0;
  std::uint64_t base_modulus = 0;
  bool operator==(const BaseFieldParams&) const = default;
};

bool base_modulus_irreducible(const BaseFieldParams& p);

class BaseField {
public:
  BaseField() = default;
  explicit BaseField(const BaseFieldParams& p);

  const BaseFieldParams& params() const { return p_; }
  int w() const { return w_; }
  std::uint64_t order() const { return order_; }  // q-1, also the coordinate mask

  FqElem add(FqElem a, FqElem b) const { return a ^ b; }

  FqElem mul(FqElem a, FqElem b) const {
    if (a == 0 || b == 0) return 0;
    if (tables_) return expt_[logt_[a] + logt_[b]];
    return reduce(clmul(a, b));
  }

  FqElem inv(FqElem a) const {
    if (a == 0) fail(errc::zero_inverse, "inverse of zero");
    if (tables_) return expt_[order_ - logt_[a]];
    return pow_u(a, order_ - 1);  // a^(q-2)
  }

  // e taken literally (not assumed reduced); a=0 allowed for e>0
  FqElem pow_u(FqElem a, std::uint64_t e) const;
  FqElem pow(FqElem a, const mpz_class& e) const;

  // unique square root in characteristic 2: x^(2^(w-1))
  FqElem sqrt(FqElem a) const { return pow_u(a, std::uint64_t(1) << (w_ - 1)); }

  // absolute trace to GF(2), returned as 0/1
  FqElem trace(FqElem a) const;

  bool has_tables() const { return tables_; }

  static u128 clmul(std::uint64_t a, std::uint64_t b) {
    u128 r = 0;
    while (b) {
      r ^= u128(a) << __builtin_ctzll(b);
      b &= b - 1;
    }
    return r;
  }

  FqElem reduce(u128 v) const {
    for (int i = 2 * w_ - 2; i >= w_; --i)
      if ((v >> i) & 1) v ^= (u128(1) << i) ^ (u128(p_.base_modulus) << (i - w_));
    return FqElem(v) & order_;
  }

private:
  void build_tables();

  BaseFieldParams p_;
  int w_ = 0;
  std::uint64_t order_ = 0;
  bool tables_ = false;
  std::vector<std::uint32_t> logt_;
  std::vector<FqElem> expt_;
};

// lowercase, most significant nibble first, ceil(bits/4) digits
std::string bits_to_hex(int bits, std::uint64_t v);
std::uint64_t bits_from_hex(int bits, const std::string& s);

inline std::string fq_to_hex(int w, FqElem v) { return bits_to_hex(w, v); }
inline FqElem fq_from_hex(int w, const std::string& s) { return bits_from_hex(w, s); }

}  // namespace dme32
