#include "dme32/gf.hpp"

#include <cstdio>

namespace dme32 {

namespace {

int deg128(u128 v) {
  if (v == 0) return -1;
  std::uint64_t hi = std::uint64_t(v >> 64);
  if (hi) return 127 - __builtin_clzll(hi);
  return 63 - __builtin_clzll(std::uint64_t(v));
}

u128 mod128(u128 a, u128 b) {
  int db = deg128(b);
  for (int i = deg128(a); i >= db; i = deg128(a)) a ^= b << (i - db);
  return a;
}

u128 gcd128(u128 a, u128 b) {
  while (b) {
    a = mod128(a, b);
    std::swap(a, b);
  }
  return a;
}

}  // namespace

bool base_modulus_irreducible(const BaseFieldParams& p) {
  if (p.w < 3 || p.w > 64) return false;
  if (p.w < 64 && (p.base_modulus >> p.w)) return false;
  if ((p.base_modulus & 1) == 0) return false;  // x would divide it
  u128 f = (u128(1) << p.w) | u128(p.base_modulus);
  // x^(2^i) mod f accumulated by squaring; a proper factor of degree d <= w/2
  // shows up as a nontrivial gcd with x^(2^d) - x
  u128 r = 2;
  for (int i = 1; i <= p.w / 2; ++i) {
    u128 sq = 0;  // square of an up-to-63-degree poly, spread bits
    std::uint64_t rv = std::uint64_t(r);
    while (rv) {
      int k = __builtin_ctzll(rv);
      sq ^= u128(1) << (2 * k);
      rv &= rv - 1;
    }
    r = mod128(sq, f);
    u128 g = gcd128(f, r ^ 2);
    if (deg128(g) > 0) return false;
  }
  return true;
}

BaseField::BaseField(const BaseFieldParams& p) : p_(p), w_(p.w) {
  if (!base_modulus_irreducible(p))
    fail(errc::invalid_params, "base modulus not a degree-w irreducible");
  order_ = (w_ == 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << w_) - 1);
  if (w_ <= 16) build_tables();
}

FqElem BaseField::pow_u(FqElem a, std::uint64_t e) const {
  if (a == 0) {
    if (e == 0) fail(errc::undefined_power, "0^0");
    return 0;
  }
  e %= order_;
  if (e == 0) return 1;
  if (tables_) return expt_[std::uint64_t(logt_[a]) * e % order_];
  FqElem r = 1, base = a;
  while (e) {
    if (e & 1) r = reduce(clmul(r, base));
    base = reduce(clmul(base, base));
    e >>= 1;
  }
  return r;
}

FqElem BaseField::pow(FqElem a, const mpz_class& e) const {
  if (a == 0) {
    if (sgn(e) == 0) fail(errc::undefined_power, "0^0");
    return 0;
  }
  std::uint64_t r = mpz_fdiv_ui(e.get_mpz_t(), order_);
  if (r == 0) return 1;
  return pow_u(a, r);
}

FqElem BaseField::trace(FqElem a) const {
  FqElem t = 0, x = a;
  for (int i = 0; i < w_; ++i) {
    t ^= x;
    x = mul(x, x);
  }
  return t;  // lands in GF(2)
}

void BaseField::build_tables() {
  std::uint64_t q = std::uint64_t(1) << w_;
  // prime factors of the group order, by trial division
  std::vector<std::uint64_t> primes;
  std::uint64_t n = order_;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      primes.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) primes.push_back(n);

  FqElem g = 0;
  for (FqElem cand = 2; cand < q; ++cand) {
    bool prim = true;
    for (std::uint64_t pr : primes) {
      FqElem r = 1, base = cand;
      std::uint64_t e = order_ / pr;
      while (e) {
        if (e & 1) r = reduce(clmul(r, base));
        base = reduce(clmul(base, base));
        e >>= 1;
      }
      if (r == 1) {
        prim = false;
        break;
      }
    }
    if (prim) {
      g = cand;
      break;
    }
  }

  logt_.assign(q, 0);
  expt_.assign(2 * order_, 0);
  FqElem x = 1;
  for (std::uint64_t i = 0; i < order_; ++i) {
    expt_[i] = x;
    logt_[x] = std::uint32_t(i);
    x = reduce(clmul(x, g));
  }
  for (std::uint64_t i = order_; i < 2 * order_; ++i) expt_[i] = expt_[i - order_];
  tables_ = true;
}

std::string bits_to_hex(int bits, std::uint64_t v) {
  int digits = (bits + 3) / 4;
  char buf[20];
  std::snprintf(buf, sizeof buf, "%0*llx", digits, static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t bits_from_hex(int bits, const std::string& s) {
  int digits = (bits + 3) / 4;
  if (int(s.size()) != digits) fail(errc::parse, "hex field width mismatch: " + s);
  std::uint64_t v = 0;
  for (char ch : s) {
    int d;
    if (ch >= '0' && ch <= '9') d = ch - '0';
    else if (ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
    else if (ch >= 'A' && ch <= 'F') d = ch - 'A' + 10;
    else fail(errc::parse, "bad hex digit in " + s);
    v = (v << 4) | std::uint64_t(d);
  }
  if (bits < 64 && (v >> bits)) fail(errc::parse, "hex value exceeds " + std::to_string(bits) + " bits");
  return v;
}

}  // namespace dme32
