#pragma once

#include <stdexcept>
#include <string>

namespace dme32 {

enum class errc {
  parse,
  invalid_params,
  zero_inverse,
  undefined_power,
  zero_block,
  invalid_ciphertext,
  not_invertible,
  degenerate_system,
  constraint_violated,
  missing_monomials,
  zero_quotient,
  no_common_root,
  ambiguous_root,
  fallback_exhausted,
  no_solution,
  ambiguous,
  inconsistent,
  verification_failed,
  search_exhausted,
};

class dme_error : public std::runtime_error {
public:
  dme_error(errc c, const std::string& what) : std::runtime_error(what), code(c) {}
  errc code;
};

[[noreturn]] inline void fail(errc c, const std::string& what) { throw dme_error(c, what); }

}  // namespace dme32
