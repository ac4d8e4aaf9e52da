#pragma once

// Correctly rounded binary64 reference for the directed operations, computed
// with MPFR at 53 bits with the binary64 exponent range and subnormals.

#include <mpfr.h>

#include "lle/arithmetic.hpp"

namespace lle::testing {

enum class Op { Add, Sub, Mul, Div };

struct Rounded {
  double value;
  bool exact;
};

inline mpfr_rnd_t to_mpfr(Rounding r) {
  switch (r) {
    case Rounding::ToNearestEven: return MPFR_RNDN;
    case Rounding::TowardPositive: return MPFR_RNDU;
    case Rounding::TowardNegative: return MPFR_RNDD;
    case Rounding::TowardZero: return MPFR_RNDZ;
  }
  return MPFR_RNDN;
}

inline Rounded reference_round(Op op, double a, double b, Rounding r) {
  const mpfr_exp_t old_min = mpfr_get_emin();
  const mpfr_exp_t old_max = mpfr_get_emax();
  mpfr_set_emin(-1073);
  mpfr_set_emax(1024);
  mpfr_t x, y, z;
  mpfr_inits2(53, x, y, z, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_d(x, a, MPFR_RNDN);
  mpfr_set_d(y, b, MPFR_RNDN);
  const mpfr_rnd_t rnd = to_mpfr(r);
  int t = 0;
  switch (op) {
    case Op::Add: t = mpfr_add(z, x, y, rnd); break;
    case Op::Sub: t = mpfr_sub(z, x, y, rnd); break;
    case Op::Mul: t = mpfr_mul(z, x, y, rnd); break;
    case Op::Div: t = mpfr_div(z, x, y, rnd); break;
  }
  t = mpfr_subnormalize(z, t, rnd);
  const Rounded out{mpfr_get_d(z, MPFR_RNDN), t == 0};
  mpfr_clears(x, y, z, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_emin(old_min);
  mpfr_set_emax(old_max);
  return out;
}

/// Applies `op` through the raw kernels of the library.
inline double kernel(Op op, double a, double b, Rounding r, Backend backend) {
  const bool soft = backend == Backend::SoftwareEmulation;
  switch (op) {
    case Op::Add:
      return soft ? detail::soft_add(a, b, r) : detail::fenv_add(a, b, r);
    case Op::Sub:
      return soft ? detail::soft_add(a, -b, r) : detail::fenv_add(a, -b, r);
    case Op::Mul:
      return soft ? detail::soft_mul(a, b, r) : detail::fenv_mul(a, b, r);
    case Op::Div:
      return soft ? detail::soft_div(a, b, r) : detail::fenv_div(a, b, r);
  }
  return 0.0;
}

}  // namespace lle::testing
