// Hardware rounding backend. Built with -frounding-math; the volatile
// operands keep the optimizer from folding or hoisting the arithmetic across
// the fesetround calls.

#include <cfenv>

#include <fmt/format.h>

#include "lle/arithmetic.hpp"

namespace lle::detail {
namespace {

int to_fe(Rounding r) {
  switch (r) {
    case Rounding::ToNearestEven: return FE_TONEAREST;
    case Rounding::TowardPositive: return FE_UPWARD;
    case Rounding::TowardNegative: return FE_DOWNWARD;
    case Rounding::TowardZero: return FE_TOWARDZERO;
  }
  return FE_TONEAREST;
}

}  // namespace

FpRoundingScope::FpRoundingScope(Rounding r) : saved_(std::fegetround()) {
  const int want = to_fe(r);
  changed_ = saved_ != want;
  if (changed_ && std::fesetround(want) != 0) {
    throw Error(ErrorCode::UnsupportedDirection,
                fmt::format("host cannot select rounding direction '{}'; use "
                            "the software backend",
                            to_string(r)));
  }
}

FpRoundingScope::~FpRoundingScope() {
  if (changed_) std::fesetround(saved_);
}

Rounding ambient_rounding() {
  switch (std::fegetround()) {
    case FE_UPWARD: return Rounding::TowardPositive;
    case FE_DOWNWARD: return Rounding::TowardNegative;
    case FE_TOWARDZERO: return Rounding::TowardZero;
    default: return Rounding::ToNearestEven;
  }
}

double fenv_add(double a, double b, Rounding r) {
  const FpRoundingScope scope(r);
  volatile double va = a;
  volatile double vb = b;
  volatile double res = va + vb;
  return res;
}

double fenv_mul(double a, double b, Rounding r) {
  const FpRoundingScope scope(r);
  volatile double va = a;
  volatile double vb = b;
  volatile double res = va * vb;
  return res;
}

double fenv_div(double a, double b, Rounding r) {
  const FpRoundingScope scope(r);
  volatile double va = a;
  volatile double vb = b;
  volatile double res = va / vb;
  return res;
}

}  // namespace lle::detail
