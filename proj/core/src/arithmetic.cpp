#include "lle/arithmetic.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace lle {

std::string_view to_string(Rounding r) noexcept {
  switch (r) {
    case Rounding::ToNearestEven: return "nearest";
    case Rounding::TowardPositive: return "up";
    case Rounding::TowardNegative: return "down";
    case Rounding::TowardZero: return "zero";
  }
  return "?";
}

std::optional<Rounding> parse_rounding(std::string_view text) {
  if (text == "nearest" || text == "ToNearestEven") return Rounding::ToNearestEven;
  if (text == "up" || text == "TowardPositive") return Rounding::TowardPositive;
  if (text == "down" || text == "TowardNegative") return Rounding::TowardNegative;
  if (text == "zero" || text == "TowardZero") return Rounding::TowardZero;
  return std::nullopt;
}

std::string_view to_string(Backend b) noexcept {
  return b == Backend::FpEnvironment ? "fenv" : "soft";
}

std::optional<Backend> parse_backend(std::string_view text) {
  if (text == "fenv" || text == "FpEnvironment") return Backend::FpEnvironment;
  if (text == "soft" || text == "SoftwareEmulation") return Backend::SoftwareEmulation;
  return std::nullopt;
}

ChannelPair::ChannelPair(Rounding a, Rounding b) : a_(a), b_(b) {
  if (a == b) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("channel pair must use two different rounding "
                            "directions (got {} twice)",
                            to_string(a)));
  }
}

ChannelPair ChannelPair::parse(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("expected two comma-separated rounding directions, "
                            "got '{}'",
                            text));
  }
  const auto first = parse_rounding(text.substr(0, comma));
  const auto second = parse_rounding(text.substr(comma + 1));
  if (!first || !second) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("unknown rounding direction in '{}' (use "
                            "nearest, up, down, zero)",
                            text));
  }
  return {*first, *second};
}

std::string ChannelPair::str() const {
  return fmt::format("{},{}", to_string(a_), to_string(b_));
}

namespace detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Products and quotients below this magnitude go through the rescaled
// residual; above it the FMA residual cannot underflow to zero.
const double kTinyProduct = std::ldexp(1.0, -960);

/// Moves the round-to-nearest result `s` to the directed result, given the
/// sign of (exact - s).
double settle(double s, int err_sign, Rounding r) noexcept {
  if (err_sign == 0) return s;
  switch (r) {
    case Rounding::ToNearestEven:
      return s;
    case Rounding::TowardPositive:
      return err_sign > 0 ? std::nextafter(s, kInf) : s;
    case Rounding::TowardNegative:
      return err_sign < 0 ? std::nextafter(s, -kInf) : s;
    case Rounding::TowardZero:
      // s == 0 here means the exact value underflowed, already toward zero.
      if (s > 0 && err_sign < 0) return std::nextafter(s, 0.0);
      if (s < 0 && err_sign > 0) return std::nextafter(s, 0.0);
      return s;
  }
  return s;
}

int sign_of(double v) noexcept { return (v > 0) - (v < 0); }

}  // namespace

double soft_add(double a, double b, Rounding r) noexcept {
  const double s = a + b;
  if (r == Rounding::ToNearestEven || !std::isfinite(s)) return s;
  if (s == 0.0) {
    // A zero sum of finite operands is exact; only its sign depends on r.
    if (r == Rounding::TowardNegative &&
        !(a == 0.0 && b == 0.0 && std::signbit(a) == std::signbit(b))) {
      return -0.0;
    }
    return s;
  }
  // TwoSum.
  const double bv = s - a;
  const double av = s - bv;
  const double err = (a - av) + (b - bv);
  return settle(s, sign_of(err), r);
}

double soft_mul(double a, double b, Rounding r) noexcept {
  const double p = a * b;
  if (r == Rounding::ToNearestEven || !std::isfinite(p)) return p;
  if (a == 0.0 || b == 0.0) return p;
  if (std::fabs(p) >= kTinyProduct) {
    return settle(p, sign_of(std::fma(a, b, -p)), r);
  }
  // Rescale both factors into [1, 2) so the residual is computed far from
  // the subnormal range; p scales up by the same power of two exactly.
  const int ea = std::ilogb(a);
  const int eb = std::ilogb(b);
  const double as = std::ldexp(a, -ea);
  const double bs = std::ldexp(b, -eb);
  const double ps = std::ldexp(p, -(ea + eb));
  return settle(p, sign_of(std::fma(as, bs, -ps)), r);
}

double soft_div(double a, double b, Rounding r) noexcept {
  const double q = a / b;
  if (r == Rounding::ToNearestEven || !std::isfinite(q)) return q;
  if (a == 0.0) return q;
  // a/b = (as/bs)·2^(ea-eb); qs is q on the same scale, exactly.
  const int ea = std::ilogb(a);
  const int eb = std::ilogb(b);
  const double as = std::ldexp(a, -ea);
  const double bs = std::ldexp(b, -eb);
  const double qs = std::ldexp(q, eb - ea);
  // sign(as/bs - qs) = sign(as - qs·bs) · sign(bs)
  const int err_sign = sign_of(std::fma(-qs, bs, as)) * sign_of(bs);
  return settle(q, err_sign, r);
}

}  // namespace detail

namespace {

double checked(double v, const char* op, double a, double b) {
  if (!std::isfinite(v) ||
      std::fabs(v) == std::numeric_limits<double>::max()) {
    throw Error(ErrorCode::NonFiniteResult,
                fmt::format("{}({}, {}) overflowed or is not a number", op, a, b));
  }
  return v;
}

}  // namespace

double DirectedOps::add(double a, double b) const {
  const double v = backend_ == Backend::SoftwareEmulation
                       ? detail::soft_add(a, b, direction_)
                       : detail::fenv_add(a, b, direction_);
  return checked(v, "add", a, b);
}

double DirectedOps::sub(double a, double b) const {
  const double v = backend_ == Backend::SoftwareEmulation
                       ? detail::soft_add(a, -b, direction_)
                       : detail::fenv_add(a, -b, direction_);
  return checked(v, "sub", a, b);
}

double DirectedOps::mul(double a, double b) const {
  const double v = backend_ == Backend::SoftwareEmulation
                       ? detail::soft_mul(a, b, direction_)
                       : detail::fenv_mul(a, b, direction_);
  return checked(v, "mul", a, b);
}

double DirectedOps::div(double a, double b) const {
  const double v = backend_ == Backend::SoftwareEmulation
                       ? detail::soft_div(a, b, direction_)
                       : detail::fenv_div(a, b, direction_);
  return checked(v, "div", a, b);
}

double DirectedOps::abs(double a) noexcept { return std::fabs(a); }

double DirectedOps::min(double a, double b) noexcept { return b < a ? b : a; }

double DirectedOps::int_pow(double x, unsigned c) const {
  if (c == 0) return 1.0;
  double acc = x;
  for (unsigned i = 1; i < c; ++i) acc = mul(acc, x);
  return acc;
}

}  // namespace lle
