#pragma once

// Directed-rounding binary64 arithmetic.
//
// Two backends produce bitwise-identical results:
//
//  * SoftwareEmulation computes the round-to-nearest result, recovers the sign
//    of the rounding error with an error-free transformation (TwoSum for
//    addition, an FMA residual for multiplication and division) and steps one
//    ulp in the requested direction when the nearest result lies on the wrong
//    side. It never touches the floating-point environment, so a context is a
//    plain value that may be shared between threads.
//
//  * FpEnvironment switches the hardware rounding direction with fesetround.
//    The environment belongs to the calling thread: a context using this
//    backend must stay on that thread. Operations restore the ambient
//    direction they found; with_channel() installs the direction once for a
//    whole computation so the per-operation switch becomes a no-op.
//
// A result whose magnitude reaches the largest finite binary64 is reported as
// NonFiniteResult in every direction (TowardZero/TowardNegative would
// otherwise saturate instead of overflowing), which keeps the two backends in
// agreement and turns overflow into a trajectory escape for callers.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "lle/error.hpp"

namespace lle {

enum class Rounding : std::uint8_t {
  ToNearestEven,
  TowardPositive,
  TowardNegative,
  TowardZero,
};

inline constexpr std::array<Rounding, 4> kAllRoundings = {
    Rounding::ToNearestEven, Rounding::TowardPositive,
    Rounding::TowardNegative, Rounding::TowardZero};

std::string_view to_string(Rounding r) noexcept;
/// Accepts the canonical names plus the short aliases nearest/up/down/zero.
std::optional<Rounding> parse_rounding(std::string_view text);

enum class Backend : std::uint8_t { FpEnvironment, SoftwareEmulation };

std::string_view to_string(Backend b) noexcept;
std::optional<Backend> parse_backend(std::string_view text);

/// The two rounding directions of a dual simulation. They must differ.
class ChannelPair {
 public:
  /// Round-to-nearest against round-up.
  constexpr ChannelPair() = default;
  ChannelPair(Rounding a, Rounding b);

  constexpr Rounding a() const noexcept { return a_; }
  constexpr Rounding b() const noexcept { return b_; }
  ChannelPair swapped() const { return {b_, a_}; }

  /// "nearest,up" style text.
  static ChannelPair parse(std::string_view text);
  std::string str() const;

  friend constexpr bool operator==(const ChannelPair&,
                                   const ChannelPair&) = default;

 private:
  Rounding a_ = Rounding::ToNearestEven;
  Rounding b_ = Rounding::TowardPositive;
};

/// Elementary binary64 operations rounded in one fixed direction.
class DirectedOps {
 public:
  explicit DirectedOps(Rounding direction,
                       Backend backend = Backend::SoftwareEmulation) noexcept
      : direction_(direction), backend_(backend) {}

  Rounding direction() const noexcept { return direction_; }
  Backend backend() const noexcept { return backend_; }

  double add(double a, double b) const;
  double sub(double a, double b) const;
  double mul(double a, double b) const;
  double div(double a, double b) const;

  // Exact; never round.
  static double abs(double a) noexcept;
  static double min(double a, double b) noexcept;

  /// x^c as the left-to-right chain ((1·x)·x)·x ... with c multiplications
  /// after the first factor; int_pow(x, 0) is 1 and int_pow(x, 1) is x.
  double int_pow(double x, unsigned c) const;

 private:
  Rounding direction_;
  Backend backend_;
};

namespace detail {

// Raw kernels; no overflow check. Exposed for tests and benchmarks.
double soft_add(double a, double b, Rounding r) noexcept;
double soft_mul(double a, double b, Rounding r) noexcept;
double soft_div(double a, double b, Rounding r) noexcept;
double fenv_add(double a, double b, Rounding r);
double fenv_mul(double a, double b, Rounding r);
double fenv_div(double a, double b, Rounding r);

/// RAII scope for the hardware rounding direction of the calling thread.
class FpRoundingScope {
 public:
  explicit FpRoundingScope(Rounding r);
  ~FpRoundingScope();
  FpRoundingScope(const FpRoundingScope&) = delete;
  FpRoundingScope& operator=(const FpRoundingScope&) = delete;

 private:
  int saved_;
  bool changed_;
};

/// Current hardware rounding direction of the calling thread.
Rounding ambient_rounding();

}  // namespace detail

/// Runs `computation(ops)` with every operation of `ops` rounded toward
/// `direction`. For the FpEnvironment backend the hardware direction is held
/// for the duration of the call and the previous one restored afterwards,
/// also when the computation throws. Throws UnsupportedDirection when the
/// host cannot select the direction.
template <typename F>
decltype(auto) with_channel(Rounding direction, Backend backend,
                            F&& computation) {
  const DirectedOps ops(direction, backend);
  if (backend == Backend::SoftwareEmulation) {
    return std::forward<F>(computation)(ops);
  }
  detail::FpRoundingScope scope(direction);
  return std::forward<F>(computation)(ops);
}

}  // namespace lle
