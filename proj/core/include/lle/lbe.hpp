#pragma once

// Lower-bound-error series of a dual-rounding simulation.
//
// Indexing: series entry i (0-based) is the observable after step k = i + 1.
// A FitWindow is a half-open range [begin, end) of those entry indices.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lle/arithmetic.hpp"
#include "lle/systems.hpp"

namespace lle {

inline constexpr double kDefaultSaturation = 1e-2;
inline constexpr std::size_t kMinWindowPoints = 10;

/// 5000 iterations for maps, 30000 Euler steps for Mackey-Glass.
std::size_t default_steps(const SystemSpec& spec) noexcept;

struct TrajectoryPair {
  ChannelPair channels;
  std::vector<double> series_a;
  std::vector<double> series_b;
  /// Steps completed by both channels; both series have this length.
  std::size_t n_valid = 0;
  std::size_t n_requested = 0;
  /// Why the run stopped early, if it did.
  std::optional<std::string> truncation;

  bool truncated() const noexcept { return truncation.has_value(); }
};

/// Simulates `spec` from x0 once per channel, identical in everything but the
/// rounding direction. An escape (or singular denominator) in either channel
/// truncates both series. Throws OutOfRange for x0 outside the IC range and
/// InvalidArgument for n_steps < 2.
TrajectoryPair simulate_pair(const SystemSpec& spec, double x0,
                             std::size_t n_steps, ChannelPair channels = {},
                             Backend backend = Backend::SoftwareEmulation);

/// delta_k = |x_a(k) - x_b(k)| / 2 over the valid steps.
std::vector<double> divergence(const TrajectoryPair& pair);

struct FitWindow {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const FitWindow&, const FitWindow&) = default;
};

/// begin: first delta > 0. end: first delta >= d_sat at or after begin, or
/// deltas.size(). Throws NoDivergence if every delta is zero and
/// WindowTooShort if fewer than 10 nonzero deltas fall inside.
FitWindow select_fit_window(std::span<const double> deltas, double d_sat);

struct LbeSeries {
  /// All valid deltas, zeros included.
  std::vector<double> delta;
  /// ln(delta) for the nonzero deltas, with their step numbers k.
  std::vector<double> y;
  std::vector<std::size_t> k_index;
  FitWindow window;
  double time_scale = 1.0;

  /// (k, y) pairs inside the window.
  struct Point {
    std::size_t k;
    double y;
  };
  std::vector<Point> window_points() const;
};

/// Throws InvalidArgument if pair.n_valid < 2, plus the select_fit_window
/// errors.
LbeSeries compute_lbe(const TrajectoryPair& pair, double time_scale,
                      double d_sat = kDefaultSaturation);

}  // namespace lle
