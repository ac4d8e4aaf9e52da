#include "lle/lbe.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace lle {
namespace {

struct ChannelRun {
  std::vector<double> series;
  std::optional<std::string> stop;
};

ChannelRun run_channel(const SystemSpec& spec, double x0, std::size_t n_steps,
                       const DirectedOps& ops) {
  ChannelRun run;
  run.series.reserve(n_steps);
  SystemState state = initial_state(spec, x0);
  try {
    for (std::size_t k = 1; k <= n_steps; ++k) {
      advance(spec, state, ops);
      run.series.push_back(observable(spec, state));
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TrajectoryEscape &&
        e.code() != ErrorCode::SingularDenominator) {
      throw;
    }
    run.stop = fmt::format("{} at step {} ({})", to_string(e.code()),
                           run.series.size() + 1, to_string(ops.direction()));
  }
  return run;
}

}  // namespace

std::size_t default_steps(const SystemSpec& spec) noexcept {
  return spec.kind == SystemKind::DiscreteMap ? 5000 : 30000;
}

TrajectoryPair simulate_pair(const SystemSpec& spec, double x0,
                             std::size_t n_steps, ChannelPair channels,
                             Backend backend) {
  if (n_steps < 2) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("need at least 2 steps, got {}", n_steps));
  }
  // Validate before spending time on either channel.
  (void)initial_state(spec, x0);

  auto run = [&](Rounding r) {
    return with_channel(r, backend, [&](const DirectedOps& ops) {
      return run_channel(spec, x0, n_steps, ops);
    });
  };
  ChannelRun a = run(channels.a());
  ChannelRun b = run(channels.b());

  TrajectoryPair pair;
  pair.channels = channels;
  pair.n_requested = n_steps;
  pair.n_valid = std::min(a.series.size(), b.series.size());
  a.series.resize(pair.n_valid);
  b.series.resize(pair.n_valid);
  pair.series_a = std::move(a.series);
  pair.series_b = std::move(b.series);
  pair.truncation = a.stop ? a.stop : b.stop;
  return pair;
}

std::vector<double> divergence(const TrajectoryPair& pair) {
  std::vector<double> delta(pair.n_valid);
  for (std::size_t i = 0; i < pair.n_valid; ++i) {
    delta[i] = std::fabs(pair.series_a[i] - pair.series_b[i]) / 2.0;
  }
  return delta;
}

FitWindow select_fit_window(std::span<const double> deltas, double d_sat) {
  if (!(d_sat > 0)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("saturation threshold must be positive, got {}",
                            d_sat));
  }
  const auto first =
      std::find_if(deltas.begin(), deltas.end(), [](double d) { return d > 0; });
  if (first == deltas.end()) {
    throw Error(ErrorCode::NoDivergence,
                "the two rounding channels never diverged");
  }
  const auto sat = std::find_if(first, deltas.end(),
                                [d_sat](double d) { return d >= d_sat; });
  const FitWindow w{static_cast<std::size_t>(first - deltas.begin()),
                    static_cast<std::size_t>(sat - deltas.begin())};
  const auto usable = std::count_if(first, sat, [](double d) { return d > 0; });
  if (static_cast<std::size_t>(usable) < kMinWindowPoints) {
    throw Error(ErrorCode::WindowTooShort,
                fmt::format("only {} usable points before saturation "
                            "(steps {}..{}), need {}",
                            usable, w.begin + 1, w.end, kMinWindowPoints));
  }
  return w;
}

std::vector<LbeSeries::Point> LbeSeries::window_points() const {
  std::vector<Point> out;
  for (std::size_t i = 0; i < k_index.size(); ++i) {
    const std::size_t pos = k_index[i] - 1;
    if (pos >= window.begin && pos < window.end) out.push_back({k_index[i], y[i]});
  }
  return out;
}

LbeSeries compute_lbe(const TrajectoryPair& pair, double time_scale,
                      double d_sat) {
  if (pair.n_valid < 2) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("need at least 2 valid steps, got {}", pair.n_valid));
  }
  LbeSeries s;
  s.time_scale = time_scale;
  s.delta = divergence(pair);
  for (std::size_t i = 0; i < s.delta.size(); ++i) {
    if (s.delta[i] > 0) {
      s.y.push_back(std::log(s.delta[i]));
      s.k_index.push_back(i + 1);
    }
  }
  s.window = select_fit_window(s.delta, d_sat);
  return s;
}

}  // namespace lle
