#include "lle/systems.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace lle {
namespace {

constexpr std::array<std::string_view, 5> kNames = {
    "logistic", "henon", "sine", "tent", "mackey-glass"};

[[noreturn]] void escape(const SystemSpec& spec, double value) {
  throw Error(ErrorCode::TrajectoryEscape,
              fmt::format("{} trajectory escaped (value {})", spec.name, value));
}

double guard(const SystemSpec& spec, double v) {
  if (!std::isfinite(v) || std::fabs(v) > spec.escape_bound) escape(spec, v);
  return v;
}

// Positional parameter slots, matching make_system().
constexpr std::size_t kP0 = 0;
constexpr std::size_t kP1 = 1;
constexpr std::size_t kP2 = 2;

}  // namespace

std::string_view to_string(MgDenominator d) noexcept {
  return d == MgDenominator::Standard ? "standard" : "one-minus";
}

std::optional<MgDenominator> parse_mg_denominator(std::string_view text) {
  if (text == "standard") return MgDenominator::Standard;
  if (text == "one-minus") return MgDenominator::OneMinus;
  return std::nullopt;
}

double SystemSpec::param(std::string_view key) const {
  for (const auto& p : parameters) {
    if (p.name == key) return p.value;
  }
  throw Error(ErrorCode::InvalidArgument,
              fmt::format("system {} has no parameter '{}'", name, key));
}

void SystemSpec::set_param(std::string_view key, double value) {
  for (auto& p : parameters) {
    if (p.name == key) {
      p.value = value;
      return;
    }
  }
  throw Error(ErrorCode::InvalidArgument,
              fmt::format("system {} has no parameter '{}'", name, key));
}

std::size_t SystemSpec::delay_steps() const {
  const double ratio = param("tau") / mg_step;
  const double rounded = std::round(ratio);
  if (!(mg_step > 0) || rounded < 1 ||
      std::fabs(ratio - rounded) > 1e-9 * rounded) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("tau/h = {}/{} is not a positive integer",
                            param("tau"), mg_step));
  }
  return static_cast<std::size_t>(rounded);
}

std::span<const std::string_view> system_names() noexcept { return kNames; }

SystemSpec make_system(std::string_view name) {
  if (name == "logistic") {
    return {.name = "logistic", .id = SystemId::Logistic,
            .kind = SystemKind::DiscreteMap, .dimension = 1,
            .parameters = {{"mu", 4.0}},
            .ic_range = {0.1, 1.0},
            .literature_lle = 0.6930, .tolerance = 0.06};
  }
  if (name == "henon") {
    return {.name = "henon", .id = SystemId::Henon,
            .kind = SystemKind::DiscreteMap, .dimension = 2,
            .parameters = {{"a", 1.4}, {"b", 0.3}},
            .ic_range = {-0.9, 1.0},
            .literature_lle = 0.4180, .tolerance = 0.06};
  }
  if (name == "sine") {
    return {.name = "sine", .id = SystemId::Sine,
            .kind = SystemKind::DiscreteMap, .dimension = 1,
            .parameters = {{"a", 2.6868}, {"b", 0.2462}},
            .ic_range = {-3.8, 3.8},
            .literature_lle = 0.7730, .tolerance = 0.06};
  }
  if (name == "tent") {
    return {.name = "tent", .id = SystemId::Tent,
            .kind = SystemKind::DiscreteMap, .dimension = 1,
            .parameters = {{"r", 1.99}},
            .ic_range = {0.1, 0.99},
            .literature_lle = 0.6880, .tolerance = 0.01};
  }
  if (name == "mackey-glass") {
    return {.name = "mackey-glass", .id = SystemId::MackeyGlass,
            .kind = SystemKind::DelayDifferential, .dimension = 1,
            .parameters = {{"a", 0.2}, {"b", 0.1}, {"c", 10.0}, {"tau", 30.0}},
            .ic_range = {0.15, 1.5},
            .literature_lle = 0.0074, .tolerance = 0.004};
  }
  throw Error(ErrorCode::InvalidArgument,
              fmt::format("unknown system '{}'; known systems: {}", name,
                          fmt::join(kNames, ", ")));
}

std::vector<SystemSpec> all_systems() {
  std::vector<SystemSpec> out;
  for (auto n : kNames) out.push_back(make_system(n));
  return out;
}

DelayState::DelayState(double current, std::size_t delay_steps,
                       double history_value)
    : current_(current), history_(delay_steps, history_value) {
  if (delay_steps == 0) {
    throw Error(ErrorCode::InvalidArgument, "delay must be at least one step");
  }
}

double DelayState::lag(std::size_t k) const {
  const std::size_t d = history_.size();
  if (k == 0 || k > d) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("lag {} outside 1..{}", k, d));
  }
  // The newest entry sits just before head_.
  return history_[(head_ + d - k) % d];
}

void DelayState::advance(double next) noexcept {
  history_[head_] = current_;
  head_ = head_ + 1 == history_.size() ? 0 : head_ + 1;
  current_ = next;
}

SystemState initial_state(const SystemSpec& spec, double x0) {
  if (!spec.ic_range.contains(x0)) {
    throw Error(ErrorCode::OutOfRange,
                fmt::format("initial condition {} outside [{}, {}] for {}", x0,
                            spec.ic_range.lo, spec.ic_range.hi, spec.name));
  }
  if (spec.kind == SystemKind::DelayDifferential) {
    return DelayState(x0, spec.delay_steps(), x0);
  }
  MapState s;
  s.dimension = spec.dimension;
  s.x[spec.observable_index] = x0;
  return s;
}

MapState step_map(const SystemSpec& spec, const MapState& s,
                  const DirectedOps& ops) {
  const auto& p = spec.parameters;
  MapState next = s;
  try {
    const double x = s.x[0];
    switch (spec.id) {
      case SystemId::Logistic:
        next.x[0] = ops.mul(ops.mul(p[kP0].value, x), ops.sub(1.0, x));
        break;
      case SystemId::Henon: {
        const double ax2 = ops.mul(ops.mul(p[kP0].value, x), x);
        next.x[0] = ops.add(ops.sub(1.0, ax2), s.x[1]);
        next.x[1] = ops.mul(p[kP1].value, x);
        break;
      }
      case SystemId::Sine: {
        const double bx3 = ops.mul(ops.mul(ops.mul(p[kP1].value, x), x), x);
        next.x[0] = ops.sub(ops.mul(p[kP0].value, x), bx3);
        break;
      }
      case SystemId::Tent:
        next.x[0] = ops.mul(p[kP0].value, DirectedOps::min(x, ops.sub(1.0, x)));
        break;
      case SystemId::MackeyGlass:
        throw Error(ErrorCode::InvalidArgument,
                    "step_map called on a delay-differential system");
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonFiniteResult) throw;
    escape(spec, std::numeric_limits<double>::infinity());
  }
  for (int i = 0; i < next.dimension; ++i) guard(spec, next.x[i]);
  return next;
}

void step_mackey_glass_in_place(const SystemSpec& spec, DelayState& s,
                                const DirectedOps& ops) {
  if (spec.kind != SystemKind::DelayDifferential) {
    throw Error(ErrorCode::InvalidArgument,
                "step_mackey_glass called on a map");
  }
  const auto& p = spec.parameters;
  const double a = p[kP0].value;
  const double b = p[kP1].value;
  const auto c = static_cast<unsigned>(p[kP2].value);
  const double h = spec.mg_step;
  const double x = s.current();
  const double xd = s.oldest();
  double next = 0.0;
  try {
    const double num = ops.mul(a, xd);
    const double pw = ops.int_pow(xd, c);
    double den = 0.0;
    if (spec.mg_denominator == MgDenominator::Standard) {
      den = ops.add(1.0, pw);
    } else {
      den = ops.sub(1.0, pw);
      if (std::fabs(den) < 1e-12) {
        throw Error(ErrorCode::SingularDenominator,
                    fmt::format("1 - x_tau^{} = {} at x_tau = {}", c, den, xd));
      }
    }
    const double rate = ops.sub(ops.div(num, den), ops.mul(b, x));
    next = ops.add(x, ops.mul(h, rate));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonFiniteResult) throw;
    escape(spec, std::numeric_limits<double>::infinity());
  }
  s.advance(guard(spec, next));
}

DelayState step_mackey_glass(const SystemSpec& spec, const DelayState& s,
                             const DirectedOps& ops) {
  DelayState next = s;
  step_mackey_glass_in_place(spec, next, ops);
  return next;
}

void advance(const SystemSpec& spec, SystemState& s, const DirectedOps& ops) {
  if (auto* m = std::get_if<MapState>(&s)) {
    *m = step_map(spec, *m, ops);
  } else {
    step_mackey_glass_in_place(spec, std::get<DelayState>(s), ops);
  }
}

double observable(const SystemSpec& spec, const SystemState& s) {
  if (const auto* m = std::get_if<MapState>(&s)) {
    return m->x[spec.observable_index];
  }
  return std::get<DelayState>(s).current();
}

}  // namespace lle
