#pragma once

// The five benchmark systems and their one-step update under directed
// rounding.
//
// Every update is a fixed sequence of directed operations; changing the order
// or association changes the rounded result, so it is frozen here:
//
//   logistic      x' = (mu·x)·(1 - x)
//   henon         x' = (1 - (a·x)·x) + y,  y' = b·x
//   sine          x' = (a·x) - ((b·x)·x)·x
//   tent          x' = r·min(x, 1 - x)
//   mackey-glass  f  = (a·xd)/(1 + xd^c) - b·x      (xd = x(t - tau))
//                 x' = x + h·f                       (explicit Euler)
//
// xd^c is DirectedOps::int_pow. With the OneMinus denominator variant the
// denominator is (1 - xd^c) instead.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lle/arithmetic.hpp"

namespace lle {

enum class SystemId { Logistic, Henon, Sine, Tent, MackeyGlass };
enum class SystemKind { DiscreteMap, DelayDifferential };
enum class MgDenominator { Standard, OneMinus };

std::string_view to_string(MgDenominator d) noexcept;
std::optional<MgDenominator> parse_mg_denominator(std::string_view text);

struct Parameter {
  std::string name;
  double value;
};

struct IcRange {
  double lo;
  double hi;
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

struct SystemSpec {
  std::string name;
  SystemId id;
  SystemKind kind;
  int dimension;
  /// Fixed order per system, see make_system().
  std::vector<Parameter> parameters;
  IcRange ic_range;
  /// nats/iteration for maps, nats/time unit for Mackey-Glass.
  double literature_lle;
  /// Allowed |mean - literature_lle| for the reproduced table.
  double tolerance;
  std::size_t observable_index = 0;
  /// |component| above this is an escape.
  double escape_bound = 1e6;
  /// Mackey-Glass only.
  double mg_step = 0.1;
  MgDenominator mg_denominator = MgDenominator::Standard;

  double param(std::string_view key) const;
  void set_param(std::string_view key, double value);

  /// 1 for maps, the Euler step for Mackey-Glass.
  double time_scale() const noexcept {
    return kind == SystemKind::DiscreteMap ? 1.0 : mg_step;
  }
  /// tau / h; throws InvalidArgument unless it is a positive integer.
  std::size_t delay_steps() const;
};

/// Registry names: logistic, henon, sine, tent, mackey-glass.
std::span<const std::string_view> system_names() noexcept;
/// Throws InvalidArgument naming the registered systems.
SystemSpec make_system(std::string_view name);
std::vector<SystemSpec> all_systems();

struct MapState {
  std::array<double, 2> x{};
  int dimension = 1;

  friend bool operator==(const MapState&, const MapState&) = default;
};

/// Current value plus a ring buffer of the last d values; oldest() is x(t - tau).
class DelayState {
 public:
  DelayState(double current, std::size_t delay_steps, double history_value);

  double current() const noexcept { return current_; }
  double oldest() const noexcept { return history_[head_]; }
  std::size_t delay_steps() const noexcept { return history_.size(); }
  /// k = 1 is x(t - h), k = d is x(t - d·h).
  double lag(std::size_t k) const;

  /// Pushes the current value into the history and makes `next` current.
  void advance(double next) noexcept;

  friend bool operator==(const DelayState&, const DelayState&) = default;

 private:
  double current_;
  std::vector<double> history_;
  std::size_t head_ = 0;  // index of the oldest entry
};

using SystemState = std::variant<MapState, DelayState>;

/// Throws OutOfRange when x0 lies outside spec.ic_range. Maps put x0 in the
/// observable component (Hénon starts at y = 0); Mackey-Glass starts from the
/// constant history x0.
SystemState initial_state(const SystemSpec& spec, double x0);

/// One map iteration. Throws TrajectoryEscape on a non-finite component or
/// one beyond spec.escape_bound.
MapState step_map(const SystemSpec& spec, const MapState& s,
                  const DirectedOps& ops);

/// One Euler step of Mackey-Glass. Additionally throws SingularDenominator
/// for the OneMinus denominator variant when |1 - xd^c| < 1e-12.
DelayState step_mackey_glass(const SystemSpec& spec, const DelayState& s,
                             const DirectedOps& ops);
void step_mackey_glass_in_place(const SystemSpec& spec, DelayState& s,
                                const DirectedOps& ops);

void advance(const SystemSpec& spec, SystemState& s, const DirectedOps& ops);
double observable(const SystemSpec& spec, const SystemState& s);

}  // namespace lle
