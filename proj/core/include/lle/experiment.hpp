#pragma once

// Sweeps of initial conditions and the reproduced results table.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lle/estimator.hpp"

namespace lle {

struct ExperimentConfig {
  std::string system = "logistic";
  std::size_t n_ics = 100;
  /// Defaults to default_steps() of the system.
  std::optional<std::size_t> n_steps;
  double d_sat = kDefaultSaturation;
  ChannelPair channels;
  std::vector<LambdaSchedule> schedules = {LambdaSchedule::constant(),
                                           LambdaSchedule::inverse_k()};
  double p0 = kDefaultP0;
  double mg_step = 0.1;
  MgDenominator mg_denominator = MgDenominator::Standard;
  double escape_bound = 1e6;
  Backend backend = Backend::SoftwareEmulation;

  /// Throws InvalidArgument on n_ics < 2, non-positive numbers, an empty
  /// schedule list or an unknown system.
  void validate() const;
  /// The system with this config's overrides applied.
  SystemSpec system_spec() const;
  std::size_t steps_for(const SystemSpec& spec) const;
};

enum class IcStatus { Ok, Escaped, NoDivergence, WindowTooShort };
std::string_view to_string(IcStatus s) noexcept;

struct IcResult {
  double x0 = 0.0;
  IcStatus status = IcStatus::Ok;
  /// One per schedule; empty unless status is Ok.
  std::vector<double> lle;
  FitWindow window;
  std::size_t n_valid = 0;
};

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // sample (n - 1)
};

struct ScheduleStats {
  LambdaSchedule schedule;
  Summary summary;
  double median = 0.0;
};

struct ExperimentResult {
  std::string system;
  double literature_lle = 0.0;
  double tolerance = 0.0;
  std::vector<IcResult> per_ic;  // ordered by x0
  std::vector<ScheduleStats> stats;  // parallel to config.schedules
  std::size_t n_failed = 0;

  std::size_t n_ok() const noexcept { return per_ic.size() - n_failed; }
};

/// n equally spaced points with both endpoints. Throws InvalidArgument for
/// n < 2 or hi < lo.
std::vector<double> ic_grid(const IcRange& range, std::size_t n);

/// Throws InsufficientData for fewer than two values.
Summary summarize(std::span<const double> values);

/// One IC through simulate -> lbe -> estimate for every schedule, reusing the
/// same trajectory pair.
IcResult run_ic(const ExperimentConfig& config, const SystemSpec& spec,
                double x0);

/// Throws AllIcsFailed when no IC yields a fit, InsufficientData when exactly
/// one does.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct Table2Row {
  std::string system;
  double literature = 0.0;
  double tolerance = 0.0;
  Summary constant;
  Summary variable;
  double abs_err_var = 0.0;
  std::size_t n_failed = 0;
  std::size_t n_ics = 0;
  bool pass = false;
  /// Set when the system could not be evaluated at all.
  std::optional<std::string> error;
};

struct Table2Report {
  std::vector<Table2Row> rows;

  /// Aligned plain-text table.
  std::string text() const;
  /// system,literature,mu_const,sigma_const,mu_var,sigma_var,abs_err_var,n_failed,pass
  std::string csv() const;
};

/// One config per registered system, all sharing `base` except `system`.
std::vector<ExperimentConfig> default_table2_configs(
    const ExperimentConfig& base = {});

/// Each config needs a constant and an InverseK schedule; the first of each
/// fills the row. A row passes when |mu_var - literature| <= tolerance and
/// fewer than 20% of its ICs failed. Failures of one system mark its row.
Table2Report reproduce_table2(const std::vector<ExperimentConfig>& configs);

}  // namespace lle
