#include "lle/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace lle {
namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, what);
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::optional<std::size_t> find_schedule(const ExperimentConfig& c,
                                         LambdaSchedule::Kind kind) {
  for (std::size_t i = 0; i < c.schedules.size(); ++i) {
    if (c.schedules[i].kind() == kind) return i;
  }
  return std::nullopt;
}

}  // namespace

void ExperimentConfig::validate() const {
  (void)make_system(system);
  if (n_ics < 2) invalid(fmt::format("n_ics must be at least 2, got {}", n_ics));
  if (n_steps && *n_steps < 2) {
    invalid(fmt::format("steps must be at least 2, got {}", *n_steps));
  }
  if (!(d_sat > 0)) invalid(fmt::format("d_sat must be positive, got {}", d_sat));
  if (!(p0 > 0)) invalid(fmt::format("p0 must be positive, got {}", p0));
  if (!(mg_step > 0)) {
    invalid(fmt::format("mg_h must be positive, got {}", mg_step));
  }
  if (!(escape_bound > 0)) {
    invalid(fmt::format("escape bound must be positive, got {}", escape_bound));
  }
  if (schedules.empty()) invalid("at least one lambda schedule is required");
}

SystemSpec ExperimentConfig::system_spec() const {
  SystemSpec spec = make_system(system);
  spec.escape_bound = escape_bound;
  spec.mg_step = mg_step;
  spec.mg_denominator = mg_denominator;
  if (spec.kind == SystemKind::DelayDifferential) (void)spec.delay_steps();
  return spec;
}

std::size_t ExperimentConfig::steps_for(const SystemSpec& spec) const {
  return n_steps.value_or(default_steps(spec));
}

std::string_view to_string(IcStatus s) noexcept {
  switch (s) {
    case IcStatus::Ok: return "ok";
    case IcStatus::Escaped: return "escaped";
    case IcStatus::NoDivergence: return "no-divergence";
    case IcStatus::WindowTooShort: return "window-too-short";
  }
  return "?";
}

std::vector<double> ic_grid(const IcRange& range, std::size_t n) {
  if (n < 2) invalid(fmt::format("grid needs at least 2 points, got {}", n));
  if (!(range.hi >= range.lo)) {
    invalid(fmt::format("empty interval [{}, {}]", range.lo, range.hi));
  }
  // (lo·(n-1-i) + hi·i)/(n-1) mirrors exactly for lo = -hi.
  const auto last = static_cast<double>(n - 1);
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto fi = static_cast<double>(i);
    grid[i] = (range.lo * (last - fi) + range.hi * fi) / last;
  }
  grid.front() = range.lo;
  grid.back() = range.hi;
  return grid;
}

Summary summarize(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::InsufficientData,
                fmt::format("need at least 2 values, got {}", values.size()));
  }
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

IcResult run_ic(const ExperimentConfig& config, const SystemSpec& spec,
                double x0) {
  IcResult r;
  r.x0 = x0;
  const TrajectoryPair pair = simulate_pair(
      spec, x0, config.steps_for(spec), config.channels, config.backend);
  r.n_valid = pair.n_valid;
  if (pair.truncated()) {
    r.status = IcStatus::Escaped;
    return r;
  }
  LbeSeries series;
  try {
    series = compute_lbe(pair, spec.time_scale(), config.d_sat);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoDivergence) {
      r.status = IcStatus::NoDivergence;
      return r;
    }
    if (e.code() == ErrorCode::WindowTooShort) {
      r.status = IcStatus::WindowTooShort;
      return r;
    }
    throw;
  }
  r.window = series.window;
  for (const auto& schedule : config.schedules) {
    r.lle.push_back(estimate_lle(series, schedule, config.p0).lle);
  }
  return r;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const SystemSpec spec = config.system_spec();

  ExperimentResult out;
  out.system = spec.name;
  out.literature_lle = spec.literature_lle;
  out.tolerance = spec.tolerance;
  for (double x0 : ic_grid(spec.ic_range, config.n_ics)) {
    out.per_ic.push_back(run_ic(config, spec, x0));
    if (out.per_ic.back().status != IcStatus::Ok) ++out.n_failed;
  }
  if (out.n_ok() == 0) {
    throw Error(ErrorCode::AllIcsFailed,
                fmt::format("all {} initial conditions of {} failed",
                            config.n_ics, spec.name));
  }
  for (std::size_t s = 0; s < config.schedules.size(); ++s) {
    std::vector<double> values;
    for (const auto& ic : out.per_ic) {
      if (ic.status == IcStatus::Ok) values.push_back(ic.lle[s]);
    }
    out.stats.push_back(
        {config.schedules[s], summarize(values), median_of(values)});
  }
  return out;
}

std::vector<ExperimentConfig> default_table2_configs(
    const ExperimentConfig& base) {
  std::vector<ExperimentConfig> out;
  for (auto name : system_names()) {
    ExperimentConfig c = base;
    c.system = std::string(name);
    out.push_back(std::move(c));
  }
  return out;
}

Table2Report reproduce_table2(const std::vector<ExperimentConfig>& configs) {
  constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
  Table2Report report;
  for (const auto& config : configs) {
    Table2Row row;
    row.system = config.system;
    row.n_ics = config.n_ics;
    row.constant = row.variable = {kNan, kNan};
    row.abs_err_var = kNan;
    try {
      const SystemSpec spec = config.system_spec();
      row.literature = spec.literature_lle;
      row.tolerance = spec.tolerance;
      const auto ci = find_schedule(config, LambdaSchedule::Kind::Constant);
      const auto vi = find_schedule(config, LambdaSchedule::Kind::InverseK);
      if (!ci || !vi) {
        invalid("the table needs a constant and a variable lambda schedule");
      }
      const ExperimentResult res = run_experiment(config);
      row.constant = res.stats[*ci].summary;
      row.variable = res.stats[*vi].summary;
      row.n_failed = res.n_failed;
      row.abs_err_var = std::fabs(row.variable.mean - row.literature);
      const bool few_failures =
          5 * res.n_failed < res.per_ic.size();  // < 20%
      row.pass = row.abs_err_var <= row.tolerance && few_failures;
    } catch (const Error& e) {
      row.error = fmt::format("{}: {}", to_string(e.code()), e.what());
      row.n_failed = row.n_ics;
      row.pass = false;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string Table2Report::text() const {
  std::string out = fmt::format(
      "{:<14}{:>11}{:>11}{:>11}{:>11}{:>11}{:>11}{:>8}{:>6}\n", "system",
      "literature", "mu_const", "sd_const", "mu_var", "sd_var", "|err|",
      "failed", "pass");
  for (const auto& r : rows) {
    out += fmt::format(
        "{:<14}{:>11.4f}{:>11.4f}{:>11.4f}{:>11.4f}{:>11.4f}{:>11.4f}{:>8}{:>6}\n",
        r.system, r.literature, r.constant.mean, r.constant.std,
        r.variable.mean, r.variable.std, r.abs_err_var,
        fmt::format("{}/{}", r.n_failed, r.n_ics), r.pass ? "yes" : "NO");
    if (r.error) out += fmt::format("  ! {}\n", *r.error);
  }
  return out;
}

std::string Table2Report::csv() const {
  std::string out =
      "system,literature,mu_const,sigma_const,mu_var,sigma_var,abs_err_var,"
      "n_failed,pass\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{}\n",
                       r.system, r.literature, r.constant.mean, r.constant.std,
                       r.variable.mean, r.variable.std, r.abs_err_var,
                       r.n_failed, r.pass ? 1 : 0);
  }
  return out;
}

}  // namespace lle
