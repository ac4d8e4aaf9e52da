#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "svg_plot.hpp"

namespace lle::cli {
namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, what);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    bad(fmt::format("--{}: '{}' is not a finite number", key, text));
  }
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    bad(fmt::format("--{}: '{}' is not a non-negative integer", key, text));
  }
  return v;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::OutOfRange:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

/// Writes through `fn` to the --out file when given, else to `fallback`.
void emit(const std::optional<std::string>& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& fn) {
  if (!path) {
    fn(fallback);
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("cannot write '{}'", *path));
  }
  fn(file);
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

struct Pipeline {
  SystemSpec spec;
  double x0 = 0.0;
  TrajectoryPair pair;
};

Pipeline simulate(const Options& o) {
  const ExperimentConfig cfg = o.experiment();
  cfg.validate();
  Pipeline p{cfg.system_spec(), 0.0, {}};
  p.x0 = o.x0.value_or(p.spec.ic_range.lo);
  p.pair = simulate_pair(p.spec, p.x0, cfg.steps_for(p.spec), o.channels,
                         o.backend);
  return p;
}

}  // namespace

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "system", "x0",    "steps",          "channels", "lambda",
      "lambda-c", "d-sat", "p0",           "n-ics",    "mg-h",
      "mg-denominator", "out", "backend",  "escape-bound"};
  return keys;
}

Options Options::from_settings(const Settings& s) {
  Options o;
  for (const auto& [key, value] : s) {
    if (key == "system") {
      o.system = value;
      o.system_given = true;
    } else if (key == "x0") {
      o.x0 = parse_double(key, value);
    } else if (key == "steps") {
      o.steps = parse_count(key, value);
    } else if (key == "channels") {
      o.channels = ChannelPair::parse(value);
    } else if (key == "lambda-c") {
      o.lambda_c = parse_double(key, value);
    } else if (key == "d-sat") {
      o.d_sat = parse_double(key, value);
    } else if (key == "p0") {
      o.p0 = parse_double(key, value);
    } else if (key == "n-ics") {
      o.n_ics = parse_count(key, value);
    } else if (key == "mg-h") {
      o.mg_h = parse_double(key, value);
    } else if (key == "mg-denominator") {
      const auto d = parse_mg_denominator(value);
      if (!d) bad(fmt::format("--mg-denominator: expected standard|one-minus, got '{}'", value));
      o.mg_denominator = *d;
    } else if (key == "backend") {
      const auto b = parse_backend(value);
      if (!b) bad(fmt::format("--backend: expected soft|fenv, got '{}'", value));
      o.backend = *b;
    } else if (key == "escape-bound") {
      o.escape_bound = parse_double(key, value);
    } else if (key == "out") {
      o.out = value;
    } else if (key != "lambda") {
      bad(fmt::format("unknown setting '{}'", key));
    }
  }
  // lambda depends on lambda-c, so resolve it last.
  const auto it = s.find("lambda");
  const std::string kind = it == s.end() ? "variable" : it->second;
  if (kind == "constant") {
    o.lambda = LambdaSchedule::constant();
  } else if (kind == "variable") {
    o.lambda = LambdaSchedule::inverse_k(o.lambda_c);
  } else {
    bad(fmt::format("--lambda: expected constant|variable, got '{}'", kind));
  }
  return o;
}

ExperimentConfig Options::experiment() const {
  ExperimentConfig c;
  c.system = system;
  c.n_ics = n_ics;
  c.n_steps = steps;
  c.d_sat = d_sat;
  c.channels = channels;
  c.schedules = {LambdaSchedule::constant(), LambdaSchedule::inverse_k(lambda_c)};
  c.p0 = p0;
  c.mg_step = mg_h;
  c.mg_denominator = mg_denominator;
  c.escape_bound = escape_bound;
  c.backend = backend;
  return c;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const Pipeline p = simulate(o);
  const auto delta = divergence(p.pair);
  const bool diverged =
      std::any_of(delta.begin(), delta.end(), [](double d) { return d > 0; });
  if (!diverged) {
    fmt::print(err, "error: {}: the two channels never diverged{}\n",
               p.spec.name,
               p.pair.truncated() ? fmt::format(" before {}", *p.pair.truncation)
                                  : std::string());
    return kExitNumeric;
  }
  emit(o.out, out, [&](std::ostream& os) {
    os << "k,x_a,x_b,delta,ln_delta\n";
    for (std::size_t i = 0; i < p.pair.n_valid; ++i) {
      const double ln = delta[i] > 0 ? std::log(delta[i])
                                     : -std::numeric_limits<double>::infinity();
      os << (i + 1) << ',' << num(p.pair.series_a[i]) << ','
         << num(p.pair.series_b[i]) << ',' << num(delta[i]) << ',' << num(ln)
         << '\n';
    }
  });
  if (p.pair.truncated()) {
    fmt::print(err, "warning: run stopped early: {}\n", *p.pair.truncation);
  }
  return kExitOk;
}

int cmd_estimate(const Options& o, std::ostream& out, std::ostream& err) {
  const Pipeline p = simulate(o);
  if (p.pair.truncated()) {
    fmt::print(err, "warning: run stopped early: {}\n", *p.pair.truncation);
  }
  const LbeSeries series =
      compute_lbe(p.pair, p.spec.time_scale(), o.d_sat);
  const FitResult fit = estimate_lle(series, o.lambda, o.p0);
  fmt::print(out,
             "system     {}\n"
             "x0         {}\n"
             "channels   {}\n"
             "schedule   {}\n"
             "window     steps {}..{} ({} points)\n"
             "slope      {}\n"
             "intercept  {}\n"
             "lle        {} (nats per {})\n",
             p.spec.name, num(p.x0), o.channels.str(), fit.schedule.label(),
             fit.window.begin + 1, fit.window.end, fit.n_points, num(fit.slope),
             num(fit.intercept), num(fit.lle),
             p.spec.kind == SystemKind::DiscreteMap ? "iteration" : "time unit");
  if (o.out) {
    emit(o.out, out, [&](std::ostream& os) {
      os << "k,ln_delta,fit\n";
      for (const auto& pt : series.window_points()) {
        const double j = static_cast<double>(pt.k - fit.first_k + 1);
        os << pt.k << ',' << num(pt.y) << ',' << num(fit.slope * j + fit.intercept)
           << '\n';
      }
    });
  }
  return kExitOk;
}

int cmd_table2(const Options& o, std::ostream& out, std::ostream& err) {
  const ExperimentConfig base = o.experiment();
  std::vector<ExperimentConfig> configs;
  if (o.system_given) {
    base.validate();
    configs.push_back(base);
  } else {
    configs = default_table2_configs(base);
    for (const auto& c : configs) c.validate();
  }
  const Table2Report report = reproduce_table2(configs);
  out << report.text();
  if (o.out) {
    emit(o.out, out, [&](std::ostream& os) { os << report.csv(); });
  }
  for (const auto& row : report.rows) {
    if (!row.pass) fmt::print(err, "note: {} row did not pass\n", row.system);
  }
  return kExitOk;
}

int cmd_figure(const Options& o, std::ostream& out, std::ostream& err) {
  const Pipeline p = simulate(o);
  if (p.pair.truncated()) {
    fmt::print(err, "warning: run stopped early: {}\n", *p.pair.truncation);
  }
  const LbeSeries series = compute_lbe(p.pair, p.spec.time_scale(), o.d_sat);
  const FitResult fit = estimate_lle(series, o.lambda, o.p0);

  const std::filesystem::path svg_path =
      o.out.value_or(fmt::format("{}_lbe.svg", p.spec.name));
  std::filesystem::path csv_path = svg_path;
  if (csv_path.extension() == ".svg") {
    csv_path.replace_extension(".csv");
  } else {
    csv_path += ".csv";
  }

  LinePlot plot;
  plot.title = fmt::format("{}: ln LBE, x0 = {:g}, channels {}", p.spec.name,
                           p.x0, o.channels.str());
  plot.x_label = "k (steps)";
  plot.y_label = "ln LBE";
  for (std::size_t i = 0; i < series.y.size(); ++i) {
    plot.points.x.push_back(static_cast<double>(series.k_index[i]));
    plot.points.y.push_back(series.y[i]);
  }
  const auto window = series.window_points();
  for (const auto& pt : {window.front(), window.back()}) {
    const double j = static_cast<double>(pt.k - fit.first_k + 1);
    plot.fit.x.push_back(static_cast<double>(pt.k));
    plot.fit.y.push_back(fit.slope * j + fit.intercept);
  }
  plot.annotation =
      fmt::format("y = {} j + {}   LLE = {}  [{}]", num(fit.slope),
                  num(fit.intercept), num(fit.lle), fit.schedule.label());

  emit(svg_path.string(), out, [&](std::ostream& os) { os << render_svg(plot); });
  emit(csv_path.string(), out, [&](std::ostream& os) {
    os << "k,ln_delta,in_window,fit\n";
    for (std::size_t i = 0; i < series.y.size(); ++i) {
      const std::size_t k = series.k_index[i];
      const bool in = k - 1 >= series.window.begin && k - 1 < series.window.end;
      os << k << ',' << num(series.y[i]) << ',' << (in ? 1 : 0) << ',';
      if (in) {
        const double j = static_cast<double>(k - fit.first_k + 1);
        os << num(fit.slope * j + fit.intercept);
      }
      os << '\n';
    }
  });
  fmt::print(out, "wrote {} and {}\nlle {}\n", svg_path.string(),
             csv_path.string(), num(fit.lle));
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Largest Lyapunov exponent from dual-rounding simulations"};
  app.name(args.empty() ? "lle" : std::filesystem::path(args[0]).filename().string());
  app.require_subcommand(1);

  struct Command {
    CLI::App* app;
    std::function<int(const Options&, std::ostream&, std::ostream&)> fn;
    std::vector<std::pair<std::string, CLI::Option*>> flags;
    std::string config;
  };
  std::map<std::string, std::string> values;
  std::vector<Command> commands;

  auto add = [&](const std::string& name, const std::string& help, auto fn,
                 std::vector<std::pair<std::string, std::string>> flags) {
    Command c{app.add_subcommand(name, help), fn, {}, {}};
    flags.emplace_back("out", "Output file");
    flags.emplace_back("system", "logistic|henon|sine|tent|mackey-glass");
    flags.emplace_back("channels", "Two rounding directions, e.g. nearest,up");
    flags.emplace_back("steps", "Simulation steps per channel");
    flags.emplace_back("mg-h", "Mackey-Glass Euler step");
    flags.emplace_back("mg-denominator", "standard|one-minus");
    flags.emplace_back("backend", "soft|fenv");
    flags.emplace_back("escape-bound", "Escape threshold on |state|");
    for (const auto& [key, text] : flags) {
      c.flags.emplace_back(key, c.app->add_option("--" + key, values[key], text));
    }
    commands.push_back(std::move(c));
  };
  const std::vector<std::pair<std::string, std::string>> fit_flags = {
      {"lambda", "constant|variable"},
      {"lambda-c", "c in lambda(k) = 1 + c/k"},
      {"d-sat", "Saturation threshold ending the fit window"},
      {"p0", "Initial covariance scale"}};

  add("simulate", "Dual-rounding simulation to CSV", cmd_simulate,
      {{"x0", "Initial condition"}});
  auto est_flags = fit_flags;
  est_flags.emplace_back("x0", "Initial condition");
  add("estimate", "Fit the log-LBE slope for one initial condition",
      cmd_estimate, est_flags);
  auto t2_flags = fit_flags;
  t2_flags.emplace_back("n-ics", "Initial conditions per system");
  add("table2", "Mean/std of the LLE over initial-condition sweeps",
      cmd_table2, t2_flags);
  add("figure", "SVG of ln LBE with the fitted line, plus its CSV",
      cmd_figure, est_flags);
  for (auto& c : commands) {
    c.app->add_option("--config", c.config, "key = value settings file");
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (auto& c : commands) {
    if (!c.app->parsed()) continue;
    try {
      Settings from_flags;
      for (const auto& [key, opt] : c.flags) {
        if (opt->count() > 0) from_flags[key] = values[key];
      }
      Settings from_file;
      if (!c.config.empty()) from_file = load_settings(c.config, known_keys());
      return c.fn(Options::from_settings(merge(from_file, from_flags)), out, err);
    } catch (const Error& e) {
      fmt::print(err, "error: {}\n", e.what());
      return exit_code_for(e.code());
    }
  }
  return kExitUsage;
}

}  // namespace lle::cli
