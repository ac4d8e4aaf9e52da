#pragma once

// The `lle` command line: simulate, estimate, table2, figure.
//
// Exit codes: 0 success, 2 usage error, 3 numerical/data failure.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config_file.hpp"
#include "lle/experiment.hpp"

namespace lle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Every key accepted by --config files (dashed flag names).
const std::set<std::string, std::less<>>& known_keys();

/// Settings after merging the config file with the command-line flags.
struct Options {
  std::string system = "logistic";
  std::optional<double> x0;
  std::optional<std::size_t> steps;
  ChannelPair channels;
  LambdaSchedule lambda = LambdaSchedule::inverse_k();
  double lambda_c = kDefaultLambdaC;
  double d_sat = kDefaultSaturation;
  double p0 = kDefaultP0;
  std::size_t n_ics = 100;
  double mg_h = 0.1;
  MgDenominator mg_denominator = MgDenominator::Standard;
  Backend backend = Backend::SoftwareEmulation;
  double escape_bound = 1e6;
  std::optional<std::string> out;
  bool system_given = false;

  /// Throws lle::Error(InvalidArgument) on unparsable values.
  static Options from_settings(const Settings& s);
  ExperimentConfig experiment() const;
};

/// Each command writes results to `out` (or the --out file) and diagnostics
/// to `err`, returning the exit code.
int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err);
int cmd_estimate(const Options& o, std::ostream& out, std::ostream& err);
int cmd_table2(const Options& o, std::ostream& out, std::ostream& err);
int cmd_figure(const Options& o, std::ostream& out, std::ostream& err);

/// Full entry point; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace lle::cli
