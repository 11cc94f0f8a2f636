#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace harnack {

/// Bad configuration: unknown key, malformed value, or a value outside the
/// range the owning module accepts. Carries the line and key it refers to.
class ConfigError : public std::invalid_argument {
public:
  ConfigError(int line, std::string field, const std::string& message);
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

private:
  int line_;
  std::string field_;
};

enum class Subcommand { poisson, heat, identities, convergence };

/// Parsed `key = value` configuration. See README for the schema.
struct RunConfig {
  Subcommand subcommand = Subcommand::identities;

  // Manifold.
  std::string manifold = "torus";
  int dimension = 1;
  std::vector<double> lengths;     // defaults to 2 pi on every axis
  std::vector<int> resolution;     // one entry is broadcast; default 64
  int subdivision = 3;

  // Scenario: elliptic or parabolic catalog id, or a built-in name.
  std::string scenario;

  // poisson
  std::vector<double> b = {0.25, 0.5, 1.0, 2.0};
  std::vector<double> delta = {1.0};
  double ricci_K = 0.0;

  // heat
  double a = 2.0;
  double horizon = 1.0;
  double dt = 1e-3;
  int stride = 10;
  double source_value = 0.0;

  // identities
  int noise_modes = 8;

  // convergence
  std::vector<std::string> checks;
  std::vector<int> levels;           // resolutions for space studies
  std::vector<double> dt_levels;     // steps for time studies
  double expected_order = 0.0;       // 0: the check's own order

  // Multiplies every residual and margin tolerance.
  double tolerance_scale = 1.0;
  std::uint64_t seed = 42;
};

RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

struct CheckVerdict {
  std::string name;
  bool pass = false;
  double value = 0.0;      // residual or margin
  double threshold = 0.0;
  std::string relation;    // "<=" for residuals, ">=" for margins
};

struct SuiteSummary {
  std::string subcommand;
  std::vector<CheckVerdict> checks;
  bool pass = true;  // conjunction of every check
  double wall_seconds = 0.0;
  std::vector<std::string> files;
};

/// Runs the configured subcommand, prints one verdict line per check to
/// `log`, and writes reports into `out_dir` ("csv", "json" or "both").
SuiteSummary run_subcommand(const RunConfig& config, const std::string& out_dir,
                            const std::string& format, std::ostream& log);

/// Command-line entry point. Exit codes: 0 all checks pass, 1 a check
/// failed, 2 usage or configuration error, 3 runtime failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace harnack
