#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "signorini/analysis.hpp"
#include "signorini/errors.hpp"
#include "signorini/obstacle.hpp"
#include "signorini/oracle.hpp"

namespace signorini::cli {

/// Malformed or out-of-range configuration. line() is 0 when the problem is
/// not tied to a single line (a missing or inconsistent combination).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0);
  int line() const { return line_; }

 private:
  int line_;
};

enum class Experiment {
  verify_symbol,
  verify_kernel,
  solve_obstacle,
  solve_signorini,
  oracle_compare,
  regularity_study,
  singular_study,
};
const char* to_string(Experiment e);

enum class ObstacleShape { bump, constant, wedge, double_bump };
const char* to_string(ObstacleShape s);

/// bump:        max(height - curvature |x - c|^2, floor)
/// wedge:       max(height - slope |x - c|, floor)
/// double_bump: max of two bumps centred at c -/+ separation/2 along axis 0
/// constant:    value
struct ObstacleSpec {
  ObstacleShape shape = ObstacleShape::bump;
  double height = 0.3;
  double curvature = 1.0;
  double slope = 1.0;
  double floor = -0.2;
  double value = -1.0;
  double separation = 1.0;
  std::array<double, 2> center{};
};

/// Gaussian body force A exp(-(|x - c|^2 + (t - depth)^2) / (2 width^2)) in
/// one component (tangential axis 0 or normal).
struct ForceSpec {
  bool enabled = false;
  double amplitude = 1.0;
  bool normal = true;
  std::array<double, 2> center{};
  double depth = 1.0;
  double width = 0.25;
};

struct OracleSettings {
  int levels = 0;      // 0: same as grid.N
  double depth = 0.0;  // 0: same as grid.L
  double omega = 1.7;
  double tol = 1e-11;
  int max_iter = 400000;
  TopCondition top = TopCondition::sliding;
  bool refine = true;
  double tolerance = 5e-2;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::solve_signorini;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  double mu = 1.0;
  double lambda = 1.0;

  int dim = 1;
  int points = 64;
  double period = 6.283185307179586;
  int levels = 1;      // output/force levels; 1 means the boundary only
  double depth = 0.0;  // 0: same as period

  ObstacleSpec obstacle;
  ForceSpec force;
  double inner_radius = 1.5;
  double outer_radius = 2.5;

  ObstacleOptions solver;
  OracleSettings oracle;
  RegularityOptions regularity;

  int samples = 20;
  std::vector<int> resolutions{64, 128, 256, 512};
  std::vector<double> density_radii{0.0625, 0.125, 0.25};  // fractions of L

  /// Line of each key that was set explicitly.
  std::map<std::string, int> lines;

  double effective_depth() const { return depth > 0.0 ? depth : period; }
  /// Throws ConfigError for values outside their admissible range.
  void validate() const;
};

/// Flat `key = value` lines with dotted section prefixes; '#' starts a
/// comment. Unknown or repeated keys are errors. Numbers may carry a `pi`
/// suffix (`2pi`, `0.5pi`, `pi`).
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every key with its resolved value, one `key = value` line each, in a fixed order.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg);

/// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_number(double x);
std::string format_number(long long x);

/// Comma-separated file with a fixed header; each row must match its width.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  std::size_t rows() const { return rows_; }

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

enum class RunStatus { ok, check_failed, config_error, not_converged };
int exit_code(RunStatus s);
const char* to_string(RunStatus s);

struct RunResult {
  RunStatus status = RunStatus::ok;
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::string> files;
  std::vector<std::string> warnings;
  std::string message;

  /// Value of a summary key, if recorded.
  std::optional<std::string> get(std::string_view key) const;
};

/// Runs one experiment, writing its CSVs and manifest.txt into out_dir.
/// Library DomainErrors caused by configured values come back as config_error.
RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace signorini::cli
