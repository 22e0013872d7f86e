#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "signorini/cli.hpp"

namespace signorini::cli {

ConfigError::ConfigError(const std::string& what, int line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::verify_symbol: return "verify_symbol";
    case Experiment::verify_kernel: return "verify_kernel";
    case Experiment::solve_obstacle: return "solve_obstacle";
    case Experiment::solve_signorini: return "solve_signorini";
    case Experiment::oracle_compare: return "oracle_compare";
    case Experiment::regularity_study: return "regularity_study";
    case Experiment::singular_study: return "singular_study";
  }
  return "?";
}

const char* to_string(ObstacleShape s) {
  switch (s) {
    case ObstacleShape::bump: return "bump";
    case ObstacleShape::constant: return "constant";
    case ObstacleShape::wedge: return "wedge";
    case ObstacleShape::double_bump: return "double_bump";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view v) {
  double scale = 1.0;
  if (v.size() >= 2 && v.substr(v.size() - 2) == "pi") {
    scale = std::numbers::pi;
    v.remove_suffix(2);
    if (v.empty()) return scale;
  }
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw std::invalid_argument("expected a number");
  }
  return x * scale;
}

template <class Int>
Int parse_integer(std::string_view v) {
  Int x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw std::invalid_argument("expected an integer");
  return x;
}

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected true or false");
}

template <class T, class Parse>
std::vector<T> parse_list(std::string_view v, Parse parse) {
  std::vector<T> out;
  while (true) {
    const auto comma = v.find(',');
    out.push_back(parse(trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

template <class E, std::size_t K>
E parse_enum(std::string_view v, const std::array<std::pair<const char*, E>, K>& names) {
  for (const auto& [name, value] : names) {
    if (v == name) return value;
  }
  std::string allowed;
  for (const auto& [name, value] : names) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
  throw std::invalid_argument("expected one of " + allowed);
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    auto real = [&t](const char* key, auto member) {
      t[key] = [member](ExperimentConfig& c, std::string_view v) { std::invoke(member, c) = parse_real(v); };
    };
    auto integer = [&t](const char* key, auto member) {
      t[key] = [member](ExperimentConfig& c, std::string_view v) {
        std::invoke(member, c) = parse_integer<int>(v);
      };
    };
    auto boolean = [&t](const char* key, auto member) {
      t[key] = [member](ExperimentConfig& c, std::string_view v) { std::invoke(member, c) = parse_bool(v); };
    };

    t["experiment"] = [](ExperimentConfig& c, std::string_view v) {
      c.experiment = parse_enum(v, std::array{
          std::pair{"verify_symbol", Experiment::verify_symbol},
          std::pair{"verify_kernel", Experiment::verify_kernel},
          std::pair{"solve_obstacle", Experiment::solve_obstacle},
          std::pair{"solve_signorini", Experiment::solve_signorini},
          std::pair{"oracle_compare", Experiment::oracle_compare},
          std::pair{"regularity_study", Experiment::regularity_study},
          std::pair{"singular_study", Experiment::singular_study}});
    };
    t["seed"] = [](ExperimentConfig& c, std::string_view v) { c.seed = parse_integer<std::uint64_t>(v); };
    t["output.dir"] = [](ExperimentConfig& c, std::string_view v) {
      if (v.empty()) throw std::invalid_argument("expected a directory");
      c.output_dir = std::string(v);
    };

    real("material.mu", [](ExperimentConfig& c) -> double& { return c.mu; });
    real("material.lambda", [](ExperimentConfig& c) -> double& { return c.lambda; });

    integer("grid.dim", [](ExperimentConfig& c) -> int& { return c.dim; });
    integer("grid.N", [](ExperimentConfig& c) -> int& { return c.points; });
    real("grid.L", [](ExperimentConfig& c) -> double& { return c.period; });
    integer("grid.levels", [](ExperimentConfig& c) -> int& { return c.levels; });
    real("grid.depth", [](ExperimentConfig& c) -> double& { return c.depth; });

    t["obstacle.shape"] = [](ExperimentConfig& c, std::string_view v) {
      c.obstacle.shape = parse_enum(v, std::array{std::pair{"bump", ObstacleShape::bump},
                                                  std::pair{"constant", ObstacleShape::constant},
                                                  std::pair{"wedge", ObstacleShape::wedge},
                                                  std::pair{"double_bump", ObstacleShape::double_bump}});
    };
    real("obstacle.height", [](ExperimentConfig& c) -> double& { return c.obstacle.height; });
    real("obstacle.curvature", [](ExperimentConfig& c) -> double& { return c.obstacle.curvature; });
    real("obstacle.slope", [](ExperimentConfig& c) -> double& { return c.obstacle.slope; });
    real("obstacle.floor", [](ExperimentConfig& c) -> double& { return c.obstacle.floor; });
    real("obstacle.value", [](ExperimentConfig& c) -> double& { return c.obstacle.value; });
    real("obstacle.separation", [](ExperimentConfig& c) -> double& { return c.obstacle.separation; });
    real("obstacle.center_x", [](ExperimentConfig& c) -> double& { return c.obstacle.center[0]; });
    real("obstacle.center_y", [](ExperimentConfig& c) -> double& { return c.obstacle.center[1]; });

    t["force.shape"] = [](ExperimentConfig& c, std::string_view v) {
      c.force.enabled = parse_enum(v, std::array{std::pair{"none", false}, std::pair{"gaussian", true}});
    };
    t["force.component"] = [](ExperimentConfig& c, std::string_view v) {
      c.force.normal = parse_enum(v, std::array{std::pair{"normal", true}, std::pair{"tangential", false}});
    };
    real("force.amplitude", [](ExperimentConfig& c) -> double& { return c.force.amplitude; });
    real("force.center_x", [](ExperimentConfig& c) -> double& { return c.force.center[0]; });
    real("force.center_y", [](ExperimentConfig& c) -> double& { return c.force.center[1]; });
    real("force.depth", [](ExperimentConfig& c) -> double& { return c.force.depth; });
    real("force.width", [](ExperimentConfig& c) -> double& { return c.force.width; });

    real("cutoff.inner_radius", [](ExperimentConfig& c) -> double& { return c.inner_radius; });
    real("cutoff.outer_radius", [](ExperimentConfig& c) -> double& { return c.outer_radius; });

    t["solver.method"] = [](ExperimentConfig& c, std::string_view v) {
      c.solver.method = parse_enum(
          v, std::array{std::pair{"accelerated", ObstacleMethod::accelerated_projected_gradient},
                        std::pair{"projected_gradient", ObstacleMethod::projected_gradient}});
    };
    real("solver.tol", [](ExperimentConfig& c) -> double& { return c.solver.tol; });
    integer("solver.max_iter", [](ExperimentConfig& c) -> int& { return c.solver.max_iter; });

    integer("oracle.levels", [](ExperimentConfig& c) -> int& { return c.oracle.levels; });
    real("oracle.depth", [](ExperimentConfig& c) -> double& { return c.oracle.depth; });
    real("oracle.omega", [](ExperimentConfig& c) -> double& { return c.oracle.omega; });
    real("oracle.tol", [](ExperimentConfig& c) -> double& { return c.oracle.tol; });
    integer("oracle.max_iter", [](ExperimentConfig& c) -> int& { return c.oracle.max_iter; });
    t["oracle.top"] = [](ExperimentConfig& c, std::string_view v) {
      c.oracle.top = parse_enum(v, std::array{std::pair{"sliding", TopCondition::sliding},
                                              std::pair{"clamped", TopCondition::clamped}});
    };
    boolean("oracle.refine", [](ExperimentConfig& c) -> bool& { return c.oracle.refine; });
    real("oracle.tolerance", [](ExperimentConfig& c) -> double& { return c.oracle.tolerance; });

    real("regularity.margin", [](ExperimentConfig& c) -> double& { return c.regularity.margin; });
    real("regularity.density_threshold",
         [](ExperimentConfig& c) -> double& { return c.regularity.density_threshold; });
    real("regularity.min_radius_cells",
         [](ExperimentConfig& c) -> double& { return c.regularity.min_radius_cells; });
    real("regularity.max_radius_cells",
         [](ExperimentConfig& c) -> double& { return c.regularity.max_radius_cells; });
    integer("regularity.radius_count", [](ExperimentConfig& c) -> int& { return c.regularity.radius_count; });
    boolean("regularity.affine_removal",
            [](ExperimentConfig& c) -> bool& { return c.regularity.affine_removal; });

    integer("sweep.samples", [](ExperimentConfig& c) -> int& { return c.samples; });
    t["singular.resolutions"] = [](ExperimentConfig& c, std::string_view v) {
      c.resolutions = parse_list<int>(v, parse_integer<int>);
    };
    t["singular.radii"] = [](ExperimentConfig& c, std::string_view v) {
      c.density_radii = parse_list<double>(v, parse_real);
    };
    return t;
  }();
  return table;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text(raw);
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key = value", line);
    const std::string key(trim(text.substr(0, eq)));
    const std::string_view value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", line);
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown key '" + key + "'", line);
    if (const auto prev = cfg.lines.find(key); prev != cfg.lines.end()) {
      throw ConfigError("key '" + key + "' repeats line " + std::to_string(prev->second), line);
    }
    if (value.empty()) throw ConfigError("key '" + key + "' has no value", line);
    try {
      it->second(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key + ": " + e.what() + ", got '" + std::string(value) + "'", line);
    }
    cfg.lines[key] = line;
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  return parse_config(in);
}

void ExperimentConfig::validate() const {
  auto fail = [this](const std::string& key, const std::string& what) {
    const auto it = lines.find(key);
    throw ConfigError(key + " " + what, it == lines.end() ? 0 : it->second);
  };
  auto positive = [&](const std::string& key, double v) {
    if (!(v > 0.0)) fail(key, "must be positive");
  };
  positive("material.mu", mu);
  positive("material.lambda", lambda);
  if (dim != 1 && dim != 2) fail("grid.dim", "must be 1 or 2");
  if (points < 8 || points % 2 != 0) fail("grid.N", "must be even and at least 8");
  if (points > (dim == 1 ? 65536 : 1024)) fail("grid.N", "is too large for the dimension");
  positive("grid.L", period);
  if (levels < 1) fail("grid.levels", "must be at least 1");
  if (depth < 0.0) fail("grid.depth", "must be positive (or 0 for L)");
  positive("obstacle.curvature", obstacle.curvature);
  positive("obstacle.slope", obstacle.slope);
  if (obstacle.floor > obstacle.height && obstacle.shape != ObstacleShape::constant) {
    fail("obstacle.floor", "must not exceed obstacle.height");
  }
  positive("force.width", force.width);
  positive("force.depth", force.depth);
  if (force.enabled && levels < 2) fail("grid.levels", "must be at least 2 when a force is set");
  positive("cutoff.inner_radius", inner_radius);
  if (!(outer_radius > inner_radius)) fail("cutoff.outer_radius", "must exceed cutoff.inner_radius");
  if (outer_radius > 0.5 * period) fail("cutoff.outer_radius", "must not exceed grid.L / 2");
  positive("solver.tol", solver.tol);
  if (solver.max_iter < 1) fail("solver.max_iter", "must be at least 1");
  if (oracle.levels < 0) fail("oracle.levels", "must be positive (or 0 for grid.N)");
  if (oracle.depth < 0.0) fail("oracle.depth", "must be positive (or 0 for grid.L)");
  if (!(oracle.omega > 0.0 && oracle.omega < 2.0)) fail("oracle.omega", "must lie in (0, 2)");
  positive("oracle.tol", oracle.tol);
  if (oracle.max_iter < 1) fail("oracle.max_iter", "must be at least 1");
  positive("oracle.tolerance", oracle.tolerance);
  if (experiment == Experiment::oracle_compare && dim != 1) fail("grid.dim", "must be 1 for oracle_compare");
  if (!(regularity.margin >= 0.0 && regularity.margin < 1.0)) fail("regularity.margin", "must lie in [0, 1)");
  positive("regularity.density_threshold", regularity.density_threshold);
  if (regularity.min_radius_cells < 2.0) fail("regularity.min_radius_cells", "must be at least 2");
  if (regularity.max_radius_cells < 8.0 * regularity.min_radius_cells) {
    fail("regularity.max_radius_cells", "must be at least 8 x regularity.min_radius_cells");
  }
  if (regularity.radius_count < 4) fail("regularity.radius_count", "must be at least 4");
  if (samples < 1) fail("sweep.samples", "must be at least 1");
  for (int n : resolutions) {
    if (n < 8 || n % 2 != 0) fail("singular.resolutions", "entries must be even and at least 8");
  }
  for (double r : density_radii) {
    if (!(r > 0.0 && r <= 0.5)) fail("singular.radii", "entries must lie in (0, 0.5]");
  }
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c) {
  auto num = [](double x) { return format_number(x); };
  auto inum = [](long long x) { return format_number(x); };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  auto join = [](const auto& xs) {
    std::string out;
    for (const auto& x : xs) {
      using T = std::decay_t<decltype(x)>;
      const std::string item = std::is_integral_v<T> ? format_number(static_cast<long long>(x))
                                                     : format_number(static_cast<double>(x));
      out += (out.empty() ? "" : ",") + item;
    }
    return out;
  };
  std::vector<std::pair<std::string, std::string>> e{
      {"experiment", to_string(c.experiment)},
      {"seed", std::to_string(c.seed)},
      {"output.dir", c.output_dir},
      {"material.mu", num(c.mu)},
      {"material.lambda", num(c.lambda)},
      {"grid.dim", inum(c.dim)},
      {"grid.N", inum(c.points)},
      {"grid.L", num(c.period)},
      {"grid.levels", inum(c.levels)},
      {"grid.depth", num(c.effective_depth())},
      {"obstacle.shape", to_string(c.obstacle.shape)},
      {"obstacle.height", num(c.obstacle.height)},
      {"obstacle.curvature", num(c.obstacle.curvature)},
      {"obstacle.slope", num(c.obstacle.slope)},
      {"obstacle.floor", num(c.obstacle.floor)},
      {"obstacle.value", num(c.obstacle.value)},
      {"obstacle.separation", num(c.obstacle.separation)},
      {"obstacle.center_x", num(c.obstacle.center[0])},
      {"obstacle.center_y", num(c.obstacle.center[1])},
      {"force.shape", c.force.enabled ? "gaussian" : "none"},
      {"force.component", c.force.normal ? "normal" : "tangential"},
      {"force.amplitude", num(c.force.amplitude)},
      {"force.center_x", num(c.force.center[0])},
      {"force.center_y", num(c.force.center[1])},
      {"force.depth", num(c.force.depth)},
      {"force.width", num(c.force.width)},
      {"cutoff.inner_radius", num(c.inner_radius)},
      {"cutoff.outer_radius", num(c.outer_radius)},
      {"solver.method",
       c.solver.method == ObstacleMethod::projected_gradient ? "projected_gradient" : "accelerated"},
      {"solver.tol", num(c.solver.tol)},
      {"solver.max_iter", inum(c.solver.max_iter)},
      {"oracle.levels", inum(c.oracle.levels > 0 ? c.oracle.levels : c.points)},
      {"oracle.depth", num(c.oracle.depth > 0.0 ? c.oracle.depth : c.period)},
      {"oracle.omega", num(c.oracle.omega)},
      {"oracle.tol", num(c.oracle.tol)},
      {"oracle.max_iter", inum(c.oracle.max_iter)},
      {"oracle.top", c.oracle.top == TopCondition::sliding ? "sliding" : "clamped"},
      {"oracle.refine", flag(c.oracle.refine)},
      {"oracle.tolerance", num(c.oracle.tolerance)},
      {"regularity.margin", num(c.regularity.margin)},
      {"regularity.density_threshold", num(c.regularity.density_threshold)},
      {"regularity.min_radius_cells", num(c.regularity.min_radius_cells)},
      {"regularity.max_radius_cells", num(c.regularity.max_radius_cells)},
      {"regularity.radius_count", inum(c.regularity.radius_count)},
      {"regularity.affine_removal", flag(c.regularity.affine_removal)},
      {"sweep.samples", inum(c.samples)},
      {"singular.resolutions", join(c.resolutions)},
      {"singular.radii", join(c.density_radii)},
  };
  return e;
}

}  // namespace signorini::cli
