#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <random>

#include "signorini/cli.hpp"
#include "signorini/lame_halfspace.hpp"
#include "signorini/pipeline.hpp"
#include "signorini/spectral.hpp"

#ifndef SIGNORINI_VERSION
#define SIGNORINI_VERSION "unknown"
#endif

namespace signorini::cli {

std::string format_number(double x) {
  if (x == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string format_number(long long x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw Error("cannot write " + path.string());
  row(header);
  rows_ = 0;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw Error("csv row width does not match the header");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out_ << ',';
    out_ << cells[k];
  }
  out_ << '\n';
  ++rows_;
}

int exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return 0;
    case RunStatus::check_failed: return 1;
    case RunStatus::config_error: return 2;
    case RunStatus::not_converged: return 3;
  }
  return 1;
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::check_failed: return "check_failed";
    case RunStatus::config_error: return "config_error";
    case RunStatus::not_converged: return "not_converged";
  }
  return "?";
}

std::optional<std::string> RunResult::get(std::string_view key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  return std::nullopt;
}

namespace {

using Summary = std::vector<std::pair<std::string, std::string>>;

struct Context {
  const ExperimentConfig& cfg;
  std::filesystem::path dir;
  RunResult& result;

  void put(const std::string& key, double v) { result.summary.emplace_back(key, format_number(v)); }
  void put(const std::string& key, long long v) { result.summary.emplace_back(key, format_number(v)); }
  void put(const std::string& key, int v) { put(key, static_cast<long long>(v)); }
  void put(const std::string& key, std::size_t v) { put(key, static_cast<long long>(v)); }
  void put(const std::string& key, bool v) { result.summary.emplace_back(key, v ? "true" : "false"); }
  void put(const std::string& key, const char* v) { result.summary.emplace_back(key, v); }
  void put(const std::string& key, const std::string& v) { result.summary.emplace_back(key, v); }

  CsvWriter csv(const std::string& name, std::vector<std::string> header) {
    result.files.push_back(name);
    return CsvWriter(dir / name, std::move(header));
  }
  void check(bool ok) {
    if (!ok && result.status == RunStatus::ok) result.status = RunStatus::check_failed;
  }
  void converged(bool ok) {
    if (!ok) result.status = RunStatus::not_converged;
  }
  void warn(const std::string& w) { result.warnings.push_back(w); }
};

LameParams material(const ExperimentConfig& cfg) { return LameParams::derive(cfg.mu, cfg.lambda); }

GridSpec make_grid(const ExperimentConfig& cfg, int points) {
  return GridSpec::make(cfg.dim, cfg.period, points);
}

RealField make_obstacle(const ObstacleSpec& spec, const GridSpec& grid) {
  RealField phi(grid);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    const auto x = grid.node_position(i);
    const double dx = x[0] - spec.center[0];
    const double dy = grid.boundary_dim() == 2 ? x[1] - spec.center[1] : 0.0;
    double v = 0.0;
    switch (spec.shape) {
      case ObstacleShape::constant:
        v = spec.value;
        break;
      case ObstacleShape::bump:
        v = std::max(spec.height - spec.curvature * (dx * dx + dy * dy), spec.floor);
        break;
      case ObstacleShape::wedge:
        v = std::max(spec.height - spec.slope * std::hypot(dx, dy), spec.floor);
        break;
      case ObstacleShape::double_bump: {
        const double a = dx + 0.5 * spec.separation;
        const double b = dx - 0.5 * spec.separation;
        const double q = std::min(a * a, b * b) + dy * dy;
        v = std::max(spec.height - spec.curvature * q, spec.floor);
        break;
      }
    }
    phi(0, i) = v;
  }
  return phi;
}

std::optional<DisplacementSlab> make_force(const ForceSpec& spec, const GridSpec& grid,
                                           const std::vector<double>& heights) {
  if (!spec.enabled) return std::nullopt;
  const int d = grid.boundary_dim();
  DisplacementSlab f(grid, heights, d + 1);
  const int comp = spec.normal ? d : 0;
  const double s2 = 2.0 * spec.width * spec.width;
  for (std::size_t m = 0; m < heights.size(); ++m) {
    const double dt = heights[m] - spec.depth;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
      const auto x = grid.node_position(i);
      const double dx = x[0] - spec.center[0];
      const double dy = d == 2 ? x[1] - spec.center[1] : 0.0;
      f(m, comp, i) = spec.amplitude * std::exp(-(dx * dx + dy * dy + dt * dt) / s2);
    }
  }
  return f;
}

Cutoff make_cutoff_spec(const ExperimentConfig& cfg) {
  return Cutoff{{0.0, 0.0}, cfg.inner_radius, cfg.outer_radius};
}

ObstacleOptions solver_options(const ExperimentConfig& cfg) {
  ObstacleOptions o = cfg.solver;
  o.record_log = true;
  return o;
}

/// Nodes of a 1D grid, or the axis-0 line through the centre of a 2D grid.
std::vector<std::size_t> trace_line(const GridSpec& grid) {
  std::vector<std::size_t> nodes;
  const int n = grid.points_per_dim();
  for (int i = 0; i < n; ++i) nodes.push_back(grid.node_at({i, grid.boundary_dim() == 2 ? n / 2 : 0}));
  return nodes;
}

void write_trace(Context& ctx, const std::string& name, const RealField& field) {
  auto csv = ctx.csv(name, {"x", "value"});
  for (std::size_t node : trace_line(field.grid())) {
    csv.row({format_number(field.grid().node_position(node)[0]), format_number(field(0, node))});
  }
}

void write_convergence(Context& ctx, const std::vector<IterationRecord>& log) {
  auto csv = ctx.csv("convergence.csv", {"iter", "energy", "residual"});
  for (const auto& r : log) {
    csv.row({format_number(static_cast<long long>(r.iter)), format_number(r.energy), format_number(r.residual)});
  }
}

std::size_t count(const Mask& m) { return static_cast<std::size_t>(std::count(m.begin(), m.end(), 1)); }

double sup_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

SignoriniSolution run_pipeline(Context& ctx, const GridSpec& grid, const RealField& phi,
                               std::vector<double> heights) {
  const auto& cfg = ctx.cfg;
  auto force = make_force(cfg.force, grid, heights);
  SignoriniProblem problem{material(cfg), grid, force, phi, make_cutoff_spec(cfg)};
  SignoriniOptions opts;
  opts.obstacle = solver_options(cfg);
  opts.heights = std::move(heights);
  SignoriniSolution sol = signorini_solve(problem, opts);
  for (const auto& line : sol.log) ctx.warn(line);
  return sol;
}

std::vector<double> output_heights(const ExperimentConfig& cfg) {
  return cfg.levels <= 1 ? std::vector<double>{0.0} : uniform_heights(cfg.levels, cfg.effective_depth());
}

std::mt19937_64 rng_for(const ExperimentConfig& cfg) { return std::mt19937_64(cfg.seed); }

// --- experiments ------------------------------------------------------------

void verify_symbol(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const GridSpec grid = make_grid(cfg, cfg.points);
  const FrequencyLattice lattice(grid);
  const int d = grid.boundary_dim();

  auto worst_for = [&](const LameParams& p, CsvWriter* csv) {
    double worst = 0.0;
    for (std::size_t s = 0; s < lattice.size(); ++s) {
      const double r = lattice.magnitude(s);
      const std::span<const double> xi(lattice.xi(s).data(), d);
      const Complex assembled = r > 0.0 ? boundary_traces(p, xi).dtn : Complex{};
      const Complex diff = assembled - p.dtn_constant() * r;
      if (r > 0.0) worst = std::max(worst, std::abs(diff) / (p.dtn_constant() * r));
      if (csv) {
        const long long k = d == 1 ? lattice.wavenumbers(s)[0] : static_cast<long long>(s);
        csv->row({format_number(k), format_number(diff.real()), format_number(diff.imag())});
      }
    }
    return worst;
  };

  auto csv = ctx.csv("spectra.csv", {"k", "re", "im"});
  const double base = worst_for(material(cfg), &csv);
  double worst = base;
  auto rng = rng_for(cfg);
  std::uniform_real_distribution<double> dist(0.1, 10.0);
  for (int k = 0; k < cfg.samples; ++k) {
    const double mu = dist(rng);
    const double lam = dist(rng);
    worst = std::max(worst, worst_for(LameParams::derive(mu, lam), nullptr));
  }
  ctx.put("result.modes", lattice.size());
  ctx.put("result.material_samples", cfg.samples);
  ctx.put("result.max_rel_error_base", base);
  ctx.put("result.max_rel_error", worst);
  ctx.check(worst <= 1e-12);
}

void verify_kernel(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const int d = cfg.dim;
  auto rng = rng_for(cfg);
  std::uniform_real_distribution<double> material_dist(0.1, 10.0), xi_dist(-8.0, 8.0), t_dist(0.0, 2.0);
  auto csv = ctx.csv("spectra.csv", {"k", "re", "im"});
  double worst = 0.0;
  for (int k = 0; k < cfg.samples; ++k) {
    const LameParams p = LameParams::derive(material_dist(rng), material_dist(rng));
    std::array<double, 2> xi{};
    for (int j = 0; j < d; ++j) xi[j] = xi_dist(rng);
    if (std::hypot(xi[0], xi[1]) < 1e-3) xi[0] = 1.0;
    const double t = t_dist(rng);
    const std::span<const double> xs(xi.data(), d);
    const auto coeffs = dirichlet_coefficients(p, xs, 1.0);
    Complex sample_diff{};
    double sample_err = 0.0;
    auto compare = [&](const KernelEval& kernel, const SmallMatrix& w) {
      const auto values = w.apply(coeffs);
      for (int j = 0; j <= d; ++j) {
        const Complex ref = j < d ? kernel.tangential[j] : kernel.normal;
        const Complex diff = values[j] - ref;
        const double err = std::abs(diff) / std::max(1.0, std::abs(ref));
        if (err >= sample_err) {
          sample_err = err;
          sample_diff = diff;
        }
      }
    };
    compare(extension_kernel(p, xs, t), fundamental_matrix(p, xs, t));
    compare(extension_kernel_dt(p, xs, t), fundamental_matrix_dt(p, xs, t));
    worst = std::max(worst, sample_err);
    csv.row({format_number(static_cast<long long>(k)), format_number(sample_diff.real()),
             format_number(sample_diff.imag())});
  }
  ctx.put("result.samples", cfg.samples);
  ctx.put("result.max_entry_error", worst);
  bool kernel_consistent = false;
  bool other_inconsistent = true;
  const std::array<double, 1> unit{1.0};
  const TraceFactorReport factors = check_trace_factors(LameParams::derive(1.0, 1.0), unit);
  ctx.put("result.trace_factor.kernel_constant", factors.kernel_constant);
  for (std::size_t k = 0; k < factors.candidates.size(); ++k) {
    const auto& c = factors.candidates[k];
    const std::string key = "result.trace_factor." + std::to_string(k);
    ctx.put(key + ".label", c.label);
    ctx.put(key + ".constant", c.tangential_constant);
    ctx.put(key + ".boundary_residual", c.boundary_residual);
    ctx.put(key + ".consistent", c.consistent);
    if (c.label.ends_with("mu*kappa)")) kernel_consistent = c.consistent;
    if (c.label.ends_with("mu*nu)") && c.consistent) other_inconsistent = false;
  }
  ctx.check(worst <= 1e-12 && kernel_consistent && other_inconsistent);
}

void solve_obstacle(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const GridSpec grid = make_grid(cfg, cfg.points);
  const LameParams p = material(cfg);
  const Cutoff cut = make_cutoff_spec(cfg);
  ObstacleProblem problem{make_obstacle(cfg.obstacle, grid), RealField(grid), cutoff_window(grid, cut),
                          cutoff_collar(grid, cut), p.dtn_constant()};
  const ObstacleSolution sol = obstacle_solve(problem, solver_options(cfg));
  write_trace(ctx, "traces.csv", sol.v);
  write_convergence(ctx, sol.log);
  ctx.put("result.iterations", sol.iterations);
  ctx.put("result.converged", sol.converged);
  ctx.put("result.residual", sol.residual);
  ctx.put("result.energy", obstacle_energy(problem, sol.v));
  ctx.put("result.contact_nodes", count(sol.active_set));
  ctx.put("result.free_boundary_points", sol.free_boundary.size());
  ctx.converged(sol.converged);
}

void solve_signorini(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const GridSpec grid = make_grid(cfg, cfg.points);
  const RealField phi = make_obstacle(cfg.obstacle, grid);
  const SignoriniSolution sol = run_pipeline(ctx, grid, phi, output_heights(cfg));
  const RealField traction = solution_traction(material(cfg), sol);
  write_trace(ctx, "traces.csv", sol.trace_un);
  write_trace(ctx, "traction.csv", traction);
  write_convergence(ctx, sol.scalar_solution.log);
  const auto& s = sol.scalar_solution;
  ctx.put("result.iterations", s.iterations);
  ctx.put("result.converged", s.converged);
  ctx.put("result.residual", s.residual);
  ctx.put("result.contact_nodes", count(sol.contact_set));
  ctx.put("result.free_boundary_points", sol.free_boundary.size());
  ctx.put("result.discarded_mean", sol.discarded_mean);
  ctx.put("result.trace_sup", sup_norm(sol.trace_un.component(0)));
  ctx.converged(s.converged);
}

struct Comparison {
  double discrepancy = 0;
  int endpoint_shift = 0;
  std::array<int, 2> pipeline_contact{-1, -1};
  std::array<int, 2> oracle_contact{-1, -1};
  bool converged = false;
  int oracle_sweeps = 0;
  double complementarity = 0;
};

std::array<int, 2> contact_interval(const Mask& m) {
  std::array<int, 2> out{-1, -1};
  for (int i = 0; i < static_cast<int>(m.size()); ++i) {
    if (!m[i]) continue;
    if (out[0] < 0) out[0] = i;
    out[1] = i;
  }
  return out;
}

Comparison compare_once(Context& ctx, int points, int levels, bool write) {
  const auto& cfg = ctx.cfg;
  const GridSpec grid = make_grid(cfg, points);
  const double depth = cfg.oracle.depth > 0.0 ? cfg.oracle.depth : cfg.period;
  const StripMesh mesh = StripMesh::make(points, levels, cfg.period, depth, cfg.oracle.top);
  const RealField phi = make_obstacle(cfg.obstacle, grid);
  const std::vector<double> heights = cfg.force.enabled ? mesh.force_heights() : std::vector<double>{0.0};
  const SignoriniSolution sol = run_pipeline(ctx, grid, phi, heights);

  OracleOptions oo;
  oo.omega = cfg.oracle.omega;
  oo.tol = cfg.oracle.tol;
  oo.max_iter = cfg.oracle.max_iter;
  const DirectSolution direct = direct_signorini_solve(material(cfg), mesh, make_force(cfg.force, grid, mesh.force_heights()),
                                                       phi, cutoff_collar(grid, make_cutoff_spec(cfg)), oo);
  Comparison c;
  double diff = 0.0;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    diff = std::max(diff, std::abs(sol.trace_un(0, i) - direct.trace(0, i)));
  }
  const double scale = sup_norm(sol.trace_un.component(0));
  c.discrepancy = scale > 0.0 ? diff / scale : diff;
  c.pipeline_contact = contact_interval(sol.contact_set);
  c.oracle_contact = contact_interval(direct.contact);
  c.endpoint_shift = std::max(std::abs(c.pipeline_contact[0] - c.oracle_contact[0]),
                              std::abs(c.pipeline_contact[1] - c.oracle_contact[1]));
  c.converged = sol.scalar_solution.converged && direct.converged;
  c.oracle_sweeps = direct.iterations;
  c.complementarity = direct.complementarity;
  if (write) {
    write_trace(ctx, "traces.csv", sol.trace_un);
    write_trace(ctx, "oracle_traces.csv", direct.trace);
    write_convergence(ctx, sol.scalar_solution.log);
    auto csv = ctx.csv("oracle_convergence.csv", {"sweep", "update"});
    for (const auto& r : direct.log) csv.row({format_number(static_cast<long long>(r.sweep)), format_number(r.update)});
  }
  return c;
}

void oracle_compare(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const int levels = cfg.oracle.levels > 0 ? cfg.oracle.levels : cfg.points;
  auto record = [&](const std::string& prefix, const Comparison& c) {
    ctx.put(prefix + "discrepancy", c.discrepancy);
    ctx.put(prefix + "pipeline_contact_first", c.pipeline_contact[0]);
    ctx.put(prefix + "pipeline_contact_last", c.pipeline_contact[1]);
    ctx.put(prefix + "oracle_contact_first", c.oracle_contact[0]);
    ctx.put(prefix + "oracle_contact_last", c.oracle_contact[1]);
    ctx.put(prefix + "endpoint_shift_cells", c.endpoint_shift);
    ctx.put(prefix + "oracle_sweeps", c.oracle_sweeps);
    ctx.put(prefix + "oracle_complementarity", c.complementarity);
    ctx.put(prefix + "converged", c.converged);
    ctx.converged(c.converged);
  };
  const Comparison coarse = compare_once(ctx, cfg.points, levels, true);
  record("result.", coarse);
  ctx.check(coarse.discrepancy <= cfg.oracle.tolerance && coarse.endpoint_shift <= 2);
  if (cfg.oracle.refine) {
    const Comparison fine = compare_once(ctx, 2 * cfg.points, 2 * levels, false);
    record("result.refined.", fine);
    const double ratio = fine.discrepancy > 0.0 ? coarse.discrepancy / fine.discrepancy : INFINITY;
    ctx.put("result.refinement_ratio", ratio);
    ctx.check(ratio >= 1.5);
  }
}

void regularity_study(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const GridSpec grid = make_grid(cfg, cfg.points);
  const RealField phi = make_obstacle(cfg.obstacle, grid);
  std::vector<double> heights;
  if (cfg.force.enabled) {
    heights = uniform_heights(cfg.levels, cfg.effective_depth());
  } else {
    const int levels = static_cast<int>(std::ceil(cfg.regularity.max_radius_cells)) + 2;
    heights = uniform_heights(levels, levels * grid.spacing());
  }
  const SignoriniSolution sol = run_pipeline(ctx, grid, phi, heights);
  ctx.converged(sol.scalar_solution.converged);
  const FreeBoundaryReport report = regularity_report(material(cfg), sol, phi, cfg.regularity);
  for (const auto& w : report.warnings) ctx.warn(w);
  write_trace(ctx, "traces.csv", sol.trace_un);

  auto point = [&](const FreeBoundaryEntry& e) {
    const auto& x = e.point.position;
    return grid.boundary_dim() == 1 ? format_number(x[0])
                                    : format_number(x[0]) + " " + format_number(x[1]);
  };
  auto scalar_csv = ctx.csv("free_boundary.csv", {"point", "slope", "confidence", "density", "label"});
  auto vector_csv = ctx.csv("free_boundary_vector.csv", {"point", "slope", "confidence", "density", "label"});
  std::size_t regular = 0, singular = 0, undetermined = 0, shared = 0, agree = 0;
  double smin = INFINITY, smax = -INFINITY, vmin = INFINITY, vmax = -INFINITY;
  double scorr = INFINITY, vcorr = INFINITY;
  for (const auto& e : report.entries) {
    scalar_csv.row({point(e), format_number(e.scalar_fit.slope), format_number(e.scalar_fit.confidence),
                    format_number(e.density), to_string(e.scalar_label)});
    switch (e.scalar_label) {
      case PointClass::regular: ++regular; break;
      case PointClass::singular_candidate: ++singular; break;
      case PointClass::undetermined: ++undetermined; break;
    }
    if (e.scalar_label == PointClass::regular) {
      smin = std::min(smin, e.scalar_fit.slope);
      smax = std::max(smax, e.scalar_fit.slope);
      scorr = std::min(scorr, e.scalar_correlation);
    }
    if (e.vector_fit && e.vector_label) {
      ++shared;
      agree += *e.vector_label == e.scalar_label ? 1 : 0;
      vector_csv.row({point(e), format_number(e.vector_fit->slope), format_number(e.vector_fit->confidence),
                      format_number(e.density), to_string(*e.vector_label)});
      if (*e.vector_label == PointClass::regular) {
        vmin = std::min(vmin, e.vector_fit->slope);
        vmax = std::max(vmax, e.vector_fit->slope);
        vcorr = std::min(vcorr, e.vector_correlation);
      }
    }
  }
  ctx.put("result.converged", sol.scalar_solution.converged);
  ctx.put("result.free_boundary_points", sol.free_boundary.size());
  ctx.put("result.analysed_points", report.entries.size());
  ctx.put("result.regular", regular);
  ctx.put("result.singular_candidate", singular);
  ctx.put("result.undetermined", undetermined);
  ctx.put("result.shared_points", shared);
  ctx.put("result.label_agreement", shared > 0 ? static_cast<double>(agree) / shared : 0.0);
  if (regular > 0) {
    ctx.put("result.scalar_slope_min", smin);
    ctx.put("result.scalar_slope_max", smax);
    ctx.put("result.scalar_correlation_min", scorr);
  }
  if (vmin <= vmax) {
    ctx.put("result.vector_slope_min", vmin);
    ctx.put("result.vector_slope_max", vmax);
    ctx.put("result.vector_correlation_min", vcorr);
  }
  ctx.check(!report.entries.empty() && shared > 0 && agree == shared);
}

void singular_study(Context& ctx) {
  const auto& cfg = ctx.cfg;
  auto csv = ctx.csv("singular.csv", {"mask", "N", "radius", "density", "limit", "error"});
  struct Case {
    const char* name;
    double limit;
  };
  const std::array<Case, 2> cases{Case{cfg.dim == 1 ? "half_line" : "half_plane", 0.5}, Case{"point", 0.0}};
  bool within = true;
  for (const auto& c : cases) {
    double previous = INFINITY;
    bool monotone = true;
    for (int n : cfg.resolutions) {
      const GridSpec grid = make_grid(cfg, n);
      Mask mask(grid.node_count(), 0);
      for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const auto idx = grid.node_indices(i);
        mask[i] = c.limit > 0.0 ? idx[0] <= n / 2 : (idx[0] == n / 2 && (cfg.dim == 1 || idx[1] == n / 2));
      }
      std::vector<double> radii;
      for (double f : cfg.density_radii) radii.push_back(f * cfg.period);
      const DensityEstimate est = contact_density(mask, grid, {0.0, 0.0}, radii);
      for (const auto& w : est.warnings) ctx.warn("N=" + std::to_string(n) + ": " + w);
      for (std::size_t k = 0; k < est.radii.size(); ++k) {
        csv.row({c.name, format_number(static_cast<long long>(n)), format_number(est.radii[k]),
                 format_number(est.densities[k]), format_number(c.limit),
                 format_number(std::abs(est.densities[k] - c.limit))});
      }
      if (est.densities.empty()) {
        within = false;
        continue;
      }
      const double err = std::abs(est.densities.back() - c.limit);
      within = within && err <= 2.0 / n;
      monotone = monotone && err <= previous;
      previous = err;
      ctx.put(std::string("result.") + c.name + ".N" + std::to_string(n) + ".error", err);
    }
    ctx.put(std::string("result.") + c.name + ".monotone", monotone);
    within = within && monotone;
  }
  ctx.put("result.within_2_over_N", within);
  ctx.check(within);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::filesystem::path& dir, const ExperimentConfig& cfg, const RunResult& r) {
  std::ofstream out(dir / "manifest.txt", std::ios::binary);
  if (!out) return;
  out << "# signorini run manifest\n";
  out << "version = " << SIGNORINI_VERSION << '\n';
  out << "fft_backend = " << fft_backend_version() << '\n';
  out << "started = " << utc_timestamp() << '\n';
  for (const auto& [k, v] : config_entries(cfg)) out << "config." << k << " = " << v << '\n';
  for (const auto& [k, v] : r.summary) out << k << " = " << v << '\n';
  for (const auto& w : r.warnings) out << "warning = " << w << '\n';
  if (!r.message.empty()) out << "message = " << r.message << '\n';
  std::string files;
  for (const auto& f : r.files) files += (files.empty() ? "" : ",") + f;
  out << "files = " << files << '\n';
  out << "status = " << to_string(r.status) << '\n';
  out << "exit_code = " << exit_code(r.status) << '\n';
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  RunResult result;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    result.status = RunStatus::config_error;
    result.message = "cannot create output directory " + out_dir.string() + ": " + ec.message();
    return result;
  }
  Context ctx{cfg, out_dir, result};
  try {
    cfg.validate();
    switch (cfg.experiment) {
      case Experiment::verify_symbol: verify_symbol(ctx); break;
      case Experiment::verify_kernel: verify_kernel(ctx); break;
      case Experiment::solve_obstacle: solve_obstacle(ctx); break;
      case Experiment::solve_signorini: solve_signorini(ctx); break;
      case Experiment::oracle_compare: oracle_compare(ctx); break;
      case Experiment::regularity_study: regularity_study(ctx); break;
      case Experiment::singular_study: singular_study(ctx); break;
    }
  } catch (const ConfigError& e) {
    result.status = RunStatus::config_error;
    result.message = e.what();
  } catch (const DomainError& e) {
    result.status = RunStatus::config_error;
    result.message = e.what();
  }
  write_manifest(out_dir, cfg, result);
  result.files.push_back("manifest.txt");
  return result;
}

}  // namespace signorini::cli
