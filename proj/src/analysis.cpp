#include "signorini/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "signorini/auxiliary.hpp"
#include "signorini/errors.hpp"
#include "signorini/lame_halfspace.hpp"
#include "signorini/pipeline.hpp"

namespace signorini {

namespace {

// Visits every node within `reach` of x0 with its minimal-image offset,
// scanning only the bounding box of the ball.
template <class Fn>
void for_each_near(const GridSpec& grid, std::array<double, 2> x0, double reach, Fn&& fn) {
  const double h = grid.spacing();
  const double half = 0.5 * grid.period();
  const int n = grid.points_per_dim();
  std::array<int, 2> lo{0, 0}, hi{0, 0};
  for (int a = 0; a < grid.boundary_dim(); ++a) {
    lo[a] = static_cast<int>(std::floor((x0[a] + half - reach) / h));
    hi[a] = std::min(static_cast<int>(std::ceil((x0[a] + half + reach) / h)), lo[a] + n - 1);
  }
  for (int i = lo[0]; i <= hi[0]; ++i) {
    for (int j = lo[1]; j <= hi[1]; ++j) {
      const std::array<double, 2> offset{i * h - half - x0[0],
                                         grid.boundary_dim() == 2 ? j * h - half - x0[1] : 0.0};
      fn(grid.node_at({i, j}), offset);
    }
  }
}

// Periodic linear (d = 1) or bilinear (d = 2) interpolation of one component.
double interpolate(const GridSpec& grid, std::span<const double> values, std::array<double, 2> x) {
  const double h = grid.spacing();
  std::array<int, 2> i0{};
  std::array<double, 2> w{};
  for (int a = 0; a < grid.boundary_dim(); ++a) {
    const double f = (x[a] + 0.5 * grid.period()) / h;
    const double fl = std::floor(f);
    i0[a] = static_cast<int>(fl);
    w[a] = f - fl;
  }
  if (grid.boundary_dim() == 1) {
    return (1.0 - w[0]) * values[grid.node_at({i0[0], 0})] + w[0] * values[grid.node_at({i0[0] + 1, 0})];
  }
  double v = 0.0;
  for (int da = 0; da < 2; ++da) {
    for (int db = 0; db < 2; ++db) {
      const double weight = (da ? w[0] : 1.0 - w[0]) * (db ? w[1] : 1.0 - w[1]);
      if (weight == 0.0) continue;
      v += weight * values[grid.node_at({i0[0] + da, i0[1] + db})];
    }
  }
  return v;
}

double slab_interpolate(const DisplacementSlab& slab, int c, std::array<double, 2> x, double t, double dt) {
  const double f = t / dt;
  const std::size_t m0 = static_cast<std::size_t>(std::floor(f));
  const double w = f - static_cast<double>(m0);
  const double lo = interpolate(slab.grid(), slab.level_component(m0, c), x);
  if (w == 0.0) return lo;
  return (1.0 - w) * lo + w * interpolate(slab.grid(), slab.level_component(m0 + 1, c), x);
}

// Fraction of a node's cell inside the ball, smoothed across one spacing so
// the averages vary continuously with r.
double cell_weight(double rho, double r, double h) { return std::clamp((r - rho) / h + 0.5, 0.0, 1.0); }

void check_radii(const GridSpec& grid, std::span<const double> radii) {
  if (radii.size() < 4) throw DomainError("vanishing-order fit needs at least 4 radii");
  const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
  if (*hi < 8.0 * *lo * (1.0 - 1e-12)) throw DomainError("radii must span a factor of at least 8");
  if (*lo < 2.0 * grid.spacing() * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "radius " << *lo << " is below 2h = " << 2.0 * grid.spacing() << " (unresolvable)";
    throw DomainError(msg.str());
  }
  if (*hi > 0.5 * grid.period()) throw DomainError("radius exceeds half the period");
}

void fit_slope(VanishingOrderFit& fit) {
  const std::size_t k = fit.radii.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(fit.averages[i] > 0.0)) {
      fit.slope = std::numeric_limits<double>::infinity();
      fit.confidence = 0.0;
      return;
    }
    const double x = std::log(fit.radii[i]);
    const double y = std::log(fit.averages[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double kk = static_cast<double>(k);
  fit.slope = (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
  const double intercept = (sy - fit.slope * sx) / kk;
  double res = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double e = std::log(fit.averages[i]) - intercept - fit.slope * std::log(fit.radii[i]);
    res += e * e;
  }
  fit.confidence = std::sqrt(res / kk);
}

struct Derivatives {
  double u1_ss, u1_tt, u1_st, u2_ss, u2_tt, u2_st;
};

Derivatives second_differences(const P32Profile& p, double s, double t, double h) {
  auto f = [&](double ds, double dt) { return p32_cartesian(p, s + ds, t + dt); };
  const auto c = f(0, 0);
  const auto e = f(h, 0), w = f(-h, 0), nn = f(0, h), so = f(0, -h);
  const auto ne = f(h, h), nw = f(-h, h), se = f(h, -h), sw = f(-h, -h);
  const double ih2 = 1.0 / (h * h);
  const double ix = 1.0 / (4.0 * h * h);
  return {(e[0] - 2 * c[0] + w[0]) * ih2, (nn[0] - 2 * c[0] + so[0]) * ih2,
          (ne[0] - nw[0] - se[0] + sw[0]) * ix, (e[1] - 2 * c[1] + w[1]) * ih2,
          (nn[1] - 2 * c[1] + so[1]) * ih2, (ne[1] - nw[1] - se[1] + sw[1]) * ix};
}

// Near a regular point (v - psi)^{2/3} is linear in the distance to the free
// boundary; extrapolate it from the two free nodes beyond the crossing.
std::array<double, 2> refine_crossing(const RealField& gap, const FreeBoundaryPoint& pt) {
  const GridSpec& grid = gap.grid();
  const auto ci = grid.node_indices(pt.contact_node);
  const auto fi = grid.node_indices(pt.free_node);
  std::array<int, 2> beyond = fi;
  beyond[pt.axis] += fi[pt.axis] - ci[pt.axis];
  const double a1 = std::cbrt(std::pow(std::max(gap(0, pt.free_node), 0.0), 2.0));
  const double a2 = std::cbrt(std::pow(std::max(gap(0, grid.node_at(beyond)), 0.0), 2.0));
  if (!(a2 > a1)) return pt.position;
  const double back = std::clamp(a1 / (a2 - a1), 0.0, 1.0);
  auto x = grid.node_position(pt.free_node);
  x[pt.axis] -= (fi[pt.axis] - ci[pt.axis]) * back * grid.spacing();
  return x;
}

}  // namespace

P32Profile::P32Profile(LameParams p, std::array<double, 2> e, double s)
    : params(p), direction(e), sign(s) {
  const double norm = std::hypot(e[0], e[1]);
  if (!(norm > 0.0)) throw DomainError("profile direction must be nonzero");
  direction = {e[0] / norm, e[1] / norm};
  if (s != 1.0 && s != -1.0) throw DomainError("profile sign must be +1 or -1");
}

double P32Profile::a() const {
  const double mu = params.mu(), lam = params.lambda();
  return (3.0 * mu + lam + 0.5 * (mu + lam)) / (6.0 * mu);
}
double P32Profile::c3() const {
  const double mu = params.mu(), lam = params.lambda();
  return (3.0 * mu + lam - 0.5 * (mu + lam)) / (6.0 * mu);
}
double P32Profile::b() const { return (params.mu() + params.lambda()) / (4.0 * params.mu()); }

std::array<double, 2> p32_eval(const P32Profile& profile, PolarPoint pt) {
  if (!(pt.r >= 0.0)) throw DomainError("p32 radius must be nonnegative");
  if (!(pt.theta >= 0.0 && pt.theta <= std::numbers::pi)) throw DomainError("p32 angle outside [0, pi]");
  const double scale = profile.sign * std::pow(pt.r, 1.5);
  const double tangential = profile.a() * std::cos(1.5 * pt.theta) - profile.b() * std::cos(0.5 * pt.theta);
  const double normal = profile.c3() * std::sin(1.5 * pt.theta) - profile.b() * std::sin(0.5 * pt.theta);
  return {scale * tangential, scale * normal};
}

std::vector<std::array<double, 2>> p32_eval(const P32Profile& profile, std::span<const PolarPoint> points) {
  std::vector<std::array<double, 2>> out;
  out.reserve(points.size());
  for (const auto& pt : points) out.push_back(p32_eval(profile, pt));
  return out;
}

std::array<double, 2> p32_cartesian(const P32Profile& profile, double s, double t) {
  const double r = std::hypot(s, t);
  if (r == 0.0) return {0.0, 0.0};
  return p32_eval(profile, {r, std::atan2(t, s)});
}

P32Validation p32_validate(const P32Profile& profile, double h) {
  if (!(h > 0.0 && 4.0 * h < 1.0)) throw DomainError("p32 validation needs 0 < 4h < 1");
  const double mu = profile.params.mu();
  const double lam = profile.params.lambda();
  const double p = 2.0 * mu + lam;
  P32Validation v;

  const int reach = static_cast<int>(std::ceil(1.0 / h));
  for (int i = -reach; i <= reach; ++i) {
    for (int j = 2; j <= reach; ++j) {
      const double s = i * h, t = j * h;
      const double r = std::hypot(s, t);
      if (r < 0.5 || r > 1.0) continue;
      const auto d = second_differences(profile, s, t, h);
      const double r1 = p * d.u1_ss + mu * d.u1_tt + (mu + lam) * d.u2_st;
      const double r2 = mu * d.u2_ss + p * d.u2_tt + (mu + lam) * d.u1_st;
      v.pde_residual = std::max({v.pde_residual, std::abs(r1), std::abs(r2)});
    }
  }

  auto traces = [&](double s) {
    const auto c = p32_cartesian(profile, s, 0.0);
    const auto up1 = p32_cartesian(profile, s, h);
    const auto up2 = p32_cartesian(profile, s, 2.0 * h);
    const auto e = p32_cartesian(profile, s + h, 0.0);
    const auto w = p32_cartesian(profile, s - h, 0.0);
    const double dt1 = (-3.0 * c[0] + 4.0 * up1[0] - up2[0]) / (2.0 * h);
    const double dt2 = (-3.0 * c[1] + 4.0 * up1[1] - up2[1]) / (2.0 * h);
    const double ds1 = (e[0] - w[0]) / (2.0 * h);
    const double ds2 = (e[1] - w[1]) / (2.0 * h);
    return std::array<double, 2>{dt1 + ds2, 2.0 * mu * dt2 + lam * (ds1 + dt2)};
  };

  v.sigma_contact_min = std::numeric_limits<double>::infinity();
  v.sigma_contact_max = -std::numeric_limits<double>::infinity();
  const int lo = static_cast<int>(std::ceil(0.5 / h));
  for (int i = lo; i <= reach; ++i) {
    const double s = std::min(i * h, 1.0);
    const auto contact = traces(s);   // theta = 0: p.e_n = 0
    const auto free = traces(-s);     // theta = pi
    v.tangential_traction = std::max({v.tangential_traction, std::abs(contact[0]), std::abs(free[0])});
    v.sigma_free_ray = std::max(v.sigma_free_ray, std::abs(free[1]));
    v.sigma_contact_min = std::min(v.sigma_contact_min, contact[1]);
    v.sigma_contact_max = std::max(v.sigma_contact_max, contact[1]);
  }
  v.contact_single_signed = v.sigma_contact_min * v.sigma_contact_max > 0.0;
  v.sigma_at_unit_contact = traces(1.0)[1];
  return v;
}

VanishingOrderFit vanishing_order(const RealField& trace, std::array<double, 2> x0,
                                  std::span<const double> radii, bool affine_removal) {
  const GridSpec& grid = trace.grid();
  check_radii(grid, radii);
  const auto values = trace.component(0);
  const double at_x0 = interpolate(grid, values, x0);
  VanishingOrderFit fit{x0, std::vector<double>(radii.begin(), radii.end()), {}, 0, 0, affine_removal};
  const double h = grid.spacing();
  for (double r : radii) {
    double sum = 0.0, volume = 0.0;
    for_each_near(grid, x0, r + h, [&](std::size_t i, std::array<double, 2> d) {
      const double w = cell_weight(std::hypot(d[0], d[1]), r, h);
      if (w == 0.0) return;
      double u = values[i];
      if (affine_removal) {
        const std::array<double, 2> mid{x0[0] + 0.5 * d[0], x0[1] + 0.5 * d[1]};
        u = u - 2.0 * interpolate(grid, values, mid) + at_x0;
      }
      sum += w * u * u;
      volume += w;
    });
    fit.averages.push_back(std::sqrt(sum / volume));
  }
  fit_slope(fit);
  return fit;
}

VanishingOrderFit vanishing_order(const DisplacementSlab& slab, std::array<double, 2> x0,
                                  std::span<const double> radii, bool affine_removal) {
  const GridSpec& grid = slab.grid();
  check_radii(grid, radii);
  const double dt = uniform_spacing(slab.heights());
  const double top = slab.heights().back();
  const double r_max = *std::max_element(radii.begin(), radii.end());
  if (top < r_max + 0.5 * grid.spacing()) throw DomainError("slab is too shallow for the largest radius");
  const int comps = slab.components();
  std::vector<double> at_x0(comps);
  for (int c = 0; c < comps; ++c) at_x0[c] = interpolate(grid, slab.level_component(0, c), x0);

  VanishingOrderFit fit{x0, std::vector<double>(radii.begin(), radii.end()), {}, 0, 0, affine_removal};
  const double h = grid.spacing();
  for (double r : radii) {
    double sum = 0.0, volume = 0.0;
    for (std::size_t m = 0; m < slab.level_count(); ++m) {
      const double t = slab.heights()[m];
      if (t > r + h) break;
      const double layer = m == 0 ? 0.5 : 1.0;  // the t = 0 row owns half a cell
      for_each_near(grid, x0, r + h, [&](std::size_t i, std::array<double, 2> d) {
        const double w = layer * cell_weight(std::sqrt(d[0] * d[0] + d[1] * d[1] + t * t), r, h);
        if (w == 0.0) return;
        const std::array<double, 2> mid{x0[0] + 0.5 * d[0], x0[1] + 0.5 * d[1]};
        for (int c = 0; c < comps; ++c) {
          double u = slab(m, c, i);
          if (affine_removal) u = u - 2.0 * slab_interpolate(slab, c, mid, 0.5 * t, dt) + at_x0[c];
          sum += w * u * u;
        }
        volume += w;
      });
    }
    fit.averages.push_back(std::sqrt(sum / volume));
  }
  fit_slope(fit);
  return fit;
}

const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::regular:
      return "regular";
    case PointClass::singular_candidate:
      return "singular_candidate";
    case PointClass::undetermined:
      break;
  }
  return "undetermined";
}

PointClass classify_point(const VanishingOrderFit& fit, double density, double margin,
                          double density_threshold) {
  if (fit.slope < 2.0 - margin) return PointClass::regular;
  if (density < density_threshold) return PointClass::singular_candidate;
  return PointClass::undetermined;
}

DensityEstimate contact_density(const Mask& mask, const GridSpec& grid, std::array<double, 2> x0,
                                std::span<const double> radii) {
  if (mask.size() != grid.node_count()) throw DomainError("mask does not cover the grid");
  DensityEstimate est;
  for (double r : radii) {
    if (r < 2.0 * grid.spacing() * (1.0 - 1e-12)) {
      std::ostringstream msg;
      msg << "radius " << r << " below 2h dropped";
      est.warnings.push_back(msg.str());
      continue;
    }
    std::size_t inside = 0, hits = 0;
    for_each_near(grid, x0, r + grid.spacing(), [&](std::size_t i, std::array<double, 2> d) {
      if (std::hypot(d[0], d[1]) > r * (1.0 + 1e-12)) return;
      ++inside;
      hits += mask[i] ? 1 : 0;
    });
    est.radii.push_back(r);
    est.densities.push_back(inside ? static_cast<double>(hits) / static_cast<double>(inside) : 0.0);
  }
  return est;
}

std::array<double, 2> contact_direction(const Mask& mask, const GridSpec& grid,
                                        std::array<double, 2> x0, double radius) {
  std::array<double, 2> sum{};
  for_each_near(grid, x0, radius + grid.spacing(), [&](std::size_t i, std::array<double, 2> d) {
    if (!mask[i] || std::hypot(d[0], d[1]) > radius) return;
    sum[0] += d[0];
    sum[1] += d[1];
  });
  const double norm = std::hypot(sum[0], sum[1]);
  if (norm == 0.0) return {1.0, 0.0};
  return {sum[0] / norm, sum[1] / norm};
}

double p32_correlation(const DisplacementSlab& slab, const P32Profile& profile,
                       std::array<double, 2> x0, double r_min, double r_max) {
  const GridSpec& grid = slab.grid();
  const int d = grid.boundary_dim();
  const double dt = uniform_spacing(slab.heights());
  std::vector<double> at_x0(slab.components());
  for (int c = 0; c < slab.components(); ++c) at_x0[c] = interpolate(grid, slab.level_component(0, c), x0);
  double dot = 0.0, uu = 0.0, pp = 0.0;
  for (std::size_t m = 0; m < slab.level_count(); ++m) {
    const double t = slab.heights()[m];
    if (t > r_max) break;
    for_each_near(grid, x0, r_max + grid.spacing(), [&](std::size_t i, std::array<double, 2> off) {
      const double rho = std::sqrt(off[0] * off[0] + off[1] * off[1] + t * t);
      if (rho < r_min || rho > r_max) return;
      const double s = profile.direction[0] * off[0] + profile.direction[1] * off[1];
      const auto pv = p32_cartesian(profile, s, t);
      const std::array<double, 2> mid{x0[0] + 0.5 * off[0], x0[1] + 0.5 * off[1]};
      for (int c = 0; c <= d; ++c) {
        const double u = slab(m, c, i) - 2.0 * slab_interpolate(slab, c, mid, 0.5 * t, dt) + at_x0[c];
        const double q = (c == d) ? pv[1] : pv[0] * profile.direction[c];
        dot += u * q;
        uu += u * u;
        pp += q * q;
      }
    });
  }
  return (uu > 0.0 && pp > 0.0) ? dot / std::sqrt(uu * pp) : 0.0;
}

double p32_trace_correlation(const RealField& trace, const P32Profile& profile,
                             std::array<double, 2> x0, double r_min, double r_max) {
  const GridSpec& grid = trace.grid();
  const auto values = trace.component(0);
  const double at_x0 = interpolate(grid, values, x0);
  double dot = 0.0, uu = 0.0, pp = 0.0;
  for_each_near(grid, x0, r_max + grid.spacing(), [&](std::size_t i, std::array<double, 2> off) {
    const double rho = std::hypot(off[0], off[1]);
    if (rho < r_min || rho > r_max) return;
    const double s = profile.direction[0] * off[0] + profile.direction[1] * off[1];
    const double q = p32_cartesian(profile, s, 0.0)[1];
    const std::array<double, 2> mid{x0[0] + 0.5 * off[0], x0[1] + 0.5 * off[1]};
    const double u = values[i] - 2.0 * interpolate(grid, values, mid) + at_x0;
    dot += u * q;
    uu += u * u;
    pp += q * q;
  });
  return (uu > 0.0 && pp > 0.0) ? dot / std::sqrt(uu * pp) : 0.0;
}

std::vector<double> default_radii(const GridSpec& grid, const RegularityOptions& opts) {
  if (opts.radius_count < 2) throw DomainError("need at least two radii");
  std::vector<double> radii;
  const double lo = opts.min_radius_cells * grid.spacing();
  const double ratio = opts.max_radius_cells / opts.min_radius_cells;
  for (int k = 0; k < opts.radius_count; ++k) {
    radii.push_back(lo * std::pow(ratio, static_cast<double>(k) / (opts.radius_count - 1)));
  }
  return radii;
}

FreeBoundaryReport regularity_report(const LameParams& params, const SignoriniSolution& sol,
                                     const RealField& phi, const RegularityOptions& opts) {
  const GridSpec& grid = sol.trace_un.grid();
  const ObstacleSolution& scalar = sol.scalar_solution;
  const std::vector<double> radii = default_radii(grid, opts);
  const double r_min = radii.front();
  const double r_max = radii.back();
  FreeBoundaryReport report;

  // Vector residual u - w - E(phi), when the slab is deep and uniform enough.
  std::optional<DisplacementSlab> residual;
  const auto& heights = sol.displacement.heights();
  bool uniform = heights.size() >= 2;
  if (uniform) {
    try {
      uniform_spacing(heights);
    } catch (const DomainError&) {
      uniform = false;
    }
  }
  if (uniform && heights.back() >= r_max + 0.5 * grid.spacing()) {
    residual = sol.displacement;
    if (sol.auxiliary) *residual -= sol.auxiliary->slab;
    DisplacementSlab obstacle = lame_extend(params, phi, heights);
    double mean = 0.0;
    for (double x : phi.component(0)) mean += x;
    mean /= static_cast<double>(grid.node_count());
    for (std::size_t m = 0; m < heights.size(); ++m) {
      for (double& x : obstacle.level_component(m, grid.boundary_dim())) x += mean;
    }
    *residual -= obstacle;
  } else {
    report.warnings.push_back("displacement slab too shallow or non-uniform; vectorial fits skipped");
  }
  const Mask vector_mask = vectorial_contact_set(sol, phi, scalar.active_tol);

  for (const auto& pt : scalar.free_boundary) {
    bool inside = true;
    for_each_near(grid, pt.position, r_max + grid.spacing(), [&](std::size_t i, std::array<double, 2> d) {
      if (std::hypot(d[0], d[1]) <= r_max + grid.spacing() && !scalar.window[i]) inside = false;
    });
    if (!inside) {
      std::ostringstream msg;
      msg << "free-boundary point (" << pt.position[0] << ", " << pt.position[1]
          << ") skipped: largest ball leaves the window";
      report.warnings.push_back(msg.str());
      continue;
    }
    FreeBoundaryEntry e;
    e.point = pt;
    const auto x0 = refine_crossing(scalar.gap, pt);
    e.scalar_fit = vanishing_order(scalar.gap, x0, radii, opts.affine_removal);
    const auto density = contact_density(scalar.active_set, grid, x0, radii);
    e.density = density.densities.empty() ? 0.0 : density.densities.front();
    e.scalar_label = classify_point(e.scalar_fit, e.density, opts.margin, opts.density_threshold);
    const P32Profile profile(params, contact_direction(scalar.active_set, grid, x0, r_max));
    e.scalar_correlation = p32_trace_correlation(scalar.gap, profile, x0, r_min, r_max);
    if (residual) {
      e.vector_fit = vanishing_order(*residual, x0, radii, opts.affine_removal);
      const auto vdensity = contact_density(vector_mask, grid, x0, radii);
      const double vd = vdensity.densities.empty() ? 0.0 : vdensity.densities.front();
      e.vector_label = classify_point(*e.vector_fit, vd, opts.margin, opts.density_threshold);
      e.vector_correlation = p32_correlation(*residual, profile, x0, r_min, r_max);
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace signorini
