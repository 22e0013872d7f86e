#include "signorini/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "signorini/errors.hpp"
#include "signorini/spectral.hpp"

namespace signorini {

namespace {

// Minimal-image offset of a node from the cutoff center.
std::array<double, 2> offset(const GridSpec& grid, std::size_t node, const std::array<double, 2>& c) {
  const auto x = grid.node_position(node);
  std::array<double, 2> y{};
  const double period = grid.period();
  for (int a = 0; a < grid.boundary_dim(); ++a) {
    double dx = x[a] - c[a];
    dx -= period * std::round(dx / period);
    y[a] = dx;
  }
  return y;
}

double radius(const GridSpec& grid, std::size_t node, const std::array<double, 2>& c) {
  const auto y = offset(grid, node, c);
  return std::hypot(y[0], y[1]);
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Lame extension of trace plus its mean as a rigid normal translation, so the
// normal component at t = 0 reproduces trace exactly.
DisplacementSlab extend_with_mean(const LameParams& params, const RealField& trace,
                                  const std::vector<double>& heights) {
  DisplacementSlab slab = lame_extend(params, trace, heights);
  const double mean = mean_of(trace.component(0));
  const int normal = trace.grid().boundary_dim();
  for (std::size_t m = 0; m < heights.size(); ++m) {
    for (double& x : slab.level_component(m, normal)) x += mean;
  }
  return slab;
}

RealField normalized_wbar(const LameParams& params, const RealField& htilde) {
  RealField wbar = frac_laplacian_inverse(htilde, 0.5, ZeroModePolicy::project_out_mean);
  for (double& x : wbar.samples()) x /= params.dtn_constant();
  return wbar;
}

}  // namespace

void Cutoff::validate(double period) const {
  if (!(inner_radius > 0.0)) throw DomainError("cutoff inner radius must be positive");
  if (!(inner_radius < outer_radius)) {
    throw DomainError("cutoff needs r < R (got r = " + std::to_string(inner_radius) +
                      ", R = " + std::to_string(outer_radius) + ")");
  }
  if (outer_radius > 0.5 * period) throw DomainError("cutoff outer radius exceeds L/2");
}

double Cutoff::value(double rho) const {
  if (rho <= inner_radius) return 1.0;
  if (rho >= outer_radius) return 0.0;
  const double s = (rho - inner_radius) / (outer_radius - inner_radius);
  return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double Cutoff::derivative(double rho) const {
  if (rho <= inner_radius || rho >= outer_radius) return 0.0;
  const double w = outer_radius - inner_radius;
  const double s = (rho - inner_radius) / w;
  return -30.0 * s * s * (s - 1.0) * (s - 1.0) / w;
}

double Cutoff::second_derivative(double rho) const {
  if (rho <= inner_radius || rho >= outer_radius) return 0.0;
  const double w = outer_radius - inner_radius;
  const double s = (rho - inner_radius) / w;
  return -60.0 * s * (s - 1.0) * (2.0 * s - 1.0) / (w * w);
}

RealField make_cutoff(const GridSpec& grid, const Cutoff& cutoff) {
  cutoff.validate(grid.period());
  RealField eta(grid);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    eta(0, i) = cutoff.value(radius(grid, i, cutoff.center));
  }
  return eta;
}

Mask cutoff_window(const GridSpec& grid, const Cutoff& cutoff) {
  Mask m(grid.node_count(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = radius(grid, i, cutoff.center) < cutoff.outer_radius;
  return m;
}

Mask cutoff_collar(const GridSpec& grid, const Cutoff& cutoff) {
  Mask m = cutoff_window(grid, cutoff);
  for (auto& x : m) x = !x;
  return m;
}

void SignoriniProblem::validate() const {
  cutoff.validate(grid.period());
  if (phi.components() != 1 || !(phi.grid().period() == grid.period()) ||
      phi.grid().points_per_dim() != grid.points_per_dim() ||
      phi.grid().boundary_dim() != grid.boundary_dim()) {
    throw DomainError("obstacle must be a scalar field on the problem grid");
  }
  const Mask collar = cutoff_collar(grid, cutoff);
  for (std::size_t i = 0; i < collar.size(); ++i) {
    if (collar[i] && phi(0, i) > 0.0) {
      throw DomainError("obstacle is positive outside the cutoff window (value " +
                        std::to_string(phi(0, i)) + ")");
    }
  }
  if (force) {
    if (force->components() != grid.space_dim()) throw DomainError("force needs n components");
    if (force->grid().points_per_dim() != grid.points_per_dim() ||
        force->grid().period() != grid.period()) {
      throw DomainError("force grid differs from the problem grid");
    }
    uniform_spacing(force->heights());
  }
}

SignoriniSolution signorini_solve(const SignoriniProblem& problem, const SignoriniOptions& opts) {
  problem.validate();
  const GridSpec& grid = problem.grid;
  const LameParams& params = problem.params;

  std::optional<AuxiliarySolution> aux;
  RealField htilde(grid);
  std::vector<double> heights = opts.heights;
  if (problem.force) {
    aux = solve_auxiliary(params, *problem.force, RealField(grid, grid.boundary_dim()));
    htilde = aux->htilde_contribution;
    heights = problem.force->heights();
  }

  const double discarded = mean_of(htilde.component(0));
  RealField wbar = normalized_wbar(params, htilde);
  RealField psi(grid);
  for (std::size_t i = 0; i < grid.node_count(); ++i) psi(0, i) = problem.phi(0, i) - wbar(0, i);

  ObstacleProblem scalar{psi, RealField(grid), cutoff_window(grid, problem.cutoff),
                         cutoff_collar(grid, problem.cutoff), params.dtn_constant()};
  ObstacleSolution scalar_sol = obstacle_solve(scalar, opts.obstacle);

  RealField trace(grid);
  for (std::size_t i = 0; i < grid.node_count(); ++i) trace(0, i) = scalar_sol.v(0, i) + wbar(0, i);

  DisplacementSlab displacement = extend_with_mean(params, trace, heights);
  if (aux) displacement += aux->slab;

  SignoriniSolution sol{trace,
                        std::move(displacement),
                        scalar_sol.active_set,
                        scalar_sol.free_boundary,
                        std::move(scalar_sol),
                        std::move(htilde),
                        std::move(psi),
                        std::move(wbar),
                        discarded,
                        std::move(aux),
                        {}};
  if (sol.auxiliary) sol.log = sol.auxiliary->log;
  if (discarded != 0.0) {
    std::ostringstream msg;
    msg << "htilde mean " << discarded << " projected out before the half-Laplacian inverse";
    sol.log.push_back(msg.str());
  }
  if (!sol.scalar_solution.converged) {
    std::ostringstream msg;
    msg << "obstacle solver stopped after " << sol.scalar_solution.iterations
        << " iterations with residual " << sol.scalar_solution.residual;
    sol.log.push_back(msg.str());
  }
  return sol;
}

SignoriniSolution forward_embed(const LameParams& params, const ObstacleSolution& scalar_sol,
                                const std::vector<double>& heights) {
  const GridSpec& grid = scalar_sol.v.grid();
  RealField psi(grid);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    psi(0, i) = scalar_sol.v(0, i) - scalar_sol.gap(0, i);
  }
  return SignoriniSolution{scalar_sol.v,
                           extend_with_mean(params, scalar_sol.v, heights),
                           scalar_sol.active_set,
                           scalar_sol.free_boundary,
                           scalar_sol,
                           RealField(grid),
                           std::move(psi),
                           RealField(grid),
                           0.0,
                           std::nullopt,
                           {}};
}

RealField solution_traction(const LameParams& params, const SignoriniSolution& sol) {
  RealField traction = extension_traction(params, sol.trace_un);
  if (sol.auxiliary) {
    for (std::size_t i = 0; i < traction.node_count(); ++i) {
      traction(0, i) -= sol.auxiliary->htilde_contribution(0, i);
    }
  }
  return traction;
}

Mask vectorial_contact_set(const SignoriniSolution& sol, const RealField& phi, double tol) {
  RealField gap(sol.trace_un.grid());
  for (std::size_t i = 0; i < gap.node_count(); ++i) gap(0, i) = sol.trace_un(0, i) - phi(0, i);
  return threshold_mask(gap, sol.scalar_solution.window, tol);
}

LocalizationReport localize_solution(const LameParams& params, const RealField& trace_un,
                                     const RealField& phi, const Cutoff& eta,
                                     const std::vector<double>& levels, double contact_tol) {
  const GridSpec& grid = trace_un.grid();
  eta.validate(grid.period());
  uniform_spacing(levels);
  const int d = grid.boundary_dim();
  const int n = d + 1;
  const std::size_t nodes = grid.node_count();
  const double mu = params.mu();
  const double lam = params.lambda();

  const DisplacementSlab u = extend_with_mean(params, trace_un, levels);
  const DisplacementSlab u_t = lame_extend_dt(params, trace_un, levels);

  // grad[level][k][a]: d_a u^k as a field over nodes; a = d is the normal axis.
  auto gradient = [&](std::size_t m, int k, int a) {
    std::vector<double> out(nodes);
    if (a == d) {
      auto src = u_t.level_component(m, k);
      std::copy(src.begin(), src.end(), out.begin());
      return out;
    }
    RealField comp(grid, 1,
                   std::vector<double>(u.level_component(m, k).begin(), u.level_component(m, k).end()));
    const RealField deriv = to_real(tangential_derivative(to_spectral(comp), a));
    std::copy(deriv.samples().begin(), deriv.samples().end(), out.begin());
    return out;
  };

  DisplacementSlab f(grid, levels, n);
  for (std::size_t m = 0; m < levels.size(); ++m) {
    std::vector<std::vector<std::vector<double>>> grad(n, std::vector<std::vector<double>>(n));
    for (int k = 0; k < n; ++k) {
      for (int a = 0; a < n; ++a) grad[k][a] = gradient(m, k, a);
    }
    for (std::size_t i = 0; i < nodes; ++i) {
      const auto y2 = offset(grid, i, eta.center);
      std::array<double, 3> y{y2[0], y2[1], 0.0};
      y[d] = levels[m];
      double rho = 0.0;
      for (int a = 0; a < n; ++a) rho += y[a] * y[a];
      rho = std::sqrt(rho);
      if (rho <= eta.inner_radius || rho >= eta.outer_radius) continue;
      const double e1 = eta.derivative(rho);
      const double e2 = eta.second_derivative(rho);
      std::array<double, 3> deta{};
      std::array<std::array<double, 3>, 3> hess{};
      for (int a = 0; a < n; ++a) deta[a] = e1 * y[a] / rho;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          const double yy = y[a] * y[b] / (rho * rho);
          hess[a][b] = e2 * yy + e1 * ((a == b ? 1.0 : 0.0) - yy) / rho;
        }
      }
      const double lap_eta = e2 + (n - 1) * e1 / rho;
      double div_u = 0.0;
      for (int k = 0; k < n; ++k) div_u += grad[k][k][i];
      for (int j = 0; j < n; ++j) {
        double grad_dot = 0.0;
        for (int a = 0; a < n; ++a) grad_dot += deta[a] * grad[j][a][i];
        double coupled = deta[j] * div_u;
        for (int k = 0; k < n; ++k) {
          coupled += grad[k][j][i] * deta[k] + u(m, k, i) * hess[j][k];
        }
        f(m, j, i) = mu * (2.0 * grad_dot + u(m, j, i) * lap_eta) + (mu + lam) * coupled;
      }
    }
  }

  LocalizationReport rep{make_cutoff(grid, eta), RealField(grid, d), RealField(grid), RealField(grid),
                         RealField(grid), RealField(grid), RealField(grid), RealField(grid),
                         RealField(grid), 0.0, false,
                         AuxiliarySolution{DisplacementSlab(grid, levels, n), RealField(grid),
                                           RealField(grid), RealField(grid), {}, {}}};

  for (std::size_t i = 0; i < nodes; ++i) {
    const auto y = offset(grid, i, eta.center);
    const double rho = std::hypot(y[0], y[1]);
    if (rho <= eta.inner_radius || rho >= eta.outer_radius) continue;
    const double e1 = eta.derivative(rho);
    double h = 0.0;
    for (int j = 0; j < d; ++j) {
      const double dj = e1 * y[j] / rho;
      rep.g(j, i) = trace_un(0, i) * dj;
      h -= lam * u(0, j, i) * dj;
    }
    rep.h(0, i) = h;
  }

  rep.auxiliary = solve_auxiliary(params, f, rep.g);
  for (std::size_t i = 0; i < nodes; ++i) {
    rep.htilde(0, i) = rep.h(0, i) + rep.auxiliary.htilde_contribution(0, i);
  }
  rep.wbar = normalized_wbar(params, rep.htilde);
  for (std::size_t i = 0; i < nodes; ++i) {
    rep.vtilde(0, i) = trace_un(0, i) * rep.eta(0, i) - rep.wbar(0, i);
    rep.psi(0, i) = phi(0, i) * rep.eta(0, i) - rep.wbar(0, i);
  }

  rep.operator_value = dtn_apply(params, rep.vtilde);
  const RealField traction = extension_traction(params, trace_un);
  double scale = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    rep.expected(0, i) = rep.eta(0, i) * traction(0, i);
    scale = std::max(scale, std::abs(traction(0, i)));
  }
  const double shift = mean_of(rep.expected.component(0));
  double mismatch = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    rep.expected(0, i) -= shift;
    mismatch = std::max(mismatch, std::abs(rep.operator_value(0, i) - rep.expected(0, i)));
  }
  rep.operator_mismatch = scale > 0.0 ? mismatch / scale : mismatch;

  rep.contact_sets_match = true;
  for (std::size_t i = 0; i < nodes; ++i) {
    if (rep.eta(0, i) <= 0.0) continue;
    const bool local = rep.vtilde(0, i) - rep.psi(0, i) <= contact_tol * rep.eta(0, i);
    const bool global = trace_un(0, i) - phi(0, i) <= contact_tol;
    if (local != global) rep.contact_sets_match = false;
  }
  return rep;
}

}  // namespace signorini
