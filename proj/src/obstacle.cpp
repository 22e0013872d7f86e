#include "signorini/obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "signorini/errors.hpp"
#include "signorini/spectral.hpp"

namespace signorini {

namespace {

void apply_operator(const ObstacleProblem& p, const RealField& v, RealField& out) {
  SpectralField hat = frac_laplacian_apply(to_spectral(v), 0.5);
  for (auto& z : hat.coefficients()) z *= p.operator_constant;
  out = to_real(hat);
}

void project(const ObstacleProblem& p, RealField& v) {
  for (std::size_t i = 0; i < v.node_count(); ++i) {
    if (p.collar[i]) {
      v(0, i) = 0.0;
    } else if (p.window[i]) {
      v(0, i) = std::max(v(0, i), p.psi(0, i));
    }
  }
}

double energy_from(const ObstacleProblem& p, const RealField& v, const RealField& av) {
  const double weight = std::pow(p.psi.grid().spacing(), p.psi.grid().boundary_dim());
  double e = 0.0;
  for (std::size_t i = 0; i < v.node_count(); ++i) {
    e += 0.5 * v(0, i) * av(0, i) - p.rhs(0, i) * v(0, i);
  }
  return weight * e;
}

double residual_from(const ObstacleProblem& p, const RealField& v, const RealField& av) {
  double r = 0.0;
  for (std::size_t i = 0; i < v.node_count(); ++i) {
    if (p.collar[i]) continue;
    const double grad = av(0, i) - p.rhs(0, i);
    const double value = p.window[i] ? std::min(grad, v(0, i) - p.psi(0, i)) : grad;
    r = std::max(r, std::abs(value));
  }
  return r;
}

}  // namespace

void ObstacleProblem::validate() const {
  const std::size_t nodes = psi.node_count();
  if (psi.components() != 1 || rhs.components() != 1) {
    throw DomainError("obstacle and rhs must be scalar fields");
  }
  if (!(psi.grid() == rhs.grid())) throw DomainError("obstacle and rhs grids differ");
  if (window.size() != nodes || collar.size() != nodes) {
    throw DomainError("window and collar masks must cover the grid");
  }
  if (!(operator_constant > 0.0)) throw DomainError("operator constant must be positive");
  bool any_collar = false;
  for (std::size_t i = 0; i < nodes; ++i) {
    if (window[i] && collar[i]) throw DomainError("window and collar overlap");
    any_collar = any_collar || collar[i];
  }
  if (!any_collar) throw DomainError("collar must be nonempty");
  for (std::size_t i = 0; i < nodes; ++i) {
    if (collar[i] && psi(0, i) > 0.0) {
      throw DomainError("infeasible obstacle: psi > 0 on the pinned collar (value " +
                        std::to_string(psi(0, i)) + ")");
    }
  }
}

double obstacle_energy(const ObstacleProblem& problem, const RealField& v) {
  RealField av(v.grid());
  apply_operator(problem, v, av);
  return energy_from(problem, v, av);
}

double complementarity_residual(const ObstacleProblem& problem, const RealField& v) {
  RealField av(v.grid());
  apply_operator(problem, v, av);
  return residual_from(problem, v, av);
}

Mask threshold_mask(const RealField& gap, const Mask& window, double tol) {
  Mask mask(gap.node_count(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = window[i] && gap(0, i) <= tol;
  return mask;
}

ObstacleSolution obstacle_solve(const ObstacleProblem& problem, const ObstacleOptions& opts) {
  problem.validate();
  const GridSpec& grid = problem.psi.grid();
  const double lipschitz = problem.operator_constant * FrequencyLattice(grid).max_magnitude();
  const double step = 1.0 / lipschitz;
  const bool accelerated = opts.method == ObstacleMethod::accelerated_projected_gradient;

  RealField v(grid);
  project(problem, v);
  RealField av(grid);
  apply_operator(problem, v, av);
  double energy = energy_from(problem, v, av);
  double residual = residual_from(problem, v, av);

  ObstacleSolution sol{v, RealField(grid), problem.window, {}, 10.0 * opts.tol, {}, residual,
                       0, false, {}};
  if (opts.record_log) sol.log.push_back({0, energy, residual});

  RealField y = v;       // extrapolated point
  RealField ay = av;
  RealField next(grid), anext(grid);
  double momentum = 1.0;
  int iter = 0;
  while (residual > opts.tol && iter < opts.max_iter) {
    ++iter;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
      next(0, i) = y(0, i) - step * (ay(0, i) - problem.rhs(0, i));
    }
    project(problem, next);
    apply_operator(problem, next, anext);
    double next_energy = energy_from(problem, next, anext);

    if (accelerated && next_energy > energy) {
      // Restart: drop momentum and take a plain projected step from v.
      momentum = 1.0;
      for (std::size_t i = 0; i < grid.node_count(); ++i) {
        next(0, i) = v(0, i) - step * (av(0, i) - problem.rhs(0, i));
      }
      project(problem, next);
      apply_operator(problem, next, anext);
      next_energy = energy_from(problem, next, anext);
    }

    if (accelerated) {
      const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      const double beta = (momentum - 1.0) / next_momentum;
      momentum = next_momentum;
      for (std::size_t i = 0; i < grid.node_count(); ++i) {
        y(0, i) = next(0, i) + beta * (next(0, i) - v(0, i));
        ay(0, i) = anext(0, i) + beta * (anext(0, i) - av(0, i));
      }
    }

    std::swap(v, next);
    std::swap(av, anext);
    if (!accelerated) {
      y = v;
      ay = av;
    }
    energy = next_energy;
    residual = residual_from(problem, v, av);
    if (opts.record_log) sol.log.push_back({iter, energy, residual});
  }

  sol.v = v;
  sol.residual = residual;
  sol.iterations = iter;
  sol.converged = residual <= opts.tol;
  for (std::size_t i = 0; i < grid.node_count(); ++i) sol.gap(0, i) = v(0, i) - problem.psi(0, i);
  sol.active_set = threshold_mask(sol.gap, problem.window, sol.active_tol);
  sol.free_boundary = extract_free_boundary(sol);
  return sol;
}

std::vector<FreeBoundaryPoint> extract_free_boundary(const ObstacleSolution& sol) {
  const GridSpec& grid = sol.v.grid();
  const int n = grid.points_per_dim();
  const double h = grid.spacing();
  std::vector<FreeBoundaryPoint> points;
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    const auto idx = grid.node_indices(node);
    for (int axis = 0; axis < grid.boundary_dim(); ++axis) {
      auto nidx = idx;
      nidx[axis] += 1;
      if (nidx[axis] >= n) continue;  // no crossing through the periodic seam
      const std::size_t other = grid.node_at(nidx);
      if (!sol.window[node] || !sol.window[other]) continue;
      if (sol.active_set[node] == sol.active_set[other]) continue;
      const bool first_active = sol.active_set[node] != 0;
      const std::size_t contact = first_active ? node : other;
      const std::size_t free = first_active ? other : node;
      const double g_contact = sol.gap(0, contact);
      const double g_free = sol.gap(0, free);
      double frac = 0.5;
      if (g_free != g_contact) {
        frac = std::clamp((sol.active_tol - g_contact) / (g_free - g_contact), 0.0, 1.0);
      }
      FreeBoundaryPoint p;
      p.position = grid.node_position(contact);
      const double direction = first_active ? 1.0 : -1.0;
      p.position[axis] += direction * frac * h;
      p.contact_node = contact;
      p.free_node = free;
      p.axis = axis;
      points.push_back(p);
    }
  }
  return points;
}

}  // namespace signorini
