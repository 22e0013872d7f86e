#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "signorini/params_grid.hpp"

namespace signorini {

enum class ObstacleMethod { projected_gradient, accelerated_projected_gradient };

struct ObstacleOptions {
  int max_iter = 50000;
  double tol = 1e-9;
  ObstacleMethod method = ObstacleMethod::accelerated_projected_gradient;
  bool record_log = true;
};

/// Scalar obstacle problem  min{c (-Lap)^{1/2} v - rhs, v - psi} = 0  on the
/// window, v = 0 on the collar. Nodes in neither set are unconstrained.
struct ObstacleProblem {
  RealField psi;
  RealField rhs;
  Mask window;
  Mask collar;
  double operator_constant = 1.0;

  /// Throws DomainError on overlapping masks, an empty collar, size mismatch
  /// or psi > 0 on the collar (infeasible).
  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double energy = 0;
  double residual = 0;
};

/// Crossing of the contact mask between two neighbouring window nodes.
struct FreeBoundaryPoint {
  std::array<double, 2> position{};
  std::size_t contact_node = 0;
  std::size_t free_node = 0;
  int axis = 0;
};

struct ObstacleSolution {
  RealField v;
  RealField gap;  // v - psi
  Mask window;
  Mask active_set;
  double active_tol = 0;
  std::vector<FreeBoundaryPoint> free_boundary;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<IterationRecord> log;
};

/// Discrete energy (c/2) <v, (-Lap)^{1/2} v> - <rhs, v>, grid-weighted by h^d.
double obstacle_energy(const ObstacleProblem& problem, const RealField& v);

/// max over window of |min(c (-Lap)^{1/2} v - rhs, v - psi)|; unconstrained
/// nodes contribute |c (-Lap)^{1/2} v - rhs|.
double complementarity_residual(const ObstacleProblem& problem, const RealField& v);

ObstacleSolution obstacle_solve(const ObstacleProblem& problem, const ObstacleOptions& opts = {});

/// Edges of the active mask inside the window, refined by linear
/// interpolation of v - psi against the activity threshold.
std::vector<FreeBoundaryPoint> extract_free_boundary(const ObstacleSolution& sol);

/// Contact mask  window and (gap <= tol).
Mask threshold_mask(const RealField& gap, const Mask& window, double tol);

}  // namespace signorini
