#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "signorini/auxiliary.hpp"
#include "signorini/lame_halfspace.hpp"
#include "signorini/obstacle.hpp"
#include "signorini/params_grid.hpp"

namespace signorini {

/// Radial C^2 bump: 1 for rho <= r, 0 for rho >= R, quintic smoothstep between.
struct Cutoff {
  std::array<double, 2> center{};
  double inner_radius = 1.0;
  double outer_radius = 2.0;

  void validate(double period) const;
  double value(double rho) const;
  double derivative(double rho) const;
  double second_derivative(double rho) const;
};

/// Cutoff sampled on the tangential grid (t = 0). Throws DomainError unless
/// 0 < r < R <= L/2.
RealField make_cutoff(const GridSpec& grid, const Cutoff& cutoff);

/// Window {rho < R} and collar {rho >= R} of a cutoff.
Mask cutoff_window(const GridSpec& grid, const Cutoff& cutoff);
Mask cutoff_collar(const GridSpec& grid, const Cutoff& cutoff);

struct SignoriniProblem {
  LameParams params;
  GridSpec grid;
  /// Bulk force on uniform levels m dt (n components); empty means F = 0.
  std::optional<DisplacementSlab> force;
  RealField phi;
  Cutoff cutoff;

  void validate() const;
};

struct SignoriniOptions {
  ObstacleOptions obstacle;
  /// Output heights for the displacement slab when there is no force; with a
  /// force the force levels are used.
  std::vector<double> heights{0.0};
};

struct SignoriniSolution {
  RealField trace_un;
  DisplacementSlab displacement;
  Mask contact_set;
  std::vector<FreeBoundaryPoint> free_boundary;
  ObstacleSolution scalar_solution;
  RealField htilde;
  RealField psi_effective;
  RealField wbar;
  double discarded_mean = 0;
  std::optional<AuxiliarySolution> auxiliary;
  std::vector<std::string> log;
};

SignoriniSolution signorini_solve(const SignoriniProblem& problem, const SignoriniOptions& opts = {});

/// Lame extension of a scalar obstacle solution as a vectorial contact solution.
SignoriniSolution forward_embed(const LameParams& params, const ObstacleSolution& scalar_sol,
                                const std::vector<double>& heights);

/// Normal traction -2 mu d_n u^n - lambda div u at t = 0 of a solution.
RealField solution_traction(const LameParams& params, const SignoriniSolution& sol);

/// Contact mask obtained by thresholding trace_un - phi on the window.
Mask vectorial_contact_set(const SignoriniSolution& sol, const RealField& phi, double tol);

/// A posteriori check of the cutoff reduction on a force-free global
/// solution u (the Lame extension of trace_un plus its mean as a rigid normal
/// shift): builds u eta, the data f, g, h, solves the auxiliary problem,
/// and compares c (-Lap)^{1/2} v~ against eta times the traction of u.
struct LocalizationReport {
  RealField eta;
  RealField g;
  RealField h;
  RealField htilde;
  RealField wbar;
  RealField vtilde;
  RealField psi;
  RealField operator_value;  // c (-Lap)^{1/2} v~
  RealField expected;        // eta * traction(u), mean removed
  double operator_mismatch = 0;  // max |operator_value - expected| / max |traction|
  bool contact_sets_match = false;
  AuxiliarySolution auxiliary;
};

LocalizationReport localize_solution(const LameParams& params, const RealField& trace_un,
                                     const RealField& phi, const Cutoff& eta,
                                     const std::vector<double>& levels, double contact_tol);

}  // namespace signorini
