#pragma once

#include <span>
#include <string>
#include <vector>

#include "signorini/lame_halfspace.hpp"
#include "signorini/params_grid.hpp"
#include "signorini/spectral.hpp"

namespace signorini {

/// Solution w of the mixed problem
///   mu Lap w + (mu+lambda) grad div w = f,  d_n w^j + d_j w^n = g^j,  w^n = 0  at t = 0.
struct AuxiliarySolution {
  DisplacementSlab slab;
  RealField trace_normal_derivative;  // d_n w^n at t = 0
  RealField trace_divergence;         // div w at t = 0
  RealField htilde_contribution;      // 2 mu d_n w^n + lambda div w at t = 0
  std::vector<double> discarded_means;
  std::vector<std::string> log;
};

/// Whole-space inverse symbol F(xi) with a(xi) F(xi) = I,
/// a(xi) = mu |xi|^2 I + (mu+lambda) xi (x) xi.
SmallMatrix bulk_inverse_symbol(const LameParams& params, std::span<const double> xi_full);

/// Tangential Neumann data g (d components), zero bulk force. The slab is
/// evaluated at `heights`; traces are analytic.
AuxiliarySolution solve_boundary_part(const LameParams& params, const RealField& g,
                                      std::span<const double> heights,
                                      ZeroModePolicy policy = ZeroModePolicy::project_out_mean);

/// Bulk force f (n components) sampled at uniform levels t_m = m dt,
/// m = 0..M-1; solved on the doubled periodic box of height 2T, T = M dt,
/// with w^j even and w^n odd in t. Traces are spectral in t.
AuxiliarySolution solve_bulk_part(const LameParams& params, const DisplacementSlab& f);

/// Sum of the boundary and bulk parts on the heights of f.
AuxiliarySolution solve_auxiliary(const LameParams& params, const DisplacementSlab& f,
                                  const RealField& g,
                                  ZeroModePolicy policy = ZeroModePolicy::project_out_mean);

/// Returns dt if heights are m dt for m = 0..M-1, else throws DomainError.
double uniform_spacing(std::span<const double> heights);

}  // namespace signorini
