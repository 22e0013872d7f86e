#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "signorini/obstacle.hpp"
#include "signorini/params_grid.hpp"

namespace signorini {

struct SignoriniSolution;

/// The 3/2-homogeneous Lame solution in the half-plane spanned by e and e_n,
/// polar angle theta measured from +e. With sign = -1 (default) the normal
/// component vanishes on theta = 0 and is positive on theta = pi.
struct P32Profile {
  LameParams params;
  std::array<double, 2> direction{1.0, 0.0};
  double sign = -1.0;

  explicit P32Profile(LameParams p, std::array<double, 2> e = {1.0, 0.0}, double s = -1.0);

  double a() const;   // (3mu+lambda+(mu+lambda)/2)/(6mu)
  double c3() const;  // (3mu+lambda-(mu+lambda)/2)/(6mu)
  double b() const;   // (mu+lambda)/(4mu)
};

struct PolarPoint {
  double r = 0;
  double theta = 0;
};

/// (p.e, p.e_n) at each point. Throws DomainError for r < 0 or theta outside [0, pi].
std::vector<std::array<double, 2>> p32_eval(const P32Profile& profile, std::span<const PolarPoint> points);
std::array<double, 2> p32_eval(const P32Profile& profile, PolarPoint point);
/// Same profile at Cartesian (s, t), s along e, t >= 0.
std::array<double, 2> p32_cartesian(const P32Profile& profile, double s, double t);

struct P32Validation {
  double pde_residual = 0;         // max finite-difference Lame residual on the annulus
  double tangential_traction = 0;  // max |d_n(p.e) + d_e(p.e_n)| on both rays
  double sigma_free_ray = 0;       // max |sigma_n| on the ray where p.e_n != 0
  double sigma_contact_min = 0;    // extrema of sigma_n on the contact ray
  double sigma_contact_max = 0;
  bool contact_single_signed = false;
  /// sigma_n = 2 mu d_n(p.e_n) + lambda div p.
  double sigma_at_unit_contact = 0;
};

/// Finite differences with spacing h on 0.5 <= r <= 1 (interior points keep
/// the stencil in t > 0), and on both rays with one-sided t-differences.
P32Validation p32_validate(const P32Profile& profile, double h);

struct VanishingOrderFit {
  std::array<double, 2> point{};
  std::vector<double> radii;
  std::vector<double> averages;  // r^{-d/2} L2 norm (RMS over ball nodes)
  double slope = 0;
  double confidence = 0;  // RMS residual of the log-log fit
  bool affine_removed = false;
};

/// Vanishing order of a scalar trace at x0. With affine_removal the dyadic
/// second difference U(y) - 2U((x0+y)/2) + U(x0) replaces U, which annihilates
/// affine functions. Throws DomainError for fewer than 4 radii, a span below
/// 8, a radius below 2h or above L/2.
VanishingOrderFit vanishing_order(const RealField& trace, std::array<double, 2> x0,
                                  std::span<const double> radii, bool affine_removal = true);

/// Same on half-balls of a vector slab whose heights are uniform from t = 0.
VanishingOrderFit vanishing_order(const DisplacementSlab& slab, std::array<double, 2> x0,
                                  std::span<const double> radii, bool affine_removal = true);

enum class PointClass { regular, singular_candidate, undetermined };
const char* to_string(PointClass c);

PointClass classify_point(const VanishingOrderFit& fit, double density, double margin = 0.15,
                          double density_threshold = 0.1);

struct DensityEstimate {
  std::vector<double> radii;
  std::vector<double> densities;
  std::vector<std::string> warnings;
};

/// Fraction of masked nodes in the discrete ball of each radius around x0.
/// Radii below 2h are dropped with a warning.
DensityEstimate contact_density(const Mask& mask, const GridSpec& grid, std::array<double, 2> x0,
                                std::span<const double> radii);

/// Unit tangential direction from x0 toward the centroid of masked nodes within radius.
std::array<double, 2> contact_direction(const Mask& mask, const GridSpec& grid,
                                        std::array<double, 2> x0, double radius);

/// Normalized inner product of the second-difference field of U with the
/// oriented profile over the half-annulus r_min <= rho <= r_max.
double p32_correlation(const DisplacementSlab& slab, const P32Profile& profile,
                       std::array<double, 2> x0, double r_min, double r_max);
/// Trace version: correlates against the normal component of the profile.
double p32_trace_correlation(const RealField& trace, const P32Profile& profile,
                             std::array<double, 2> x0, double r_min, double r_max);

struct RegularityOptions {
  double margin = 0.15;
  double density_threshold = 0.1;
  double min_radius_cells = 3.0;
  double max_radius_cells = 24.0;
  int radius_count = 7;
  bool affine_removal = true;
};

/// Geometric radii from min_radius_cells h to max_radius_cells h.
std::vector<double> default_radii(const GridSpec& grid, const RegularityOptions& opts);

struct FreeBoundaryEntry {
  FreeBoundaryPoint point;
  VanishingOrderFit scalar_fit;
  double density = 0;
  PointClass scalar_label = PointClass::undetermined;
  double scalar_correlation = 0;
  std::optional<VanishingOrderFit> vector_fit;
  std::optional<PointClass> vector_label;
  double vector_correlation = 0;
};

struct FreeBoundaryReport {
  std::vector<FreeBoundaryEntry> entries;
  std::vector<std::string> warnings;
};

/// Per free-boundary point: scalar fit on v - psi with the scalar active set,
/// and, when the displacement slab has uniform heights reaching the largest
/// radius, a vectorial fit on u - w - E(phi) with the vectorial contact set.
/// Points whose largest ball leaves the window are skipped with a warning.
FreeBoundaryReport regularity_report(const LameParams& params, const SignoriniSolution& sol,
                                     const RealField& phi, const RegularityOptions& opts = {});

}  // namespace signorini
