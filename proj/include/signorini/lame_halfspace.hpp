#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "signorini/params_grid.hpp"
#include "signorini/spectral.hpp"

namespace signorini {

/// Dense n x n complex matrix for n <= 3 (tangential indices first, normal last).
class SmallMatrix {
 public:
  explicit SmallMatrix(int n = 0) : n_(n) { entries_.fill(Complex{}); }

  int size() const { return n_; }
  Complex& operator()(int j, int l) { return entries_[j * 3 + l]; }
  Complex operator()(int j, int l) const { return entries_[j * 3 + l]; }

  std::vector<Complex> apply(std::span<const Complex> x) const;
  SmallMatrix operator*(const SmallMatrix& rhs) const;
  /// Solves A x = b by Gaussian elimination with partial pivoting.
  std::vector<Complex> solve(std::span<const Complex> b) const;

 private:
  int n_;
  std::array<Complex, 9> entries_;
};

/// W(xi', t) of the half-space ODE system, 2 pi prefactor included.
using FundamentalMatrix = SmallMatrix;

/// Multipliers of the Lame extension: u^j(xi', t) = tangential[j] phi_hat,
/// u^n(xi', t) = normal phi_hat.
struct KernelEval {
  std::array<double, 2> xi{};
  double t = 0;
  std::array<Complex, 2> tangential{};
  Complex normal{};
};

/// Boundary multipliers of the Lame extension at t = 0.
struct TraceBundle {
  std::array<Complex, 2> tangential_traces{};
  Complex normal_derivative{};
  Complex divergence{};
  Complex dtn{};
};

FundamentalMatrix fundamental_matrix(const LameParams& params, std::span<const double> xi, double t);
/// Analytic d/dt of fundamental_matrix.
FundamentalMatrix fundamental_matrix_dt(const LameParams& params, std::span<const double> xi,
                                        double t);

/// C(xi') such that W(xi', 0) C carries the boundary contact data.
std::vector<Complex> dirichlet_coefficients(const LameParams& params, std::span<const double> xi,
                                            Complex phi_hat);

/// Closed-form extension kernel; the solver path uses this one.
KernelEval extension_kernel(const LameParams& params, std::span<const double> xi, double t);
/// Analytic d/dt of extension_kernel.
KernelEval extension_kernel_dt(const LameParams& params, std::span<const double> xi, double t);

TraceBundle boundary_traces(const LameParams& params, std::span<const double> xi);

/// Lame extension of a scalar normal datum at the given heights. The zero mode
/// of phi is handled per `policy` (project_out_mean drops the mean).
DisplacementSlab lame_extend(const LameParams& params, const RealField& phi,
                             std::span<const double> heights,
                             ZeroModePolicy policy = ZeroModePolicy::project_out_mean);
DisplacementSlab lame_extend(const LameParams& params, const RealField& phi);

/// t-derivative of the Lame extension, evaluated analytically.
DisplacementSlab lame_extend_dt(const LameParams& params, const RealField& phi,
                                std::span<const double> heights);

/// Spectral multiplication by c_{lambda,mu} |xi'|.
RealField dtn_apply(const LameParams& params, const RealField& phi);

/// Normal traction -2 mu d_n u^n - lambda div u of the Lame extension, assembled
/// from the normal-derivative and divergence trace multipliers.
RealField extension_traction(const LameParams& params, const RealField& phi);

/// One candidate closed form for the tangential trace constant.
struct TraceFactorCandidate {
  std::string label;
  /// Coefficient a in u^j(xi', 0) = a i xi_j / |xi'| phi_hat.
  double tangential_constant = 0;
  /// |D_t u^j(0) + xi_j u^n(0)| of the decaying solution with these traces.
  double boundary_residual = 0;
  bool consistent = false;
};

struct TraceFactorReport {
  std::array<double, 2> xi{};
  double kernel_constant = 0;
  std::vector<TraceFactorCandidate> candidates;
};

/// Tests the two closed forms (kappa-nu)/nu (1 - 2 mu nu) and
/// (kappa-nu)/nu (1 - 2 mu kappa) for the tangential trace against the
/// Fourier-side tangential boundary row.
TraceFactorReport check_trace_factors(const LameParams& params, std::span<const double> xi,
                                      double tolerance = 1e-12);

}  // namespace signorini
