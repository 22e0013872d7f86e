#include "signorini/lame_halfspace.hpp"

#include <cmath>
#include <numbers>

#include "signorini/errors.hpp"

namespace signorini {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

double frequency_norm(std::span<const double> xi) {
  double s = 0.0;
  for (double x : xi) s += x * x;
  const double norm = std::sqrt(s);
  if (!(norm > 0.0)) throw SingularFrequencyError("symbol evaluated at the zero frequency");
  return norm;
}

// W = 2 pi e^{-|xi| t} (A + t B); returns A and B.
std::pair<SmallMatrix, SmallMatrix> fundamental_parts(const LameParams& p,
                                                      std::span<const double> xi) {
  const double r = frequency_norm(xi);
  const int d = static_cast<int>(xi.size());
  const int n = d + 1;
  const double kappa = p.kappa();
  SmallMatrix a(n), b(n);
  for (int j = 0; j < d; ++j) {
    for (int l = 0; l < d; ++l) {
      const double delta = (j == l) ? 1.0 : 0.0;
      a(j, l) = delta / (2.0 * p.mu() * r) - kappa * xi[j] * xi[l] / (r * r * r);
      b(j, l) = -kappa * xi[j] * xi[l] / (r * r);
    }
    b(j, d) = -kI * kappa * xi[j] / r;
    b(d, j) = b(j, d);
  }
  a(d, d) = p.nu() / r;
  b(d, d) = kappa;
  return {a, b};
}

}  // namespace

std::vector<Complex> SmallMatrix::apply(std::span<const Complex> x) const {
  std::vector<Complex> y(n_);
  for (int j = 0; j < n_; ++j) {
    for (int l = 0; l < n_; ++l) y[j] += (*this)(j, l) * x[l];
  }
  return y;
}

SmallMatrix SmallMatrix::operator*(const SmallMatrix& rhs) const {
  SmallMatrix out(n_);
  for (int j = 0; j < n_; ++j) {
    for (int l = 0; l < n_; ++l) {
      for (int k = 0; k < n_; ++k) out(j, l) += (*this)(j, k) * rhs(k, l);
    }
  }
  return out;
}

std::vector<Complex> SmallMatrix::solve(std::span<const Complex> b) const {
  SmallMatrix m = *this;
  std::vector<Complex> x(b.begin(), b.end());
  for (int col = 0; col < n_; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n_; ++row) {
      if (std::abs(m(row, col)) > std::abs(m(pivot, col))) pivot = row;
    }
    if (std::abs(m(pivot, col)) == 0.0) throw DomainError("singular small matrix");
    if (pivot != col) {
      for (int k = 0; k < n_; ++k) std::swap(m(col, k), m(pivot, k));
      std::swap(x[col], x[pivot]);
    }
    for (int row = col + 1; row < n_; ++row) {
      const Complex factor = m(row, col) / m(col, col);
      for (int k = col; k < n_; ++k) m(row, k) -= factor * m(col, k);
      x[row] -= factor * x[col];
    }
  }
  for (int row = n_ - 1; row >= 0; --row) {
    for (int k = row + 1; k < n_; ++k) x[row] -= m(row, k) * x[k];
    x[row] /= m(row, row);
  }
  return x;
}

FundamentalMatrix fundamental_matrix(const LameParams& params, std::span<const double> xi,
                                     double t) {
  if (t < 0.0) throw DomainError("fundamental matrix requires t >= 0");
  const auto [a, b] = fundamental_parts(params, xi);
  const double scale = kTwoPi * std::exp(-frequency_norm(xi) * t);
  SmallMatrix w(a.size());
  for (int j = 0; j < a.size(); ++j) {
    for (int l = 0; l < a.size(); ++l) w(j, l) = scale * (a(j, l) + t * b(j, l));
  }
  return w;
}

FundamentalMatrix fundamental_matrix_dt(const LameParams& params, std::span<const double> xi,
                                        double t) {
  if (t < 0.0) throw DomainError("fundamental matrix requires t >= 0");
  const auto [a, b] = fundamental_parts(params, xi);
  const double r = frequency_norm(xi);
  const double scale = kTwoPi * std::exp(-r * t);
  SmallMatrix w(a.size());
  for (int j = 0; j < a.size(); ++j) {
    for (int l = 0; l < a.size(); ++l) w(j, l) = scale * (b(j, l) - r * (a(j, l) + t * b(j, l)));
  }
  return w;
}

std::vector<Complex> dirichlet_coefficients(const LameParams& params, std::span<const double> xi,
                                            Complex phi_hat) {
  const double r = frequency_norm(xi);
  const int d = static_cast<int>(xi.size());
  std::vector<Complex> c(d + 1);
  c[d] = r / (kTwoPi * params.nu()) * phi_hat;
  for (int j = 0; j < d; ++j) {
    c[j] = 2.0 * params.mu() * (params.kappa() - params.nu()) * xi[j] / (kI * r) * c[d];
  }
  return c;
}

KernelEval extension_kernel(const LameParams& params, std::span<const double> xi, double t) {
  if (t < 0.0) throw DomainError("extension kernel requires t >= 0");
  const double r = frequency_norm(xi);
  const double mu = params.mu();
  const double lam = params.lambda();
  const double decay = std::exp(-r * t);
  KernelEval k;
  k.t = t;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    k.xi[j] = xi[j];
    k.tangential[j] = decay * (-kI * (lam + mu) * xi[j] * t / (2.0 * mu + lam) +
                               kI * mu * xi[j] / ((2.0 * mu + lam) * r));
  }
  k.normal = decay * (1.0 + params.beta() * r * t);
  return k;
}

KernelEval extension_kernel_dt(const LameParams& params, std::span<const double> xi, double t) {
  if (t < 0.0) throw DomainError("extension kernel requires t >= 0");
  const double r = frequency_norm(xi);
  const double mu = params.mu();
  const double lam = params.lambda();
  const double decay = std::exp(-r * t);
  KernelEval k;
  k.t = t;
  // d/dt e^{-rt}(A t + B) = e^{-rt}(A - r(A t + B))
  for (std::size_t j = 0; j < xi.size(); ++j) {
    k.xi[j] = xi[j];
    const Complex slope = -kI * (lam + mu) * xi[j] / (2.0 * mu + lam);
    const Complex offset = kI * mu * xi[j] / ((2.0 * mu + lam) * r);
    k.tangential[j] = decay * (slope - r * (slope * t + offset));
  }
  const double beta = params.beta();
  k.normal = decay * (beta * r - r * (1.0 + beta * r * t));
  return k;
}

TraceBundle boundary_traces(const LameParams& params, std::span<const double> xi) {
  const KernelEval value = extension_kernel(params, xi, 0.0);
  const KernelEval slope = extension_kernel_dt(params, xi, 0.0);
  TraceBundle tb;
  Complex tangential_div{};
  for (std::size_t j = 0; j < xi.size(); ++j) {
    tb.tangential_traces[j] = value.tangential[j];
    tangential_div += kI * xi[j] * value.tangential[j];
  }
  tb.normal_derivative = slope.normal;
  tb.divergence = tangential_div + slope.normal;
  tb.dtn = -2.0 * params.mu() * tb.normal_derivative - params.lambda() * tb.divergence;
  return tb;
}

namespace {

DisplacementSlab extend_with(const LameParams& params, const RealField& phi,
                             std::span<const double> heights, ZeroModePolicy policy,
                             KernelEval (*kernel)(const LameParams&, std::span<const double>,
                                                  double)) {
  if (phi.components() != 1) throw DomainError("Lame extension needs a scalar datum");
  const GridSpec& grid = phi.grid();
  const int d = grid.boundary_dim();
  SpectralField phi_hat = to_spectral(phi);
  if (policy == ZeroModePolicy::require_zero_mean) {
    // Reuse the spectral check on the zero mode.
    (void)frac_laplacian_inverse(phi_hat, 0.5, ZeroModePolicy::require_zero_mean);
  }
  const FrequencyLattice lattice(grid);
  DisplacementSlab slab(grid, std::vector<double>(heights.begin(), heights.end()), d + 1);
  SpectralField level(grid, d + 1);
  for (std::size_t m = 0; m < heights.size(); ++m) {
    for (std::size_t s = 0; s < lattice.size(); ++s) {
      if (lattice.magnitude(s) == 0.0) {
        for (int c = 0; c <= d; ++c) level(c, s) = Complex{};
        continue;
      }
      const auto& xi = lattice.xi(s);
      const KernelEval k = kernel(params, std::span<const double>(xi.data(), d), heights[m]);
      for (int j = 0; j < d; ++j) level(j, s) = k.tangential[j] * phi_hat(0, s);
      level(d, s) = k.normal * phi_hat(0, s);
    }
    const RealField values = to_real(level);
    for (int c = 0; c <= d; ++c) {
      auto src = values.component(c);
      auto dst = slab.level_component(m, c);
      std::copy(src.begin(), src.end(), dst.begin());
    }
  }
  return slab;
}

}  // namespace

DisplacementSlab lame_extend(const LameParams& params, const RealField& phi,
                             std::span<const double> heights, ZeroModePolicy policy) {
  return extend_with(params, phi, heights, policy, &extension_kernel);
}

DisplacementSlab lame_extend(const LameParams& params, const RealField& phi) {
  return lame_extend(params, phi, phi.grid().heights());
}

DisplacementSlab lame_extend_dt(const LameParams& params, const RealField& phi,
                                std::span<const double> heights) {
  return extend_with(params, phi, heights, ZeroModePolicy::project_out_mean,
                     &extension_kernel_dt);
}

RealField dtn_apply(const LameParams& params, const RealField& phi) {
  SpectralField hat = frac_laplacian_apply(to_spectral(phi), 0.5);
  for (auto& z : hat.coefficients()) z *= params.dtn_constant();
  return to_real(hat);
}

RealField extension_traction(const LameParams& params, const RealField& phi) {
  const GridSpec& grid = phi.grid();
  const int d = grid.boundary_dim();
  const FrequencyLattice lattice(grid);
  SpectralField hat = to_spectral(phi);
  for (int c = 0; c < hat.components(); ++c) {
    auto coef = hat.component(c);
    for (std::size_t s = 0; s < coef.size(); ++s) {
      if (lattice.magnitude(s) == 0.0) {
        coef[s] = Complex{};
        continue;
      }
      const TraceBundle tb =
          boundary_traces(params, std::span<const double>(lattice.xi(s).data(), d));
      coef[s] *= -2.0 * params.mu() * tb.normal_derivative - params.lambda() * tb.divergence;
    }
  }
  return to_real(hat);
}

TraceFactorReport check_trace_factors(const LameParams& params, std::span<const double> xi,
                                      double tolerance) {
  const double r = frequency_norm(xi);
  const int d = static_cast<int>(xi.size());
  const double mu = params.mu();
  const double kappa = params.kappa();
  const double nu = params.nu();

  TraceFactorReport report;
  for (int j = 0; j < d; ++j) report.xi[j] = xi[j];
  report.kernel_constant = mu / (2.0 * mu + params.lambda());

  // xi_j/(i|xi|) X phi_hat = (-X) i xi_j/|xi| phi_hat
  const double ratio = (kappa - nu) / nu;
  const std::vector<std::pair<std::string, double>> forms{
      {"(kappa-nu)/nu*(1-2*mu*nu)", -ratio * (1.0 - 2.0 * mu * nu)},
      {"(kappa-nu)/nu*(1-2*mu*kappa)", -ratio * (1.0 - 2.0 * mu * kappa)},
  };

  const FundamentalMatrix w0 = fundamental_matrix(params, xi, 0.0);
  const FundamentalMatrix w0_dt = fundamental_matrix_dt(params, xi, 0.0);
  for (const auto& [label, constant] : forms) {
    // Decaying solution with traces (constant i xi/|xi|, 1), then the
    // tangential boundary row D_t u^j(0) + xi_j u^n(0).
    std::vector<Complex> traces(d + 1);
    for (int j = 0; j < d; ++j) traces[j] = constant * kI * xi[j] / r;
    traces[d] = 1.0;
    const auto coeff = w0.solve(traces);
    const auto slope = w0_dt.apply(coeff);
    double residual = 0.0;
    for (int j = 0; j < d; ++j) {
      residual = std::max(residual, std::abs(slope[j] / kI + xi[j] * traces[d]));
    }
    report.candidates.push_back(
        {label, constant, residual, residual <= tolerance * std::max(1.0, r)});
  }
  return report;
}

}  // namespace signorini
