#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace signorini {

using Complex = std::complex<double>;

/// Boolean node mask over a tangential grid (one byte per node).
using Mask = std::vector<std::uint8_t>;

/// Lame constants together with the derived constants used by the
/// half-space kernels.
class LameParams {
 public:
  /// Throws DomainError naming the offending constant when mu or lambda is
  /// not strictly positive.
  static LameParams derive(double mu, double lambda);

  double mu() const { return mu_; }
  double lambda() const { return lambda_; }
  /// (lambda+mu) / (4 mu (2mu+lambda))
  double kappa() const { return kappa_; }
  /// 1/(2mu) - kappa
  double nu() const { return nu_; }
  /// (lambda+mu) / (2mu+lambda)
  double beta() const { return beta_; }
  /// Constant of the Dirichlet-to-Neumann symbol c |xi'|.
  double dtn_constant() const { return dtn_constant_; }

 private:
  LameParams() = default;
  double mu_ = 0, lambda_ = 0, kappa_ = 0, nu_ = 0, beta_ = 0, dtn_constant_ = 0;
};

LameParams derive_constants(double mu, double lambda);

/// Periodic tangential grid on the torus [-L/2, L/2)^d with N nodes per axis.
/// Node i sits at x_i = -L/2 + i h, so the origin is node N/2.
class GridSpec {
 public:
  static GridSpec make(int boundary_dim, double period, int points_per_dim,
                       std::vector<double> heights = {});

  int boundary_dim() const { return dim_; }
  int space_dim() const { return dim_ + 1; }
  double period() const { return period_; }
  int points_per_dim() const { return n_; }
  const std::vector<double>& heights() const { return heights_; }
  double spacing() const { return period_ / n_; }
  std::size_t node_count() const;

  double coordinate(int index) const { return -0.5 * period_ + index * spacing(); }
  std::array<double, 2> node_position(std::size_t node) const;
  std::array<int, 2> node_indices(std::size_t node) const;
  std::size_t node_at(std::array<int, 2> indices) const;  // wraps periodically

  /// Signed lattice index k in [-N/2, N/2) of storage index i.
  int wavenumber(int index) const { return index < n_ / 2 ? index : index - n_; }
  double angular_frequency(int index) const;

  GridSpec with_heights(std::vector<double> heights) const;

  bool operator==(const GridSpec& other) const = default;

 private:
  GridSpec() = default;
  int dim_ = 1;
  double period_ = 0;
  int n_ = 0;
  std::vector<double> heights_;
};

/// Uniform vertical levels t_m = m T / M, m = 0..M-1.
std::vector<double> uniform_heights(int levels, double depth);

/// c scalar components sampled at every tangential node.
class RealField {
 public:
  RealField(GridSpec grid, int components = 1);
  RealField(GridSpec grid, int components, std::vector<double> samples);

  const GridSpec& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t node_count() const { return grid_.node_count(); }

  std::span<double> component(int c);
  std::span<const double> component(int c) const;
  std::vector<double>& samples() { return samples_; }
  const std::vector<double>& samples() const { return samples_; }

  double& operator()(int c, std::size_t node) { return samples_[c * node_count() + node]; }
  double operator()(int c, std::size_t node) const { return samples_[c * node_count() + node]; }

 private:
  GridSpec grid_;
  int components_;
  std::vector<double> samples_;
};

/// Discrete Fourier coefficients stored in transform order (storage index i
/// per axis maps to lattice index grid.wavenumber(i)).
class SpectralField {
 public:
  SpectralField(GridSpec grid, int components = 1);
  SpectralField(GridSpec grid, int components, std::vector<Complex> coefficients);

  const GridSpec& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t site_count() const { return grid_.node_count(); }

  std::span<Complex> component(int c);
  std::span<const Complex> component(int c) const;
  std::vector<Complex>& coefficients() { return coefficients_; }
  const std::vector<Complex>& coefficients() const { return coefficients_; }

  Complex& operator()(int c, std::size_t site) { return coefficients_[c * site_count() + site]; }
  Complex operator()(int c, std::size_t site) const { return coefficients_[c * site_count() + site]; }

  /// Storage site of lattice index k (per axis, in [-N/2, N/2)).
  std::size_t site_of(std::array<int, 2> k) const;

 private:
  GridSpec grid_;
  int components_;
  std::vector<Complex> coefficients_;
};

/// Vector displacement samples on the tangential grid times a list of heights.
class DisplacementSlab {
 public:
  DisplacementSlab(GridSpec grid, std::vector<double> heights, int components);

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& heights() const { return heights_; }
  int components() const { return components_; }
  std::size_t level_count() const { return heights_.size(); }
  std::size_t node_count() const { return grid_.node_count(); }

  double& operator()(std::size_t level, int c, std::size_t node) {
    return values_[(level * components_ + c) * node_count() + node];
  }
  double operator()(std::size_t level, int c, std::size_t node) const {
    return values_[(level * components_ + c) * node_count() + node];
  }
  std::span<double> level_component(std::size_t level, int c);
  std::span<const double> level_component(std::size_t level, int c) const;
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  DisplacementSlab& operator+=(const DisplacementSlab& other);
  DisplacementSlab& operator-=(const DisplacementSlab& other);

 private:
  GridSpec grid_;
  std::vector<double> heights_;
  int components_;
  std::vector<double> values_;
};

}  // namespace signorini
