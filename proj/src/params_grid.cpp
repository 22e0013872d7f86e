#include "signorini/params_grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "signorini/errors.hpp"

namespace signorini {

LameParams LameParams::derive(double mu, double lambda) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("Lame constant mu must be positive and finite, got " + std::to_string(mu));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("Lame constant lambda must be positive and finite, got " +
                      std::to_string(lambda));
  }
  LameParams p;
  p.mu_ = mu;
  p.lambda_ = lambda;
  p.kappa_ = (lambda + mu) / (4.0 * mu * (2.0 * mu + lambda));
  p.nu_ = 1.0 / (2.0 * mu) - p.kappa_;
  p.beta_ = (lambda + mu) / (2.0 * mu + lambda);
  p.dtn_constant_ = 2.0 * mu * (lambda + mu) / (lambda + 2.0 * mu);
  return p;
}

LameParams derive_constants(double mu, double lambda) { return LameParams::derive(mu, lambda); }

GridSpec GridSpec::make(int boundary_dim, double period, int points_per_dim,
                        std::vector<double> heights) {
  if (boundary_dim != 1 && boundary_dim != 2) {
    throw DomainError("boundary dimension must be 1 or 2, got " + std::to_string(boundary_dim));
  }
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw DomainError("grid period must be positive");
  }
  if (points_per_dim < 8 || points_per_dim % 2 != 0) {
    throw DomainError("points per dimension must be even and >= 8, got " +
                      std::to_string(points_per_dim));
  }
  for (std::size_t m = 0; m < heights.size(); ++m) {
    if (!(heights[m] >= 0.0) || (m > 0 && !(heights[m] > heights[m - 1]))) {
      throw DomainError("heights must be non-negative and strictly increasing");
    }
  }
  GridSpec g;
  g.dim_ = boundary_dim;
  g.period_ = period;
  g.n_ = points_per_dim;
  g.heights_ = std::move(heights);
  return g;
}

std::size_t GridSpec::node_count() const {
  return dim_ == 1 ? static_cast<std::size_t>(n_) : static_cast<std::size_t>(n_) * n_;
}

std::array<int, 2> GridSpec::node_indices(std::size_t node) const {
  if (dim_ == 1) return {static_cast<int>(node), 0};
  return {static_cast<int>(node / n_), static_cast<int>(node % n_)};
}

std::size_t GridSpec::node_at(std::array<int, 2> idx) const {
  auto wrap = [this](int i) { return ((i % n_) + n_) % n_; };
  if (dim_ == 1) return static_cast<std::size_t>(wrap(idx[0]));
  return static_cast<std::size_t>(wrap(idx[0])) * n_ + wrap(idx[1]);
}

std::array<double, 2> GridSpec::node_position(std::size_t node) const {
  const auto idx = node_indices(node);
  return {coordinate(idx[0]), dim_ == 2 ? coordinate(idx[1]) : 0.0};
}

double GridSpec::angular_frequency(int index) const {
  return 2.0 * std::numbers::pi * wavenumber(index) / period_;
}

GridSpec GridSpec::with_heights(std::vector<double> heights) const {
  return make(dim_, period_, n_, std::move(heights));
}

std::vector<double> uniform_heights(int levels, double depth) {
  if (levels < 1 || !(depth > 0.0)) throw DomainError("uniform heights need levels >= 1, depth > 0");
  std::vector<double> h(levels);
  for (int m = 0; m < levels; ++m) h[m] = depth * m / levels;
  return h;
}

RealField::RealField(GridSpec grid, int components)
    : grid_(std::move(grid)), components_(components),
      samples_(static_cast<std::size_t>(components) * grid_.node_count(), 0.0) {
  if (components < 1) throw DomainError("field needs at least one component");
}

RealField::RealField(GridSpec grid, int components, std::vector<double> samples)
    : grid_(std::move(grid)), components_(components), samples_(std::move(samples)) {
  if (components < 1) throw DomainError("field needs at least one component");
  if (samples_.size() != static_cast<std::size_t>(components) * grid_.node_count()) {
    throw DomainError("sample count does not match components x grid nodes");
  }
}

std::span<double> RealField::component(int c) {
  return std::span<double>(samples_).subspan(c * node_count(), node_count());
}
std::span<const double> RealField::component(int c) const {
  return std::span<const double>(samples_).subspan(c * node_count(), node_count());
}

SpectralField::SpectralField(GridSpec grid, int components)
    : grid_(std::move(grid)), components_(components),
      coefficients_(static_cast<std::size_t>(components) * grid_.node_count()) {
  if (components < 1) throw DomainError("field needs at least one component");
}

SpectralField::SpectralField(GridSpec grid, int components, std::vector<Complex> coefficients)
    : grid_(std::move(grid)), components_(components), coefficients_(std::move(coefficients)) {
  if (components < 1) throw DomainError("field needs at least one component");
  if (coefficients_.size() != static_cast<std::size_t>(components) * grid_.node_count()) {
    throw DomainError("coefficient count does not match components x lattice sites");
  }
}

std::span<Complex> SpectralField::component(int c) {
  return std::span<Complex>(coefficients_).subspan(c * site_count(), site_count());
}
std::span<const Complex> SpectralField::component(int c) const {
  return std::span<const Complex>(coefficients_).subspan(c * site_count(), site_count());
}

std::size_t SpectralField::site_of(std::array<int, 2> k) const {
  return grid_.node_at(k);
}

DisplacementSlab::DisplacementSlab(GridSpec grid, std::vector<double> heights, int components)
    : grid_(std::move(grid)), heights_(std::move(heights)), components_(components),
      values_(heights_.size() * components * grid_.node_count(), 0.0) {
  if (components < 1) throw DomainError("slab needs at least one component");
}

std::span<double> DisplacementSlab::level_component(std::size_t level, int c) {
  return std::span<double>(values_).subspan((level * components_ + c) * node_count(), node_count());
}
std::span<const double> DisplacementSlab::level_component(std::size_t level, int c) const {
  return std::span<const double>(values_).subspan((level * components_ + c) * node_count(),
                                                  node_count());
}

DisplacementSlab& DisplacementSlab::operator+=(const DisplacementSlab& other) {
  if (other.values_.size() != values_.size() || other.heights_ != heights_) {
    throw DomainError("slab shapes differ");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

DisplacementSlab& DisplacementSlab::operator-=(const DisplacementSlab& other) {
  if (other.values_.size() != values_.size() || other.heights_ != heights_) {
    throw DomainError("slab shapes differ");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

}  // namespace signorini
