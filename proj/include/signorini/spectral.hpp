#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "signorini/params_grid.hpp"

namespace signorini {

enum class ZeroModePolicy { require_zero_mean, project_out_mean };

/// |xi'| and the per-axis components xi_j at every lattice site, in storage order.
class FrequencyLattice {
 public:
  explicit FrequencyLattice(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return magnitudes_.size(); }
  double magnitude(std::size_t site) const { return magnitudes_[site]; }
  const std::array<double, 2>& xi(std::size_t site) const { return components_[site]; }
  std::span<const double> magnitudes() const { return magnitudes_; }
  double max_magnitude() const { return max_magnitude_; }
  /// Signed lattice indices (k_1, k_2) of a site.
  std::array<int, 2> wavenumbers(std::size_t site) const;

 private:
  GridSpec grid_;
  std::vector<double> magnitudes_;
  std::vector<std::array<double, 2>> components_;
  double max_magnitude_ = 0;
};

/// Multi-dimensional complex DFT in place over a row-major array of extents
/// `dims`. Forward carries the 1/prod(dims) factor, backward carries none.
/// Plans are cached and planning is serialized internally.
/// Version string of the DFT backend.
const char* fft_backend_version();

void fft_forward(std::span<Complex> data, std::span<const int> dims);
void fft_backward(std::span<Complex> data, std::span<const int> dims);

SpectralField to_spectral(const RealField& f);
/// Real part of the inverse transform.
RealField to_real(const SpectralField& f);
/// Full complex inverse transform of one component (imaginary parts kept).
std::vector<Complex> inverse_samples(const SpectralField& f, int component);

/// Multiplies the coefficient at each site by |xi'|^{2s}.
SpectralField frac_laplacian_apply(const SpectralField& f, double s);

/// Divides by |xi'|^{2s} off the zero mode and zeroes the zero mode. Under
/// require_zero_mean a zero mode above 1e-10 of the field RMS throws
/// ZeroModeError.
SpectralField frac_laplacian_inverse(const SpectralField& f, double s,
                                     ZeroModePolicy policy = ZeroModePolicy::project_out_mean);

/// Mean of component c (the real zero-mode coefficient).
double zero_mode_mean(const SpectralField& f, int component = 0);

/// i xi_axis multiplication (tangential derivative).
SpectralField tangential_derivative(const SpectralField& f, int axis);

RealField frac_laplacian_apply(const RealField& f, double s);
RealField frac_laplacian_inverse(const RealField& f, double s,
                                 ZeroModePolicy policy = ZeroModePolicy::project_out_mean);

}  // namespace signorini
