#include "signorini/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "signorini/errors.hpp"

namespace signorini {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created unaligned so any std::vector storage works.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::span<const int> dims, int sign) {
    std::lock_guard lock(mutex_);
    Key key{std::vector<int>(dims.begin(), dims.end()), sign};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    std::vector<Complex> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(std::move(key), plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  using Key = std::pair<std::vector<int>, int>;
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

std::size_t product(std::span<const int> dims) {
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  return total;
}

void execute(std::span<Complex> data, std::span<const int> dims, int sign) {
  if (data.size() != product(dims)) throw DomainError("transform size does not match extents");
  fftw_plan plan = PlanCache::instance().get(dims, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

std::vector<int> grid_dims(const GridSpec& g) {
  return std::vector<int>(static_cast<std::size_t>(g.boundary_dim()), g.points_per_dim());
}

}  // namespace

FrequencyLattice::FrequencyLattice(const GridSpec& grid)
    : grid_(grid), magnitudes_(grid.node_count()), components_(grid.node_count()) {
  for (std::size_t s = 0; s < magnitudes_.size(); ++s) {
    const auto idx = grid.node_indices(s);
    std::array<double, 2> xi{grid.angular_frequency(idx[0]),
                             grid.boundary_dim() == 2 ? grid.angular_frequency(idx[1]) : 0.0};
    components_[s] = xi;
    magnitudes_[s] = std::hypot(xi[0], xi[1]);
    max_magnitude_ = std::max(max_magnitude_, magnitudes_[s]);
  }
}

std::array<int, 2> FrequencyLattice::wavenumbers(std::size_t site) const {
  const auto idx = grid_.node_indices(site);
  return {grid_.wavenumber(idx[0]), grid_.boundary_dim() == 2 ? grid_.wavenumber(idx[1]) : 0};
}

const char* fft_backend_version() { return fftw_version; }

void fft_forward(std::span<Complex> data, std::span<const int> dims) {
  execute(data, dims, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(product(dims));
  for (auto& z : data) z *= scale;
}

void fft_backward(std::span<Complex> data, std::span<const int> dims) {
  execute(data, dims, FFTW_BACKWARD);
}

SpectralField to_spectral(const RealField& f) {
  SpectralField out(f.grid(), f.components());
  const auto dims = grid_dims(f.grid());
  for (int c = 0; c < f.components(); ++c) {
    auto src = f.component(c);
    auto dst = out.component(c);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
    fft_forward(dst, dims);
  }
  return out;
}

std::vector<Complex> inverse_samples(const SpectralField& f, int component) {
  auto src = f.component(component);
  std::vector<Complex> buf(src.begin(), src.end());
  fft_backward(buf, grid_dims(f.grid()));
  return buf;
}

RealField to_real(const SpectralField& f) {
  RealField out(f.grid(), f.components());
  for (int c = 0; c < f.components(); ++c) {
    const auto buf = inverse_samples(f, c);
    auto dst = out.component(c);
    for (std::size_t i = 0; i < buf.size(); ++i) dst[i] = buf[i].real();
  }
  return out;
}

SpectralField frac_laplacian_apply(const SpectralField& f, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("fractional order s must lie in (0, 1]");
  const FrequencyLattice lattice(f.grid());
  SpectralField out = f;
  for (int c = 0; c < f.components(); ++c) {
    auto coef = out.component(c);
    for (std::size_t k = 0; k < coef.size(); ++k) {
      const double m = lattice.magnitude(k);
      coef[k] *= (m == 0.0) ? 0.0 : std::pow(m, 2.0 * s);
    }
  }
  return out;
}

SpectralField frac_laplacian_inverse(const SpectralField& f, double s, ZeroModePolicy policy) {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("fractional order s must lie in (0, 1]");
  const FrequencyLattice lattice(f.grid());
  SpectralField out = f;
  for (int c = 0; c < f.components(); ++c) {
    auto coef = out.component(c);
    if (policy == ZeroModePolicy::require_zero_mean) {
      double energy = 0.0;
      for (const auto& z : coef) energy += std::norm(z);
      const double rms = std::sqrt(energy);
      const double zero = std::abs(coef[0]);
      if (zero > 1e-10 * rms) {
        std::ostringstream msg;
        msg << "zero mode of component " << c << " has magnitude " << zero
            << " (field RMS " << rms << "); inverse requires a zero-mean field";
        throw ZeroModeError(msg.str(), zero);
      }
    }
    for (std::size_t k = 0; k < coef.size(); ++k) {
      const double m = lattice.magnitude(k);
      coef[k] = (m == 0.0) ? Complex{} : coef[k] / std::pow(m, 2.0 * s);
    }
  }
  return out;
}

double zero_mode_mean(const SpectralField& f, int component) {
  return f.component(component)[0].real();
}

SpectralField tangential_derivative(const SpectralField& f, int axis) {
  if (axis < 0 || axis >= f.grid().boundary_dim()) throw DomainError("derivative axis out of range");
  const FrequencyLattice lattice(f.grid());
  SpectralField out = f;
  for (int c = 0; c < f.components(); ++c) {
    auto coef = out.component(c);
    for (std::size_t k = 0; k < coef.size(); ++k) coef[k] *= Complex(0.0, lattice.xi(k)[axis]);
  }
  return out;
}

RealField frac_laplacian_apply(const RealField& f, double s) {
  return to_real(frac_laplacian_apply(to_spectral(f), s));
}

RealField frac_laplacian_inverse(const RealField& f, double s, ZeroModePolicy policy) {
  return to_real(frac_laplacian_inverse(to_spectral(f), s, policy));
}

}  // namespace signorini
