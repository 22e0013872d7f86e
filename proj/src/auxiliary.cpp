#include "signorini/auxiliary.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "signorini/errors.hpp"

namespace signorini {

namespace {

constexpr Complex kI{0.0, 1.0};

RealField zero_like(const GridSpec& grid) { return RealField(grid, 1); }

void check_zero_modes(SpectralField& hat, ZeroModePolicy policy, std::vector<double>& discarded,
                      std::vector<std::string>& log, const char* what) {
  for (int c = 0; c < hat.components(); ++c) {
    const double mean = zero_mode_mean(hat, c);
    if (policy == ZeroModePolicy::require_zero_mean) {
      double energy = 0.0;
      for (const auto& z : hat.component(c)) energy += std::norm(z);
      if (std::abs(hat(c, 0)) > 1e-10 * std::sqrt(energy)) {
        std::ostringstream msg;
        msg << what << " component " << c << " has nonzero mean " << mean;
        throw ZeroModeError(msg.str(), std::abs(hat(c, 0)));
      }
    } else if (mean != 0.0) {
      std::ostringstream msg;
      msg << what << " component " << c << ": projected out mean " << mean;
      log.push_back(msg.str());
    }
    discarded.push_back(mean);
    hat(c, 0) = Complex{};
  }
}

}  // namespace

double uniform_spacing(std::span<const double> heights) {
  if (heights.size() < 2 || heights[0] != 0.0) {
    throw DomainError("bulk solve needs at least two uniform levels starting at t = 0");
  }
  const double dt = heights[1];
  for (std::size_t m = 0; m < heights.size(); ++m) {
    if (std::abs(heights[m] - m * dt) > 1e-12 * (1.0 + m * dt)) {
      throw DomainError("bulk solve needs uniformly spaced levels");
    }
  }
  return dt;
}

SmallMatrix bulk_inverse_symbol(const LameParams& params, std::span<const double> xi_full) {
  double r2 = 0.0;
  for (double x : xi_full) r2 += x * x;
  if (!(r2 > 0.0)) throw SingularFrequencyError("bulk symbol evaluated at the zero frequency");
  const int n = static_cast<int>(xi_full.size());
  const double mu = params.mu();
  const double lam = params.lambda();
  const double coupling = (lam + mu) / ((2.0 * mu + lam) * mu);
  SmallMatrix m(n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      m(j, l) = ((j == l) ? 1.0 / (mu * r2) : 0.0) - coupling * xi_full[j] * xi_full[l] / (r2 * r2);
    }
  }
  return m;
}

AuxiliarySolution solve_boundary_part(const LameParams& params, const RealField& g,
                                      std::span<const double> heights, ZeroModePolicy policy) {
  const GridSpec& grid = g.grid();
  const int d = grid.boundary_dim();
  if (g.components() != d) throw DomainError("tangential data g needs one component per axis");
  AuxiliarySolution out{
      DisplacementSlab(grid, std::vector<double>(heights.begin(), heights.end()), d + 1),
      zero_like(grid), zero_like(grid), zero_like(grid), {}, {}};

  SpectralField g_hat = to_spectral(g);
  check_zero_modes(g_hat, policy, out.discarded_means, out.log, "boundary datum g");

  const FrequencyLattice lattice(grid);
  const double mu = params.mu();
  std::vector<std::vector<Complex>> coeffs(lattice.size());
  SpectralField dn(grid, 1), div(grid, 1);
  for (std::size_t s = 0; s < lattice.size(); ++s) {
    if (lattice.magnitude(s) == 0.0) continue;
    const std::span<const double> xi(lattice.xi(s).data(), d);
    std::vector<Complex> c(d + 1);
    for (int j = 0; j < d; ++j) c[j] = -mu / std::numbers::pi * g_hat(j, s);
    const auto value = fundamental_matrix(params, xi, 0.0).apply(c);
    const auto slope = fundamental_matrix_dt(params, xi, 0.0).apply(c);
    Complex tangential_div{};
    for (int j = 0; j < d; ++j) tangential_div += kI * xi[j] * value[j];
    dn(0, s) = slope[d];
    div(0, s) = tangential_div + slope[d];
    coeffs[s] = std::move(c);
  }

  SpectralField level(grid, d + 1);
  for (std::size_t m = 0; m < heights.size(); ++m) {
    for (std::size_t s = 0; s < lattice.size(); ++s) {
      if (coeffs[s].empty()) {
        for (int c = 0; c <= d; ++c) level(c, s) = Complex{};
        continue;
      }
      const std::span<const double> xi(lattice.xi(s).data(), d);
      const auto w = fundamental_matrix(params, xi, heights[m]).apply(coeffs[s]);
      for (int c = 0; c <= d; ++c) level(c, s) = w[c];
    }
    const RealField values = to_real(level);
    for (int c = 0; c <= d; ++c) {
      auto src = values.component(c);
      std::copy(src.begin(), src.end(), out.slab.level_component(m, c).begin());
    }
  }

  out.trace_normal_derivative = to_real(dn);
  out.trace_divergence = to_real(div);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    out.htilde_contribution(0, i) = 2.0 * mu * out.trace_normal_derivative(0, i) +
                                    params.lambda() * out.trace_divergence(0, i);
  }
  return out;
}

AuxiliarySolution solve_bulk_part(const LameParams& params, const DisplacementSlab& f) {
  const GridSpec& grid = f.grid();
  const int d = grid.boundary_dim();
  const int n = d + 1;
  if (f.components() != n) throw DomainError("bulk force needs n components");
  const double dt = uniform_spacing(f.heights());
  const int levels = static_cast<int>(f.level_count());
  const int box = 2 * levels;
  const double depth = levels * dt;
  const std::size_t nodes = grid.node_count();

  AuxiliarySolution out{DisplacementSlab(grid, f.heights(), n), zero_like(grid), zero_like(grid),
                        zero_like(grid), {}, {}};

  double normal_at_zero = 0.0, at_top = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    normal_at_zero = std::max(normal_at_zero, std::abs(f(0, d, i)));
    for (int c = 0; c < n; ++c) at_top = std::max(at_top, std::abs(f(levels - 1, c, i)));
  }
  if (normal_at_zero > 0.0) {
    std::ostringstream msg;
    msg << "warning: normal force component touches t = 0 (max " << normal_at_zero
        << "); odd reflection sets it to zero there";
    out.log.push_back(msg.str());
  }
  if (at_top > 0.0) {
    std::ostringstream msg;
    msg << "warning: force touches the truncation height T = " << depth << " (max " << at_top
        << ")";
    out.log.push_back(msg.str());
  }

  std::vector<int> dims(static_cast<std::size_t>(d), grid.points_per_dim());
  dims.push_back(box);
  const std::size_t total = nodes * box;

  // Even reflection for tangential components, odd for the normal one.
  std::vector<std::vector<Complex>> hat(n, std::vector<Complex>(total));
  for (int c = 0; c < n; ++c) {
    const bool odd = (c == d);
    auto& buf = hat[c];
    for (std::size_t i = 0; i < nodes; ++i) {
      for (int m2 = 0; m2 < box; ++m2) {
        double value = 0.0;
        if (m2 < levels) {
          value = (odd && m2 == 0) ? 0.0 : f(m2, c, i);
        } else if (m2 > levels) {
          const int mirror = box - m2;
          value = odd ? -f(mirror, c, i) : f(mirror, c, i);
        }
        buf[i * box + m2] = value;
      }
    }
    fft_forward(buf, dims);
    const double mean = buf[0].real();
    out.discarded_means.push_back(mean);
    if (mean != 0.0) {
      std::ostringstream msg;
      msg << "bulk force component " << c << ": projected out mean " << mean;
      out.log.push_back(msg.str());
    }
    buf[0] = Complex{};
  }

  const FrequencyLattice lattice(grid);
  std::vector<Complex> tangential_div(total), normal_slope(total);
  std::vector<double> xi_full(n);
  std::vector<Complex> rhs(n);
  for (std::size_t s = 0; s < nodes; ++s) {
    for (int m2 = 0; m2 < box; ++m2) {
      const std::size_t idx = s * box + m2;
      const int k = m2 < box / 2 ? m2 : m2 - box;
      for (int j = 0; j < d; ++j) xi_full[j] = lattice.xi(s)[j];
      xi_full[d] = 2.0 * std::numbers::pi * k / (2.0 * depth);
      if (lattice.magnitude(s) == 0.0 && k == 0) {
        for (int c = 0; c < n; ++c) hat[c][idx] = Complex{};
        continue;
      }
      for (int c = 0; c < n; ++c) rhs[c] = hat[c][idx];
      // mu Lap + (mu+lambda) grad div has symbol -a(xi).
      const auto w = bulk_inverse_symbol(params, xi_full).apply(rhs);
      for (int c = 0; c < n; ++c) hat[c][idx] = -w[c];
      Complex div{};
      for (int j = 0; j < d; ++j) div += kI * xi_full[j] * hat[j][idx];
      tangential_div[idx] = div;
      normal_slope[idx] = kI * xi_full[d] * hat[d][idx];
    }
  }

  for (int c = 0; c < n; ++c) {
    fft_backward(hat[c], dims);
    for (int m = 0; m < levels; ++m) {
      for (std::size_t i = 0; i < nodes; ++i) out.slab(m, c, i) = hat[c][i * box + m].real();
    }
  }
  fft_backward(tangential_div, dims);
  fft_backward(normal_slope, dims);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double dn = normal_slope[i * box].real();
    out.trace_normal_derivative(0, i) = dn;
    out.trace_divergence(0, i) = tangential_div[i * box].real() + dn;
    out.htilde_contribution(0, i) =
        2.0 * params.mu() * dn + params.lambda() * out.trace_divergence(0, i);
  }
  return out;
}

AuxiliarySolution solve_auxiliary(const LameParams& params, const DisplacementSlab& f,
                                  const RealField& g, ZeroModePolicy policy) {
  AuxiliarySolution boundary = solve_boundary_part(params, g, f.heights(), policy);
  AuxiliarySolution bulk = solve_bulk_part(params, f);
  boundary.slab += bulk.slab;
  auto add = [](RealField& a, const RealField& b) {
    for (std::size_t i = 0; i < a.samples().size(); ++i) a.samples()[i] += b.samples()[i];
  };
  add(boundary.trace_normal_derivative, bulk.trace_normal_derivative);
  add(boundary.trace_divergence, bulk.trace_divergence);
  add(boundary.htilde_contribution, bulk.htilde_contribution);
  boundary.discarded_means.insert(boundary.discarded_means.end(), bulk.discarded_means.begin(),
                                  bulk.discarded_means.end());
  boundary.log.insert(boundary.log.end(), bulk.log.begin(), bulk.log.end());
  return boundary;
}

}  // namespace signorini
