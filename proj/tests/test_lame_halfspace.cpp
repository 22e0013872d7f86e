#include <doctest.h>

#include <cmath>
#include <random>

#include "signorini/errors.hpp"
#include "signorini/lame_halfspace.hpp"
#include "signorini/spectral.hpp"
#include "support/oracles.hpp"

using namespace signorini;
using C = std::complex<double>;

namespace {

const C I{0.0, 1.0};
const double kTwoPi = 2.0 * M_PI;

bool near(C a, C b, double tol = 1e-14) { return std::abs(a - b) <= tol; }

RealField sine(const GridSpec& g, double k) {
  RealField f(g);
  for (std::size_t i = 0; i < g.node_count(); ++i) f(0, i) = std::sin(k * g.node_position(i)[0]);
  return f;
}

}  // namespace

TEST_CASE("fundamental matrix examples") {
  const auto p = LameParams::derive(1.0, 1.0);
  const std::array<double, 1> xi{1.0};
  const auto w0 = fundamental_matrix(p, xi, 0.0);
  CHECK(near(w0(0, 0), kTwoPi / 3.0));
  CHECK(near(w0(1, 1), kTwoPi / 3.0));
  CHECK(near(w0(0, 1), 0.0));
  CHECK(near(w0(1, 0), 0.0));
  const auto w1 = fundamental_matrix(p, xi, 1.0);
  CHECK(near(w1(0, 1), kTwoPi * std::exp(-1.0) * (-I / 6.0)));
  const auto far = fundamental_matrix(p, xi, 60.0);
  for (int j = 0; j < 2; ++j)
    for (int l = 0; l < 2; ++l) CHECK(std::abs(far(j, l)) < 1e-20);
}

TEST_CASE("fundamental matrix structure in 2D") {
  const auto p = LameParams::derive(2.0, 0.7);
  const std::array<double, 2> xi{0.8, -1.3};
  const auto w = fundamental_matrix(p, xi, 0.4);
  CHECK(near(w(0, 1), w(1, 0)));
  const auto w0 = fundamental_matrix(p, xi, 0.0);
  CHECK(near(w0(0, 2), 0.0));
  CHECK(near(w0(2, 1), 0.0));
  // (j, n) entries are linear in t
  const auto w2 = fundamental_matrix(p, xi, 0.8);
  const double r = std::hypot(xi[0], xi[1]);
  CHECK(near(w2(0, 2) * std::exp(0.8 * r), 2.0 * w(0, 2) * std::exp(0.4 * r), 1e-12));
}

TEST_CASE("zero frequency is singular") {
  const auto p = LameParams::derive(1.0, 1.0);
  const std::array<double, 1> zero{0.0};
  CHECK_THROWS_AS(fundamental_matrix(p, zero, 0.0), SingularFrequencyError);
  CHECK_THROWS_AS(dirichlet_coefficients(p, zero, 1.0), SingularFrequencyError);
  CHECK_THROWS_AS(extension_kernel(p, zero, 0.0), SingularFrequencyError);
  CHECK_THROWS_AS(boundary_traces(p, zero), SingularFrequencyError);
}

TEST_CASE("Dirichlet coefficients") {
  const auto p = LameParams::derive(1.0, 1.0);
  const std::array<double, 1> xi{1.0};
  const auto c = dirichlet_coefficients(p, xi, 1.0);
  CHECK(near(c[0], I / kTwoPi));
  CHECK(near(c[1], 3.0 / kTwoPi));
  const auto w0 = fundamental_matrix(p, xi, 0.0);
  const auto at0 = w0.apply(c);
  CHECK(near(at0[0], I / 3.0));
  CHECK(near(at0[1], 1.0));
  const auto zero = dirichlet_coefficients(p, xi, 0.0);
  CHECK(near(zero[0], 0.0));
  CHECK(near(zero[1], 0.0));
  const std::array<double, 1> neg{-1.0};
  const auto cn = dirichlet_coefficients(p, neg, 1.0);
  CHECK(near(cn[0], -c[0]));
  CHECK(near(cn[1], c[1]));
}

TEST_CASE("extension kernel examples") {
  const auto p = LameParams::derive(1.0, 1.0);
  const std::array<double, 1> xi{1.0};
  const auto k0 = extension_kernel(p, xi, 0.0);
  CHECK(near(k0.tangential[0], I / 3.0));
  CHECK(k0.normal == C(1.0, 0.0));
  const auto k1 = extension_kernel(p, xi, 1.0);
  CHECK(near(k1.tangential[0], -I / 3.0 * std::exp(-1.0)));
  CHECK(near(k1.normal, 5.0 / 3.0 * std::exp(-1.0)));
  // Fourier-side tangential boundary row
  const auto d0 = extension_kernel_dt(p, xi, 0.0);
  CHECK(near(d0.tangential[0], -I));
  CHECK(near(d0.tangential[0] / I + xi[0] * k0.normal, 0.0));
  CHECK_THROWS_AS(extension_kernel(p, xi, -0.1), DomainError);
}

TEST_CASE("kernel derivative against a central difference") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int k = 0; k < 20; ++k) {
    const auto p = LameParams::derive(u(rng), u(rng));
    const std::array<double, 2> xi{u(rng), -u(rng)};
    const double t = u(rng), h = 1e-5;
    const auto up = extension_kernel(p, xi, t + h), dn = extension_kernel(p, xi, t - h);
    const auto d = extension_kernel_dt(p, xi, t);
    CHECK(std::abs((up.normal - dn.normal) / (2 * h) - d.normal) < 1e-8);
    CHECK(std::abs((up.tangential[1] - dn.tangential[1]) / (2 * h) - d.tangential[1]) < 1e-8);
  }
}

TEST_CASE("kernel agrees with matrix times coefficients") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> mat(0.1, 10.0), freq(-6.0, 6.0), height(0.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const auto p = LameParams::derive(mat(rng), mat(rng));
    const std::array<double, 2> xi{freq(rng), freq(rng)};
    const double t = height(rng);
    const auto values = fundamental_matrix(p, xi, t).apply(dirichlet_coefficients(p, xi, 1.0));
    const auto kern = extension_kernel(p, xi, t);
    for (int j = 0; j < 2; ++j) CHECK(std::abs(values[j] - kern.tangential[j]) <= 1e-12 * std::max(1.0, std::abs(kern.tangential[j])));
    CHECK(std::abs(values[2] - kern.normal) <= 1e-12 * std::max(1.0, std::abs(kern.normal)));
  }
}

TEST_CASE("boundary traces") {
  const auto p = LameParams::derive(1.0, 1.0);
  const std::array<double, 1> one{1.0}, two{2.0};
  const auto tb = boundary_traces(p, one);
  CHECK(near(tb.tangential_traces[0], I / 3.0));
  CHECK(near(tb.normal_derivative, -1.0 / 3.0));
  CHECK(near(tb.divergence, -2.0 / 3.0));
  CHECK(near(tb.dtn, 4.0 / 3.0));
  CHECK(near(boundary_traces(p, two).dtn, 8.0 / 3.0));

  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> mat(0.1, 10.0), freq(-5.0, 5.0);
  for (int k = 0; k < 50; ++k) {
    const double mu = mat(rng), lam = mat(rng);
    const auto q = LameParams::derive(mu, lam);
    const std::array<double, 2> xi{freq(rng), freq(rng)};
    const double r = std::hypot(xi[0], xi[1]);
    const auto b = boundary_traces(q, xi);
    CHECK(near(b.dtn, -2.0 * mu * b.normal_derivative - lam * b.divergence, 1e-12 * r));
    CHECK(std::abs(b.dtn - 2.0 * mu * (mu + lam) / (2.0 * mu + lam) * r) <= 1e-12 * b.dtn.real());
    CHECK(near(b.tangential_traces[1], I * mu * xi[1] / ((2 * mu + lam) * r), 1e-13));
  }
}

TEST_CASE("trace factor check favours the kernel") {
  const auto p = LameParams::derive(1.0, 1.0);
  const std::array<double, 1> xi{1.0};
  const auto report = check_trace_factors(p, xi);
  CHECK(report.kernel_constant == doctest::Approx(1.0 / 3.0));
  REQUIRE(report.candidates.size() == 2);
  for (const auto& c : report.candidates) {
    if (c.label.ends_with("mu*kappa)")) {
      CHECK(c.tangential_constant == doctest::Approx(1.0 / 3.0));
      CHECK(c.consistent);
    } else {
      CHECK(c.tangential_constant == doctest::Approx(1.0 / 6.0));
      CHECK_FALSE(c.consistent);
    }
  }
}

TEST_CASE("extension of sin(x)") {
  const auto p = LameParams::derive(1.0, 1.0);
  const auto g = GridSpec::make(1, 2.0 * M_PI, 32);
  const RealField phi = sine(g, 1.0);
  const std::vector<double> heights{0.0, 1.0};
  const DisplacementSlab u = lame_extend(p, phi, heights);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const double x = g.node_position(i)[0];
    CHECK(std::abs(u(0, 1, i) - std::sin(x)) < 1e-10);
    CHECK(std::abs(u(1, 1, i) - std::exp(-1.0) * 5.0 / 3.0 * std::sin(x)) < 1e-12);
    CHECK(std::abs(u(1, 0, i) + std::exp(-1.0) / 3.0 * std::cos(x)) < 1e-12);
  }
  RealField zero(g);
  CHECK(oracle::max_abs(lame_extend(p, zero, heights).values()) == 0.0);
}

TEST_CASE("extension matches the kernel formula for sin(kx) in 2D") {
  const auto p = LameParams::derive(1.5, 0.5);
  const auto g = GridSpec::make(2, 2.0 * M_PI, 16);
  RealField phi(g);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto x = g.node_position(i);
    phi(0, i) = std::sin(2.0 * x[0] + x[1]);
  }
  const std::vector<double> heights{0.0, 0.3, 1.1};
  const DisplacementSlab u = lame_extend(p, phi, heights);
  const std::array<double, 2> xi{2.0, 1.0};
  for (std::size_t m = 0; m < heights.size(); ++m) {
    const auto k = extension_kernel(p, xi, heights[m]);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      const auto x = g.node_position(i);
      // sin(a) = Im e^{ia}; the multiplier acts on e^{i xi.x}
      const C mode = std::exp(I * (2.0 * x[0] + x[1]));
      CHECK(std::abs(u(m, 0, i) - (k.tangential[0] * mode).imag()) < 1e-10);
      CHECK(std::abs(u(m, 1, i) - (k.tangential[1] * mode).imag()) < 1e-10);
      CHECK(std::abs(u(m, 2, i) - (k.normal * mode).imag()) < 1e-10);
    }
  }
}

TEST_CASE("finite-difference residuals decay at the expected rates") {
  const auto p = LameParams::derive(1.0, 2.0);
  const auto g = GridSpec::make(1, 2.0 * M_PI, 32);
  RealField phi(g);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const double x = g.node_position(i)[0];
    phi(0, i) = std::sin(x) + 0.5 * std::cos(2.0 * x);
  }
  std::vector<double> bulk, bc;
  for (double dt : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const std::vector<double> heights{0.5 - dt, 0.5, 0.5 + dt};
    bulk.push_back(oracle::lame_bulk_residual(p, lame_extend(p, phi, heights), 1));
    bc.push_back(oracle::tangential_bc_residual(lame_extend(p, phi, std::vector<double>{0.0, dt}), 1));
  }
  for (int k = 0; k < 2; ++k) {
    CHECK(bulk[k] / bulk[k + 1] == doctest::Approx(4.0).epsilon(0.05));
    CHECK(bc[k] / bc[k + 1] == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("dtn operator") {
  const auto p = LameParams::derive(1.0, 1.0);
  const auto g = GridSpec::make(1, 2.0 * M_PI, 64);
  RealField one(g);
  for (double& x : one.samples()) x = 1.0;
  CHECK(oracle::max_abs(dtn_apply(p, one).samples()) < 1e-14);
  const RealField s2 = sine(g, 2.0);
  const RealField out = dtn_apply(p, s2);
  for (std::size_t i = 0; i < g.node_count(); ++i) CHECK(std::abs(out(0, i) - 8.0 / 3.0 * s2(0, i)) < 1e-13);

  std::mt19937_64 rng(31);
  std::normal_distribution<double> n;
  RealField f(g);
  for (double& x : f.samples()) x = n(rng);
  const RealField a = dtn_apply(p, f);
  const RealField b = frac_laplacian_apply(f, 0.5);
  for (std::size_t i = 0; i < g.node_count(); ++i) CHECK(std::abs(a(0, i) - p.dtn_constant() * b(0, i)) < 1e-12);
  // traction assembled from the trace multipliers is the same operator
  CHECK(oracle::max_abs_diff(extension_traction(p, f).samples(), a.samples()) < 1e-12);
}

TEST_CASE("dtn two-path agreement with slab differences") {
  const auto p = LameParams::derive(1.0, 1.0);
  const auto g = GridSpec::make(1, 2.0 * M_PI, 32);
  const RealField phi = sine(g, 1.0);
  std::vector<double> err;
  for (double dt : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const auto u = lame_extend(p, phi, std::vector<double>{0.0, dt, 2 * dt});
    err.push_back(oracle::max_abs_diff(oracle::fd_traction(p, u).samples(), dtn_apply(p, phi).samples()));
  }
  CHECK(err[0] / err[1] > 3.0);
  CHECK(err[1] / err[2] > 3.0);
}

TEST_CASE("dtn scaling under dilation") {
  const auto p = LameParams::derive(1.0, 3.0);
  const auto g = GridSpec::make(1, 2.0 * M_PI, 64);
  const RealField a = sine(g, 4.0), b = sine(g, 2.0);
  // phi(x/r) with r = 1/2 doubles the frequency and the operator output
  const RealField da = dtn_apply(p, a), db = dtn_apply(p, b);
  CHECK(oracle::max_abs(da.samples()) == doctest::Approx(2.0 * oracle::max_abs(db.samples())));
}
