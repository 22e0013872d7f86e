#include <doctest.h>

#include <cmath>
#include <random>

#include "signorini/errors.hpp"
#include "signorini/params_grid.hpp"

using namespace signorini;

TEST_CASE("derived constants for mu = lambda = 1") {
  const auto p = LameParams::derive(1.0, 1.0);
  CHECK(p.kappa() == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(p.nu() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p.beta() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(p.dtn_constant() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("dtn constant in the small-lambda limit") {
  const auto p = LameParams::derive(0.5, 1e-6);
  CHECK(p.dtn_constant() == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("non-positive constants are rejected by name") {
  CHECK_THROWS_WITH_AS(LameParams::derive(1.0, -1.0), doctest::Contains("lambda"), DomainError);
  CHECK_THROWS_WITH_AS(LameParams::derive(0.0, 1.0), doctest::Contains("mu"), DomainError);
  CHECK_THROWS_AS(LameParams::derive(NAN, 1.0), DomainError);
}

TEST_CASE("closed-form identities over random materials") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(0.1, 10.0);
  for (int k = 0; k < 200; ++k) {
    const double mu = dist(rng), lam = dist(rng);
    const auto p = LameParams::derive(mu, lam);
    const double gap = -1.0 / (2.0 * (2.0 * mu + lam));
    CHECK(std::abs((p.kappa() - p.nu()) - gap) <= 1e-14 * std::abs(gap));
    CHECK(p.nu() > 0.0);
    CHECK(p.kappa() < p.nu());
    // assembled from the trace constants, with the tangential factor (1 - 2 mu kappa)
    const double assembled = (p.kappa() - p.nu()) / p.nu() *
                             ((2.0 * mu + lam) * (2.0 * mu * p.kappa() - 1.0) - lam * (1.0 - 2.0 * mu * p.kappa()));
    CHECK(std::abs(assembled - p.dtn_constant()) <= 1e-12 * p.dtn_constant());
  }
}

TEST_CASE("the (1 - 2 mu nu) trace factor does not assemble to the dtn constant") {
  const auto p = LameParams::derive(1.0, 1.0);
  const double other = (p.kappa() - p.nu()) / p.nu() *
                       (3.0 * (2.0 * p.kappa() - 1.0) - (1.0 - 2.0 * p.nu()));
  CHECK(other == doctest::Approx(7.0 / 6.0));
  CHECK(other != doctest::Approx(p.dtn_constant()));
}

TEST_CASE("grid geometry") {
  const auto g = GridSpec::make(2, 2.0 * M_PI, 16);
  CHECK(g.node_count() == 256);
  CHECK(g.spacing() == doctest::Approx(2.0 * M_PI / 16));
  // origin is node (N/2, N/2)
  const auto x = g.node_position(g.node_at({8, 8}));
  CHECK(x[0] == doctest::Approx(0.0));
  CHECK(x[1] == doctest::Approx(0.0));
  CHECK(g.node_at({-1, 16}) == g.node_at({15, 0}));
  CHECK(g.wavenumber(0) == 0);
  CHECK(g.wavenumber(8) == -8);
  CHECK(g.wavenumber(15) == -1);
  CHECK(g.angular_frequency(3) == doctest::Approx(3.0));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(GridSpec::make(3, 1.0, 16), DomainError);
  CHECK_THROWS_AS(GridSpec::make(1, 1.0, 6), DomainError);
  CHECK_THROWS_AS(GridSpec::make(1, 1.0, 9), DomainError);
  CHECK_THROWS_AS(GridSpec::make(1, -1.0, 16), DomainError);
  CHECK_THROWS_AS(GridSpec::make(1, 1.0, 16, {0.0, 0.0}), DomainError);
}

TEST_CASE("field sample counts") {
  const auto g = GridSpec::make(2, 1.0, 8);
  RealField f(g, 3);
  CHECK(f.samples().size() == 3 * 64);
  CHECK_THROWS_AS(RealField(g, 1, std::vector<double>(10)), DomainError);
  DisplacementSlab s(g, uniform_heights(4, 1.0), 3);
  CHECK(s.values().size() == 4 * 3 * 64);
  CHECK(s.heights()[1] == doctest::Approx(0.25));
}
