#include <doctest.h>

#include <cmath>

#include "signorini/errors.hpp"
#include "signorini/oracle.hpp"
#include "signorini/pipeline.hpp"
#include "support/oracles.hpp"

using namespace signorini;

namespace {

RealField bump(const GridSpec& g) {
  RealField phi(g);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const double x = g.node_position(i)[0];
    phi(0, i) = std::max(0.3 - x * x, -0.2);
  }
  return phi;
}

const Cutoff kCut{{0.0, 0.0}, 1.5, 2.5};

OracleOptions sor() {
  OracleOptions o;
  o.omega = 1.7;
  o.tol = 1e-11;
  return o;
}

}  // namespace

TEST_CASE("strip mesh validation") {
  CHECK_NOTHROW(StripMesh::make(32, 32, 2.0 * M_PI, 2.0 * M_PI));
  CHECK_THROWS_AS(StripMesh::make(32, 8, 2.0 * M_PI, 2.0 * M_PI), DomainError);   // dt > h
  CHECK_THROWS_AS(StripMesh::make(33, 32, 2.0 * M_PI, 2.0 * M_PI), DomainError);
  CHECK_THROWS_AS(StripMesh::make(256, 32, 2.0 * M_PI, 1.0), DomainError);
  CHECK_THROWS_AS(StripMesh::make(32, 1, 2.0 * M_PI, 0.1), DomainError);
  const auto mesh = StripMesh::make(16, 16, 2.0 * M_PI, M_PI);
  CHECK(mesh.dt() == doctest::Approx(M_PI / 16));
  CHECK(mesh.force_heights().size() == 16);
  CHECK(mesh.grid().points_per_dim() == 16);
}

TEST_CASE("no contact gives the zero displacement") {
  const auto p = LameParams::derive(1.0, 1.0);
  const auto mesh = StripMesh::make(32, 32, 2.0 * M_PI, 2.0 * M_PI);
  const GridSpec g = mesh.grid();
  RealField phi(g);
  for (double& x : phi.samples()) x = -1.0;
  const auto s = direct_signorini_solve(p, mesh, std::nullopt, phi, cutoff_collar(g, kCut), sor());
  CHECK(s.converged);
  CHECK(oracle::max_abs(s.u1) == 0.0);
  CHECK(oracle::max_abs(s.un) == 0.0);
  for (auto c : s.contact) CHECK(c == 0);
}

TEST_CASE("symmetric obstacle, complementarity and pinned collar") {
  const auto p = LameParams::derive(1.0, 1.0);
  for (TopCondition top : {TopCondition::sliding, TopCondition::clamped}) {
    const auto mesh = StripMesh::make(32, 32, 2.0 * M_PI, 2.0 * M_PI, top);
    const GridSpec g = mesh.grid();
    const RealField phi = bump(g);
    const Mask collar = cutoff_collar(g, kCut);
    const auto s = direct_signorini_solve(p, mesh, std::nullopt, phi, collar, sor());
    REQUIRE(s.converged);
    CHECK(s.complementarity <= 1e-8);
    std::size_t contacts = 0;
    for (int i = 0; i < 32; ++i) {
      const std::size_t node = static_cast<std::size_t>(i);
      const std::size_t mirror = static_cast<std::size_t>((32 - i) % 32);
      CHECK(std::abs(s.trace(0, node) - s.trace(0, mirror)) < 1e-8);
      if (collar[node]) CHECK(s.trace(0, node) == 0.0);
      CHECK(s.trace(0, node) >= phi(0, node) - 1e-10);
      contacts += s.contact[node];
      CHECK(s.u(0, 1, i) == s.trace(0, node));
    }
    CHECK(contacts > 0);
    // trace is the first row of the stored displacement
    CHECK(s.un.size() == 33u * 32u);
  }
}

TEST_CASE("agrees with the spectral pipeline at N = M = 64") {
  const auto p = LameParams::derive(1.0, 1.0);
  const auto mesh = StripMesh::make(64, 64, 2.0 * M_PI, 2.0 * M_PI);
  const GridSpec g = mesh.grid();
  const RealField phi = bump(g);
  const auto direct = direct_signorini_solve(p, mesh, std::nullopt, phi, cutoff_collar(g, kCut), sor());
  REQUIRE(direct.converged);

  SignoriniOptions o;
  o.obstacle.tol = 1e-11;
  const auto spectral = signorini_solve(SignoriniProblem{p, g, std::nullopt, phi, kCut}, o);
  const double diff = oracle::max_abs_diff(spectral.trace_un.samples(), direct.trace.samples());
  MESSAGE("relative discrepancy " << diff / oracle::max_abs(spectral.trace_un.samples()));
  CHECK(diff <= 5e-2 * oracle::max_abs(spectral.trace_un.samples()));
  CHECK(spectral.contact_set == direct.contact);
}

TEST_CASE("force data must match the mesh") {
  const auto p = LameParams::derive(1.0, 1.0);
  const auto mesh = StripMesh::make(16, 16, 2.0 * M_PI, M_PI);
  const GridSpec g = mesh.grid();
  RealField phi(g);
  for (double& x : phi.samples()) x = -1.0;
  const DisplacementSlab wrong(g, uniform_heights(8, M_PI), 2);
  CHECK_THROWS_AS(direct_signorini_solve(p, mesh, wrong, phi, cutoff_collar(g, kCut)), DomainError);
}
