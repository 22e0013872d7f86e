#include <doctest.h>

#include <cmath>
#include <functional>

#include "signorini/errors.hpp"
#include "signorini/obstacle.hpp"
#include "support/oracles.hpp"

using namespace signorini;

namespace {

ObstacleProblem make_problem(const GridSpec& g, double radius, const std::function<double(double, double)>& psi,
                             double c = 1.0) {
  ObstacleProblem p{RealField(g), RealField(g), Mask(g.node_count(), 0), Mask(g.node_count(), 0), c};
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto x = g.node_position(i);
    const double rho = std::hypot(x[0], x[1]);
    p.window[i] = rho < radius;
    p.collar[i] = !p.window[i];
    p.psi(0, i) = psi(x[0], x[1]);
  }
  return p;
}

ObstacleOptions tight() {
  ObstacleOptions o;
  o.tol = 1e-12;
  o.max_iter = 200000;
  o.record_log = false;
  return o;
}

}  // namespace

TEST_CASE("obstacle below zero leaves v = 0") {
  const auto g = GridSpec::make(1, 2.0 * M_PI, 64);
  const auto p = make_problem(g, 2.5, [](double, double) { return -1.0; });
  const auto s = obstacle_solve(p);
  CHECK(s.converged);
  CHECK(oracle::max_abs(s.v.samples()) == 0.0);
  CHECK(s.free_boundary.empty());
  for (auto a : s.active_set) CHECK(a == 0);
}

TEST_CASE("agrees with projected SOR on the dense matrix") {
  struct Case {
    int n;
    double c;
  };
  for (Case k : {Case{32, 1.0}, Case{64, 4.0 / 3.0}, Case{64, 0.37}}) {
    const auto g = GridSpec::make(1, 2.0 * M_PI, k.n);
    const auto p = make_problem(g, 2.0, [](double x, double) { return 0.5 - x * x; }, k.c);
    const auto s = obstacle_solve(p, tight());
    REQUIRE(s.converged);
    const auto a = oracle::dense_half_laplacian(k.n, 2.0 * M_PI, k.c);
    const auto ref = oracle::dense_psor(a, p.psi.samples(), p.rhs.samples(), p.window, p.collar);
    CAPTURE(k.n);
    CHECK(oracle::max_abs_diff(s.v.samples(), ref.v) <= 1e-6);
  }
}

TEST_CASE("homogeneous of degree one in psi") {
  const auto g = GridSpec::make(1, 2.0 * M_PI, 128);
  const auto p1 = make_problem(g, 2.0, [](double x, double) { return 0.5 - x * x; });
  const auto p2 = make_problem(g, 2.0, [](double x, double) { return 2.0 * (0.5 - x * x); });
  const auto s1 = obstacle_solve(p1, tight());
  const auto s2 = obstacle_solve(p2, tight());
  for (std::size_t i = 0; i < g.node_count(); ++i) CHECK(std::abs(s2.v(0, i) - 2.0 * s1.v(0, i)) < 1e-8);
}

TEST_CASE("plain projected gradient decreases the energy") {
  const auto g = GridSpec::make(1, 2.0 * M_PI, 64);
  const auto p = make_problem(g, 2.0, [](double x, double) { return 0.3 - x * x; });
  ObstacleOptions o;
  o.method = ObstacleMethod::projected_gradient;
  o.max_iter = 2000;
  o.tol = 1e-10;
  const auto s = obstacle_solve(p, o);
  REQUIRE(s.log.size() > 2);
  for (std::size_t k = 1; k < s.log.size(); ++k) CHECK(s.log[k].energy <= s.log[k - 1].energy + 1e-14);
  CHECK(obstacle_energy(p, s.v) == doctest::Approx(s.log.back().energy));
}

TEST_CASE("feasibility, symmetry and complementarity of the solution") {
  for (int d : {1, 2}) {
    const auto g = GridSpec::make(d, 2.0 * M_PI, d == 1 ? 128 : 32);
    const auto p = make_problem(g, 2.5, [](double x, double y) { return 0.3 - x * x - 0.5 * y * y; });
    const auto s = obstacle_solve(p, tight());
    CHECK(s.converged);
    CHECK(complementarity_residual(p, s.v) <= 1e-12);
    const int n = g.points_per_dim();
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      if (p.collar[i]) CHECK(s.v(0, i) == 0.0);
      if (p.window[i]) CHECK(s.v(0, i) >= p.psi(0, i) - 1e-14);
      auto idx = g.node_indices(i);
      for (int a = 0; a < d; ++a) idx[a] = (n - idx[a]) % n;
      CHECK(std::abs(s.v(0, i) - s.v(0, g.node_at(idx))) < 1e-8);
    }
  }
}

TEST_CASE("complementarity residual examples") {
  const auto g = GridSpec::make(1, 2.0 * M_PI, 64);
  const auto below = make_problem(g, 2.0, [](double, double) { return -1.0; });
  CHECK(complementarity_residual(below, RealField(g)) == 0.0);
  const auto above = make_problem(g, 2.0, [](double x, double) { return 0.5 - x * x; });
  CHECK(complementarity_residual(above, RealField(g)) == doctest::Approx(0.5));
}

TEST_CASE("free boundary of a half-line mask") {
  const auto g = GridSpec::make(1, 2.0 * M_PI, 64);
  ObstacleSolution s{RealField(g), RealField(g), Mask(g.node_count(), 1), {}, 1e-9, {}, 0.0, 0, true, {}};
  for (std::size_t i = 0; i < g.node_count(); ++i) s.gap(0, i) = std::max(g.node_position(i)[0], 0.0);
  s.active_set = threshold_mask(s.gap, s.window, s.active_tol);
  const auto pts = extract_free_boundary(s);
  REQUIRE(pts.size() == 1);
  CHECK(std::abs(pts[0].position[0]) < 1e-6);
  CHECK(pts[0].contact_node == g.node_at({32, 0}));
  CHECK(pts[0].free_node == g.node_at({33, 0}));

  for (auto& a : s.active_set) a = 0;
  CHECK(extract_free_boundary(s).empty());
}

TEST_CASE("free boundary in 2D lies on a circle") {
  const auto g = GridSpec::make(2, 2.0 * M_PI, 64);
  const auto p = make_problem(g, 2.8, [](double x, double y) { return 0.3 - x * x - y * y; });
  ObstacleOptions o;
  o.tol = 1e-10;
  o.record_log = false;
  const auto s = obstacle_solve(p, o);
  REQUIRE(s.converged);
  REQUIRE(s.free_boundary.size() >= 8);
  double mean = 0.0;
  for (const auto& fb : s.free_boundary) mean += std::hypot(fb.position[0], fb.position[1]);
  mean /= static_cast<double>(s.free_boundary.size());
  for (const auto& fb : s.free_boundary) {
    CHECK(std::abs(std::hypot(fb.position[0], fb.position[1]) - mean) < 1.5 * g.spacing());
  }
}

TEST_CASE("problem validation") {
  const auto g = GridSpec::make(1, 2.0 * M_PI, 32);
  auto p = make_problem(g, 2.0, [](double, double) { return 0.1; });
  CHECK_THROWS_WITH_AS(obstacle_solve(p), doctest::Contains("infeasible"), DomainError);

  auto overlap = make_problem(g, 2.0, [](double, double) { return -1.0; });
  overlap.window[0] = 1;
  CHECK_THROWS_AS(overlap.validate(), DomainError);

  auto open = make_problem(g, 2.0, [](double, double) { return -1.0; });
  for (auto& c : open.collar) c = 0;
  CHECK_THROWS_AS(open.validate(), DomainError);

  auto bad_c = make_problem(g, 2.0, [](double, double) { return -1.0; }, 0.0);
  CHECK_THROWS_AS(bad_c.validate(), DomainError);
}
