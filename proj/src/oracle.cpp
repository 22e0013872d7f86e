#include "signorini/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "signorini/errors.hpp"

namespace signorini {

StripMesh StripMesh::make(int points, int levels, double period, double depth, TopCondition top) {
  if (points < 8 || points % 2 != 0 || points > 128) {
    throw DomainError("strip needs an even N with 8 <= N <= 128");
  }
  if (levels < 2 || levels > 128) throw DomainError("strip needs 2 <= M <= 128");
  if (!(period > 0.0) || !(depth > 0.0)) throw DomainError("strip period and depth must be positive");
  StripMesh m;
  m.n_ = points;
  m.m_ = levels;
  m.period_ = period;
  m.depth_ = depth;
  m.top_ = top;
  if (m.dt() > m.h() * (1.0 + 1e-12)) {
    throw DomainError("strip is anisotropic: dt = " + std::to_string(m.dt()) + " > h = " +
                      std::to_string(m.h()));
  }
  return m;
}

GridSpec StripMesh::grid() const { return GridSpec::make(1, period_, n_); }

std::vector<double> StripMesh::force_heights() const { return uniform_heights(m_, depth_); }

double DirectSolution::u(int level, int component, int i) const {
  const std::size_t idx = static_cast<std::size_t>(level) * mesh.points() + i;
  return component == 0 ? u1[idx] : un[idx];
}

DirectSolution direct_signorini_solve(const LameParams& params, const StripMesh& mesh,
                                      const std::optional<DisplacementSlab>& force,
                                      const RealField& phi, const Mask& collar,
                                      const OracleOptions& opts) {
  const int n = mesh.points();
  const int levels = mesh.levels();
  const GridSpec grid = mesh.grid();
  if (phi.components() != 1 || phi.grid().points_per_dim() != n || phi.grid().boundary_dim() != 1) {
    throw DomainError("oracle obstacle must be a scalar field on the strip's t = 0 row");
  }
  if (!collar.empty() && collar.size() != static_cast<std::size_t>(n)) {
    throw DomainError("oracle collar must cover the t = 0 row");
  }
  if (force && (force->components() != 2 || force->level_count() != static_cast<std::size_t>(levels) ||
                force->grid().points_per_dim() != n)) {
    throw DomainError("oracle force must have 2 components on the strip's M levels");
  }
  if (!(opts.omega > 0.0 && opts.omega < 2.0)) throw DomainError("SOR factor must lie in (0, 2)");

  const bool sliding = mesh.top() == TopCondition::sliding;
  if (sliding && std::none_of(collar.begin(), collar.end(), [](auto c) { return c != 0; })) {
    throw DomainError("sliding top needs a nonempty collar to fix the normal translation");
  }
  const double mu = params.mu();
  const double lam = params.lambda();
  const double p = 2.0 * mu + lam;
  const double h = mesh.h();
  const double dt = mesh.dt();
  const double ih2 = 1.0 / (h * h);
  const double it2 = 1.0 / (dt * dt);
  const double ixt = 1.0 / (4.0 * h * dt);
  const double omega = opts.omega;

  const std::size_t rows = static_cast<std::size_t>(levels + 1);
  std::vector<double> u1(rows * n, 0.0), un(rows * n, 0.0);
  auto at = [n](int m, int i) { return static_cast<std::size_t>(m) * n + ((i % n) + n) % n; };
  auto f = [&](int m, int c, int i) { return (force && m < levels) ? (*force)(m, c, i) : 0.0; };
  auto pinned = [&](int i) { return !collar.empty() && collar[i]; };

  DirectSolution out{mesh, {}, {}, RealField(grid), RealField(grid), Mask(n, 0), {}, 0.0, 0.0, 0, false};

  const double diag1 = 2.0 * p * ih2 + 2.0 * mu * it2;
  const double diagn = 2.0 * mu * ih2 + 2.0 * p * it2;
  int sweep = 0;
  double update = 0.0;
  auto relax = [&](double& x, double target) {
    const double next = (1.0 - omega) * x + omega * target;
    const double change = std::abs(next - x);
    if (!(change <= update) && !std::isnan(update)) update = change;  // NaN sticks
    x = next;
  };

  do {
    ++sweep;
    update = 0.0;
    // t = 0 row: tangential traction row, then the projected normal row.
    for (int i = 0; i < n; ++i) {
      const double dxn = (un[at(0, i + 1)] - un[at(0, i - 1)]) / (2.0 * h);
      relax(u1[at(0, i)], (4.0 * u1[at(1, i)] - u1[at(2, i)] + 2.0 * dt * dxn) / 3.0);
      if (pinned(i)) {
        relax(un[at(0, i)], 0.0);
        continue;
      }
      const double dx1 = (u1[at(0, i + 1)] - u1[at(0, i - 1)]) / (2.0 * h);
      const double free = (4.0 * un[at(1, i)] - un[at(2, i)]) / 3.0 + 2.0 * dt * lam * dx1 / (3.0 * p);
      const double next = std::max((1.0 - omega) * un[at(0, i)] + omega * free, phi(0, i));
      const double change = std::abs(next - un[at(0, i)]);
      if (!(change <= update) && !std::isnan(update)) update = change;
      un[at(0, i)] = next;
    }
    for (int m = 1; m < levels; ++m) {
      for (int i = 0; i < n; ++i) {
        const double cross_n = (un[at(m + 1, i + 1)] - un[at(m + 1, i - 1)] - un[at(m - 1, i + 1)] +
                                un[at(m - 1, i - 1)]) * ixt;
        const double off1 = p * (u1[at(m, i + 1)] + u1[at(m, i - 1)]) * ih2 +
                            mu * (u1[at(m + 1, i)] + u1[at(m - 1, i)]) * it2 + (mu + lam) * cross_n;
        relax(u1[at(m, i)], (off1 - f(m, 0, i)) / diag1);
        const double cross_1 = (u1[at(m + 1, i + 1)] - u1[at(m + 1, i - 1)] - u1[at(m - 1, i + 1)] +
                                u1[at(m - 1, i - 1)]) * ixt;
        const double offn = mu * (un[at(m, i + 1)] + un[at(m, i - 1)]) * ih2 +
                            p * (un[at(m + 1, i)] + un[at(m - 1, i)]) * it2 + (mu + lam) * cross_1;
        relax(un[at(m, i)], (offn - f(m, 1, i)) / diagn);
      }
    }
    if (sliding) {
      // Mirror about t = T: u^1 odd (zero on the row), u^n even.
      for (int i = 0; i < n; ++i) {
        const double cross_1 = -(u1[at(levels - 1, i + 1)] - u1[at(levels - 1, i - 1)]) / (2.0 * h * dt);
        const double offn = mu * (un[at(levels, i + 1)] + un[at(levels, i - 1)]) * ih2 +
                            2.0 * p * un[at(levels - 1, i)] * it2 + (mu + lam) * cross_1;
        relax(un[at(levels, i)], offn / diagn);
      }
    }
    if (opts.log_every > 0 && (sweep % opts.log_every == 0 || sweep == 1)) {
      out.log.push_back({sweep, update});
    }
  } while (update > opts.tol && std::isfinite(update) && sweep < opts.max_iter);

  out.iterations = sweep;
  out.update = update;
  out.converged = std::isfinite(update) && update <= opts.tol;
  if (opts.log_every > 0 && (out.log.empty() || out.log.back().sweep != sweep)) {
    out.log.push_back({sweep, update});
  }

  const double active_tol = 10.0 * opts.tol;
  for (int i = 0; i < n; ++i) {
    out.trace(0, i) = un[at(0, i)];
    const double dtn = (-3.0 * un[at(0, i)] + 4.0 * un[at(1, i)] - un[at(2, i)]) / (2.0 * dt);
    const double dx1 = (u1[at(0, i + 1)] - u1[at(0, i - 1)]) / (2.0 * h);
    out.traction(0, i) = -p * dtn - lam * dx1;
    if (pinned(i)) continue;
    const double gap = un[at(0, i)] - phi(0, i);
    out.contact[i] = gap <= active_tol;
    out.complementarity = std::max(out.complementarity, std::abs(std::min(out.traction(0, i), gap)));
  }
  out.u1 = std::move(u1);
  out.un = std::move(un);
  return out;
}

}  // namespace signorini
