#pragma once

#include <optional>
#include <vector>

#include "signorini/params_grid.hpp"

namespace signorini {

/// Condition on the top row t = T of the strip. clamped: u = 0.
/// sliding: u^1 = 0 and d_t u^n = 0 (mirror symmetry about t = T).
enum class TopCondition { clamped, sliding };

/// Periodic-in-x strip [-L/2, L/2) x [0, T] with N x (M+1) nodes, n = 2.
class StripMesh {
 public:
  /// Throws DomainError unless N is even and 8 <= N <= 128, 2 <= M <= 128 and dt <= h.
  static StripMesh make(int points, int levels, double period, double depth,
                        TopCondition top = TopCondition::sliding);

  int points() const { return n_; }
  int levels() const { return m_; }
  double period() const { return period_; }
  double depth() const { return depth_; }
  TopCondition top() const { return top_; }
  double h() const { return period_ / n_; }
  double dt() const { return depth_ / m_; }
  /// Tangential grid of the t = 0 row.
  GridSpec grid() const;
  /// Heights m dt, m = 0..M-1 (the levels a force slab is sampled on).
  std::vector<double> force_heights() const;

 private:
  StripMesh() = default;
  int n_ = 0, m_ = 0;
  double period_ = 0, depth_ = 0;
  TopCondition top_ = TopCondition::sliding;
};

struct OracleOptions {
  int max_iter = 400000;
  /// Largest nodal update of a sweep (displacement units) at convergence.
  double tol = 1e-11;
  /// Over-relaxation factor; 1 is plain projected Gauss-Seidel.
  double omega = 1.0;
  int log_every = 100;
};

struct SweepRecord {
  int sweep = 0;
  double update = 0;
};

struct DirectSolution {
  StripMesh mesh;
  /// Level-major samples, (M+1) x N per component.
  std::vector<double> u1, un;
  RealField trace;      // u^n on t = 0
  RealField traction;   // -(2mu+lambda) D_t u^n - lambda D_x u^1 on t = 0
  Mask contact;
  std::vector<SweepRecord> log;
  double update = 0;            // last sweep's largest change
  double complementarity = 0;   // max |min(traction, u^n - phi)| off the collar
  int iterations = 0;
  bool converged = false;

  double u(int level, int component, int i) const;
};

/// Finite-difference Lame system with the Signorini condition on t = 0, solved
/// by projected SOR. `collar` pins u^n = 0 on the t = 0 row where set. The
/// force, if given, is sampled on mesh.force_heights().
DirectSolution direct_signorini_solve(const LameParams& params, const StripMesh& mesh,
                                      const std::optional<DisplacementSlab>& force,
                                      const RealField& phi, const Mask& collar,
                                      const OracleOptions& opts = {});

}  // namespace signorini
