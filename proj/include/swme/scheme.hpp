#pragma once

/// Path-conservative PVM (Price-C) finite volume scheme with explicit and
/// semi-implicit time stepping.

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/LU>

#include "swme/hswme.hpp"
#include "swme/topography.hpp"

namespace swme {

/// Uniform 1D mesh with one ghost cell on each side (indices 0 and J + 1).
struct Grid {
  int J = 0;
  double x_a = 0.0, x_b = 1.0;
  std::vector<Vector> U;       // J + 2 conservative states
  std::vector<double> dbdx;    // J + 2 cell slopes (ghosts copy neighbours)

  Grid() = default;
  Grid(int cells, double xa, double xb, int order) : J(cells), x_a(xa), x_b(xb) {
    if (cells < 1) throw std::invalid_argument("Grid: need at least one cell");
    if (!(xb > xa)) throw std::invalid_argument("Grid: need x_b > x_a");
    if (order < 1) throw std::invalid_argument("Grid: order must be at least 1");
    U.assign(static_cast<std::size_t>(cells) + 2, Vector::Zero(order + 2));
    dbdx.assign(static_cast<std::size_t>(cells) + 2, 0.0);
  }

  int order() const { return static_cast<int>(U.front().size()) - 2; }
  double dx() const { return (x_b - x_a) / J; }
  double center(int j) const { return x_a + (j - 0.5) * dx(); }  // j = 1..J
  double face(int j) const { return x_a + j * dx(); }            // x_{j+1/2}, j = 0..J

  void set_bathymetry(const Bathymetry& bath) {
    for (int j = 1; j <= J; ++j) dbdx[j] = bath.cell_slope(face(j - 1), face(j));
    dbdx[0] = dbdx[1];
    dbdx[J + 1] = dbdx[J];
  }

  double mass() const {
    double m = 0.0;
    for (int j = 1; j <= J; ++j) m += U[j][0];
    return m * dx();
  }
};

/// U_0 = U_1, U_{J+1} = U_J.
inline void apply_transmissive_bc(Grid& g) {
  g.U[0] = g.U[1];
  g.U[g.J + 1] = g.U[g.J];
}

enum class StepMode { explicit_euler, semi_implicit };
enum class PathVariable { primitive, conservative };

struct StepperConfig {
  StepMode mode = StepMode::semi_implicit;
  double cfl = 0.05;
  double newton_tol = 1e-6;
  int newton_max_iter = 50;
  double fd_eps = 1e-7;
  double dt_max = 1e-3;  ///< step used when every cell is dry
  PathVariable path = PathVariable::primitive;

  void validate() const {
    if (!(cfl > 0.0) || !(cfl <= 1.0)) throw std::invalid_argument("StepperConfig: CFL must lie in (0, 1]");
    if (!(newton_tol > 0.0)) throw std::invalid_argument("StepperConfig: newton_tol must be positive");
    if (newton_max_iter < 1) throw std::invalid_argument("StepperConfig: newton_max_iter must be positive");
    if (!(fd_eps > 0.0)) throw std::invalid_argument("StepperConfig: fd_eps must be positive");
    if (!(dt_max > 0.0)) throw std::invalid_argument("StepperConfig: dt_max must be positive");
  }
};

/// Everything the scheme needs besides the grid.
struct Problem {
  const MomentBasis* basis = nullptr;
  const FrictionModel* friction = nullptr;
  SlopeSetting slope{};
  WetDryPolicy policy{};
};

struct StepStats {
  int newton_solves = 0;
  int newton_iterations = 0;
  int newton_max_iterations = 0;
  int assumption_violations = 0;  ///< wet cells breaking the friction law's sign assumptions
  int dry_cells = 0;
  int negative_heights = 0;       ///< cells whose transported height fell below zero
};

class StepError : public std::runtime_error {
 public:
  StepError(const std::string& what, int cell, double residual = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what + " (cell " + std::to_string(cell) + ")"), cell_(cell), residual_(residual) {}
  int cell() const { return cell_; }
  double residual() const { return residual_; }

 private:
  int cell_;
  double residual_;
};

namespace detail {

inline const QuadratureRule& three_point_rule() {
  static const QuadratureRule rule = gauss_rule(3);
  return rule;
}

inline PrimitiveState lerp(const PrimitiveState& a, const PrimitiveState& b, double s) {
  return PrimitiveState(a.h + s * (b.h - a.h), a.u_m + s * (b.u_m - a.u_m), a.alpha + s * (b.alpha - a.alpha));
}

}  // namespace detail

/// A_{j+1/2} = sum_l w_l A_H(Psi(s_l)) along the straight path between U_L and U_R.
inline Matrix roe_matrix(const Vector& UL, const Vector& UR, const SlopeSetting& s, const WetDryPolicy& policy,
                         PathVariable path = PathVariable::primitive) {
  if (UL.size() != UR.size()) throw std::invalid_argument("roe_matrix: state sizes differ");
  const auto& rule = detail::three_point_rule();
  const int m = static_cast<int>(UL.size());
  Matrix A = Matrix::Zero(m, m);
  if (path == PathVariable::primitive) {
    const PrimitiveState PL = to_primitive(ConservativeState(UL), policy);
    const PrimitiveState PR = to_primitive(ConservativeState(UR), policy);
    for (std::size_t l = 0; l < rule.size(); ++l)
      A += rule.weights[l] * system_matrix(detail::lerp(PL, PR, rule.nodes[l]), s);
  } else {
    for (std::size_t l = 0; l < rule.size(); ++l) {
      const Vector Us = UL + rule.nodes[l] * (UR - UL);
      A += rule.weights[l] * system_matrix(to_primitive(ConservativeState(Us), policy), s);
    }
  }
  return A;
}

/// Price-C: Q = dx / (2 dt) I + dt / (2 dx) A^2.
inline Matrix viscosity_matrix(const Matrix& A, double dx, double dt) {
  if (!(dx > 0.0) || !(dt > 0.0)) throw std::invalid_argument("viscosity_matrix: dx and dt must be positive");
  return dx / (2.0 * dt) * Matrix::Identity(A.rows(), A.cols()) + dt / (2.0 * dx) * (A * A);
}

struct Fluctuations {
  Vector minus;  ///< D^-: goes to the left cell
  Vector plus;   ///< D^+: goes to the right cell
};

inline Fluctuations fluctuations(const Matrix& A, const Vector& dU, double dx, double dt) {
  const Matrix Q = viscosity_matrix(A, dx, dt);
  return {0.5 * (A - Q) * dU, 0.5 * (A + Q) * dU};
}

inline Fluctuations fluctuations(const Vector& UL, const Vector& UR, double dx, double dt, const SlopeSetting& s,
                                 const WetDryPolicy& policy, PathVariable path = PathVariable::primitive) {
  return fluctuations(roe_matrix(UL, UR, s, policy, path), UR - UL, dx, dt);
}

/// Interface fluctuations with the dry-state rules: zero between two dry
/// cells; the wet state on both path ends next to a dry cell.
inline Fluctuations interface_fluctuations(const Vector& UL, const Vector& UR, double dx, double dt,
                                           const Problem& p, PathVariable path) {
  const bool dl = p.policy.is_dry(UL[0]), dr = p.policy.is_dry(UR[0]);
  if (dl && dr) return {Vector::Zero(UL.size()), Vector::Zero(UL.size())};
  const Vector dU = UR - UL;
  if (dl) return fluctuations(roe_matrix(UR, UR, p.slope, p.policy, path), dU, dx, dt);
  if (dr) return fluctuations(roe_matrix(UL, UL, p.slope, p.policy, path), dU, dx, dt);
  return fluctuations(roe_matrix(UL, UR, p.slope, p.policy, path), dU, dx, dt);
}

/// dt = CFL dx / max lambda over wet interior cells, or dt_max if all are dry.
inline double cfl_dt(const Grid& g, const Problem& p, const StepperConfig& cfg) {
  double lmax = 0.0;
  for (int j = 1; j <= g.J; ++j) {
    if (p.policy.is_dry(g.U[j][0])) continue;
    const PrimitiveState P = to_primitive(ConservativeState(g.U[j]), p.policy);
    lmax = std::max(lmax, max_wavespeed(P, p.slope.epsilon, p.slope.theta, p.policy));
  }
  if (!(lmax > 0.0)) return cfg.dt_max;
  return cfg.cfl * g.dx() / lmax;
}

namespace detail {

inline void check_problem(const Grid& g, const Problem& p) {
  if (p.basis == nullptr || p.friction == nullptr) throw std::invalid_argument("Problem: basis and friction required");
  if (g.order() != p.basis->order()) throw std::invalid_argument("Problem: grid order does not match basis");
}

inline Vector cell_source(const Vector& U, double dbdx, const Problem& p) {
  const PrimitiveState P = to_primitive(ConservativeState(U), p.policy);
  return source(P, *p.friction, p.slope, dbdx, *p.basis, p.policy);
}

/// Transport predictor for interior cells; ghosts must be current.
inline std::vector<Vector> transport(const Grid& g, double dt, const Problem& p, PathVariable path) {
  const double dx = g.dx();
  std::vector<Fluctuations> F;
  F.reserve(static_cast<std::size_t>(g.J) + 1);
  for (int j = 0; j <= g.J; ++j) F.push_back(interface_fluctuations(g.U[j], g.U[j + 1], dx, dt, p, path));
  std::vector<Vector> out(static_cast<std::size_t>(g.J) + 2);
  for (int j = 1; j <= g.J; ++j) out[j] = g.U[j] - dt / dx * (F[j - 1].plus + F[j].minus);
  return out;
}

/// Applies the post-transport dry rule. Returns true if the cell stays wet.
inline bool settle_dry(Vector& U, const WetDryPolicy& policy, StepStats& stats) {
  if (U[0] < 0.0) ++stats.negative_heights;
  if (!policy.is_dry(U[0])) return true;
  const double h = U[0];
  U.setZero();
  U[0] = h;
  ++stats.dry_cells;
  return false;
}

inline void check_finite(const Vector& U, int j, const char* phase) {
  if (!U.allFinite()) throw StepError(std::string("non-finite state after ") + phase, j);
}

inline void count_violations(const Grid& g, const Problem& p, StepStats& stats) {
  for (int j = 1; j <= g.J; ++j) {
    if (p.policy.is_dry(g.U[j][0])) continue;
    if (!p.friction->assumptions_hold(to_primitive(ConservativeState(g.U[j]), p.policy), *p.basis))
      ++stats.assumption_violations;
  }
}

/// Solves y = y_hat + dt S(h_hat, y) for the momentum block y by Newton's
/// method with a central-difference Jacobian. h is fixed since S_0 = 0.
inline Vector newton_source_solve(const Vector& U_hat, double dt, double dbdx, const Problem& p,
                                  const StepperConfig& cfg, int cell, int& iterations) {
  const int m = static_cast<int>(U_hat.size()) - 1;
  const auto residual = [&](const Vector& U) -> Vector {
    const Vector S = cell_source(U, dbdx, p);
    return (U.tail(m) - U_hat.tail(m)) / dt - S.tail(m);
  };
  Vector U = U_hat;
  Vector F = residual(U);
  iterations = 0;
  double norm = F.lpNorm<Eigen::Infinity>();
  Matrix Jac(m, m);
  while (norm > cfg.newton_tol) {
    if (iterations >= cfg.newton_max_iter)
      throw StepError("Newton solve did not converge, residual " + std::to_string(norm), cell, norm);
    for (int k = 0; k < m; ++k) {
      const double e = cfg.fd_eps * std::max(1.0, std::abs(U[k + 1]));
      Vector Up = U, Um = U;
      Up[k + 1] += e;
      Um[k + 1] -= e;
      Jac.col(k) = (residual(Up) - residual(Um)) / (2.0 * e);
    }
    const Vector delta = Jac.partialPivLu().solve(-F);
    if (!delta.allFinite()) throw StepError("Newton step is not finite", cell, norm);
    // Backtrack when the full step does not reduce the residual.
    double lambda = 1.0;
    Vector trial = U;
    Vector Ft;
    for (int k = 0; k < 30; ++k) {
      trial.tail(m) = U.tail(m) + lambda * delta;
      Ft = residual(trial);
      if (Ft.allFinite() && Ft.lpNorm<Eigen::Infinity>() < norm) break;
      lambda *= 0.5;
    }
    U = trial;
    F = Ft;
    norm = F.lpNorm<Eigen::Infinity>();
    ++iterations;
    if (!std::isfinite(norm)) throw StepError("Newton residual is not finite", cell, norm);
  }
  return U;
}

}  // namespace detail

/// U^{n+1} = U^n - dt/dx (D+_{j-1/2} + D-_{j+1/2}) + dt S(U^n).
inline StepStats step_explicit(Grid& g, double dt, const Problem& p, const StepperConfig& cfg = {}) {
  detail::check_problem(g, p);
  if (!(dt > 0.0)) throw std::invalid_argument("step_explicit: dt must be positive");
  StepStats stats;
  apply_transmissive_bc(g);
  std::vector<Vector> next = detail::transport(g, dt, p, cfg.path);
  for (int j = 1; j <= g.J; ++j) {
    detail::check_finite(next[j], j, "transport");
    if (!detail::settle_dry(next[j], p.policy, stats)) continue;
    if (p.policy.is_dry(g.U[j][0])) continue;
    next[j] += dt * detail::cell_source(g.U[j], g.dbdx[j], p);
    detail::check_finite(next[j], j, "source");
  }
  for (int j = 1; j <= g.J; ++j) g.U[j] = std::move(next[j]);
  apply_transmissive_bc(g);
  detail::count_violations(g, p, stats);
  return stats;
}

/// Transport predictor followed by a per-cell implicit source solve.
inline StepStats step_semi_implicit(Grid& g, double dt, const Problem& p, const StepperConfig& cfg = {}) {
  detail::check_problem(g, p);
  if (!(dt > 0.0)) throw std::invalid_argument("step_semi_implicit: dt must be positive");
  StepStats stats;
  apply_transmissive_bc(g);
  std::vector<Vector> next = detail::transport(g, dt, p, cfg.path);
  for (int j = 1; j <= g.J; ++j) {
    detail::check_finite(next[j], j, "transport");
    if (!detail::settle_dry(next[j], p.policy, stats)) continue;
    int iters = 0;
    next[j] = detail::newton_source_solve(next[j], dt, g.dbdx[j], p, cfg, j, iters);
    detail::check_finite(next[j], j, "source solve");
    ++stats.newton_solves;
    stats.newton_iterations += iters;
    stats.newton_max_iterations = std::max(stats.newton_max_iterations, iters);
  }
  for (int j = 1; j <= g.J; ++j) g.U[j] = std::move(next[j]);
  apply_transmissive_bc(g);
  detail::count_violations(g, p, stats);
  return stats;
}

inline StepStats step(Grid& g, double dt, const Problem& p, const StepperConfig& cfg) {
  return cfg.mode == StepMode::explicit_euler ? step_explicit(g, dt, p, cfg) : step_semi_implicit(g, dt, p, cfg);
}

}  // namespace swme
