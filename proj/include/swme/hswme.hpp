#pragma once

/// Hyperbolic shallow water moment system: transport matrix, source vector,
/// wave speed bound and the equilibrium residual.

#include <complex>

#include <Eigen/Eigenvalues>

#include "swme/friction.hpp"

namespace swme {

/// Physical setting shared by the transport and source terms.
struct SlopeSetting {
  double epsilon = 0.01;  ///< aspect ratio H / L
  double theta = 0.0;     ///< inclination [rad]
  /// Sign applied to the epsilon h db/dx term of the momentum source. The
  /// default -1 follows the general source definition; +1 flips it.
  double topography_sign = -1.0;
};

/// A_H(h, u_m, alpha), unknown ordering (h, h u_m, h alpha_1, ..., h alpha_N).
inline Matrix system_matrix(const PrimitiveState& P, double epsilon, double theta) {
  const int n = P.order();
  if (n < 1) throw std::invalid_argument("system_matrix: order must be at least 1");
  const int m = n + 2;
  const double u = P.u_m, a1 = P.alpha[0];
  Matrix A = Matrix::Zero(m, m);
  A(0, 1) = 1.0;
  A(1, 0) = epsilon * std::cos(theta) * P.h - u * u - a1 * a1 / 3.0;
  A(1, 1) = 2.0 * u;
  A(1, 2) = 2.0 / 3.0 * a1;
  A(2, 0) = -2.0 * u * a1;
  A(2, 1) = 2.0 * a1;
  if (n >= 2) A(3, 0) = -2.0 / 3.0 * a1 * a1;
  for (int i = 1; i <= n; ++i) {
    const int r = i + 1;
    A(r, r) = u;
    if (i < n) A(r, r + 1) = (i + 2.0) / (2.0 * i + 3.0) * a1;
    if (i >= 2) A(r, r - 1) = (i - 1.0) / (2.0 * i - 1.0) * a1;
  }
  return A;
}

inline Matrix system_matrix(const PrimitiveState& P, const SlopeSetting& s) {
  return system_matrix(P, s.epsilon, s.theta);
}

/// Source vector S(U) for a wet cell.
inline Vector source(const PrimitiveState& P, const FrictionModel& friction, const SlopeSetting& s, double dbdx,
                     const MomentBasis& basis, const WetDryPolicy& policy = WetDryPolicy{}) {
  if (policy.is_dry(P.h))
    throw std::domain_error("source: dry cell (h = " + std::to_string(P.h) + ") has no source contribution");
  const int n = basis.order();
  const double c = std::cos(s.theta);
  const double tau_b = friction.bottom_stress(P, basis);
  const double tau_s = friction.surface_stress();
  const Vector T = friction.bulk_terms(P, basis);
  Vector S = Vector::Zero(n + 2);
  S[1] = std::sin(s.theta) * P.h + c * (tau_s - tau_b + s.topography_sign * s.epsilon * P.h * dbdx);
  double parity = -1.0;
  for (int i = 1; i <= n; ++i, parity = -parity)
    S[i + 1] = (2.0 * i + 1.0) * c * (parity * tau_s - tau_b - T[i - 1]);
  return S;
}

/// Largest |eigenvalue| of A_H; zero for dry cells.
inline double max_wavespeed(const PrimitiveState& P, double epsilon, double theta,
                            const WetDryPolicy& policy = WetDryPolicy{}) {
  if (policy.is_dry(P.h)) return 0.0;
  const Matrix A = system_matrix(P, epsilon, theta);
  Eigen::EigenSolver<Matrix> es(A, false);
  if (es.info() == Eigen::Success) {
    const double r = es.eigenvalues().cwiseAbs().maxCoeff();
    if (std::isfinite(r)) return r;
  }
  return A.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Eigenvalues of A_H, for diagnostics and hyperbolicity checks.
inline Eigen::VectorXcd eigenvalues(const PrimitiveState& P, double epsilon, double theta) {
  Eigen::EigenSolver<Matrix> es(system_matrix(P, epsilon, theta), false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalues: eigen solver failed");
  return es.eigenvalues();
}

/// (h tan(theta) - tau_b, T_1 + tau_b, ..., T_N + tau_b) on a flat bed with a
/// stress-free surface. Vanishes exactly at a uniform steady state.
inline Vector equilibrium_residual(const PrimitiveState& P, const FrictionModel& friction, double theta,
                                   const MomentBasis& basis) {
  const int n = basis.order();
  const double tau_b = friction.bottom_stress(P, basis);
  const Vector T = friction.bulk_terms(P, basis);
  Vector r(n + 1);
  r[0] = P.h * std::tan(theta) - tau_b;
  for (int i = 0; i < n; ++i) r[i + 1] = T[i] + tau_b;
  return r;
}

}  // namespace swme
