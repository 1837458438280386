#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace swme {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Minimum-height threshold separating wet from dry cells.
struct WetDryPolicy {
  double h_min = 1e-6;

  explicit WetDryPolicy(double threshold = 1e-6) : h_min(threshold) {
    if (!(threshold > 0.0) || !std::isfinite(threshold))
      throw std::invalid_argument("WetDryPolicy: h_min must be positive and finite");
  }

  /// Cells with h <= h_min are dry, boundary included.
  bool is_dry(double h) const { return h <= h_min; }
  bool is_wet(double h) const { return !is_dry(h); }
};

/// (h, h u_m, h alpha_1, ..., h alpha_N), dimensionless.
struct ConservativeState {
  Vector u;

  ConservativeState() = default;
  explicit ConservativeState(Vector values) : u(std::move(values)) {}

  int order() const { return static_cast<int>(u.size()) - 2; }
  double h() const { return u[0]; }
  double momentum() const { return u[1]; }
  double moment(int i) const { return u[1 + i]; }  // h alpha_i, i = 1..N
};

/// (h, u_m, alpha_1..alpha_N).
struct PrimitiveState {
  double h = 0.0;
  double u_m = 0.0;
  Vector alpha;

  PrimitiveState() = default;
  PrimitiveState(double height, double mean_velocity, Vector moments)
      : h(height), u_m(mean_velocity), alpha(std::move(moments)) {}

  int order() const { return static_cast<int>(alpha.size()); }
  double alpha1() const { return alpha.size() > 0 ? alpha[0] : 0.0; }
};

/// Velocity recovery 2h v / (h^2 + max(h^2, h_min)); zero in dry cells.
inline PrimitiveState to_primitive(const ConservativeState& U, const WetDryPolicy& policy) {
  if (U.u.size() < 3) throw std::invalid_argument("to_primitive: state needs at least 3 components");
  if (!U.u.allFinite()) throw std::domain_error("to_primitive: non-finite conservative state");
  const double h = U.h();
  PrimitiveState P(h, 0.0, Vector::Zero(U.order()));
  if (policy.is_dry(h)) return P;
  const double h2 = h * h;
  const double factor = 2.0 * h / (h2 + std::max(h2, policy.h_min));
  P.u_m = factor * U.u[1];
  for (int i = 0; i < P.order(); ++i) P.alpha[i] = factor * U.u[2 + i];
  return P;
}

inline ConservativeState to_conservative(const PrimitiveState& P) {
  if (!(P.h >= 0.0)) throw std::domain_error("to_conservative: negative height " + std::to_string(P.h));
  if (!std::isfinite(P.h) || !std::isfinite(P.u_m) || !P.alpha.allFinite())
    throw std::domain_error("to_conservative: non-finite primitive state");
  Vector u(P.order() + 2);
  u[0] = P.h;
  u[1] = P.h * P.u_m;
  for (int i = 0; i < P.order(); ++i) u[2 + i] = P.h * P.alpha[i];
  return ConservativeState(std::move(u));
}

inline bool is_dry(double h, const WetDryPolicy& policy) { return policy.is_dry(h); }

}  // namespace swme
