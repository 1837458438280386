#pragma once

/// Friction laws entering the moment-equation source.
///
/// Every law supplies three pieces evaluated on a wet primitive state:
///   - the bottom stress tau_b   (tau_xz at zeta = 0),
///   - the surface stress tau_s  (tau_xz at zeta = 1, zero for all laws here),
///   - the bulk terms T_i = int_0^1 tau_xz phi_i' dzeta, i = 1..N.
/// All quantities are dimensionless.

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include "swme/basis.hpp"
#include "swme/state.hpp"

namespace swme {

/// sgn with sgn(0) = 0.
inline double sign(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

/// Direction of shear for rate-dependent laws. Where the shear rate is exactly
/// zero the one-sided limit in the direction of basal slip is used, so a rigid
/// plug sliding at u~(0) > 0 carries the yield stress mu_s p; a plug at rest
/// carries none.
inline double shear_direction(double shear_rate, double slip_velocity) {
  return shear_rate != 0.0 ? sign(shear_rate) : sign(slip_velocity);
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Dimensional inputs (SI). Unused entries may stay zero.
struct PhysicalParameters {
  double g = 9.81;          ///< gravitational acceleration [m/s^2]
  double H = 0.1;           ///< vertical length scale [m]
  double L = 10.0;          ///< horizontal length scale [m]
  double theta = 0.0;       ///< inclination [rad]
  double rho = 1200.0;      ///< bulk density [kg/m^3]
  double rho_s = 2500.0;    ///< grain density [kg/m^3]
  double eta = 0.0;         ///< bulk viscosity [Pa s]
  double eta0 = 0.0;        ///< basal slip viscosity [Pa s]
  double slip_length = 0.0; ///< Lambda [m]
  double manning_n = 0.0;   ///< Manning coefficient [s m^(-1/3)]
  double I0 = 0.0;          ///< mu(I) reference inertial number
  double d_s = 0.0;         ///< grain diameter [m]
};

struct DimensionlessParameters {
  double epsilon = 0.0;         ///< H / L
  double velocity_scale = 0.0;  ///< U = sqrt(g L) [m/s]
  double nu = 0.0;              ///< eta U / (rho g cos(theta) H^2)
  double nu0 = 0.0;             ///< same with eta0
  double lambda = 0.0;          ///< Lambda / H
  double manning2 = 0.0;        ///< n^2 U^2 / (H^(4/3) cos(theta))
  double c_I = 0.0;             ///< (I0 H / d_s) sqrt((rho / rho_s) epsilon cos(theta))
};

inline DimensionlessParameters derive_dimensionless(const PhysicalParameters& p) {
  if (!(p.H > 0.0) || !(p.L > 0.0) || !(p.g > 0.0) || !(p.rho > 0.0))
    throw std::invalid_argument("derive_dimensionless: H, L, g and rho must be positive");
  if (!(p.theta >= 0.0) || !(p.theta < std::numbers::pi / 2.0))
    throw std::invalid_argument("derive_dimensionless: theta must lie in [0, pi/2)");
  const double cos_theta = std::cos(p.theta);
  if (!(cos_theta > 1e-12)) throw std::invalid_argument("derive_dimensionless: cos(theta) vanishes");
  if (p.eta < 0.0 || p.eta0 < 0.0 || p.slip_length < 0.0 || p.manning_n < 0.0 || p.I0 < 0.0 || p.d_s < 0.0)
    throw std::invalid_argument("derive_dimensionless: material parameters must be non-negative");

  DimensionlessParameters d;
  d.epsilon = p.H / p.L;
  d.velocity_scale = std::sqrt(p.g * p.L);
  const double stress_scale = p.rho * p.g * cos_theta * p.H * p.H;
  d.nu = p.eta * d.velocity_scale / stress_scale;
  d.nu0 = p.eta0 * d.velocity_scale / stress_scale;
  d.lambda = p.slip_length / p.H;
  d.manning2 = p.manning_n * p.manning_n * d.velocity_scale * d.velocity_scale /
               (std::pow(p.H, 4.0 / 3.0) * cos_theta);
  if (p.I0 > 0.0) {
    if (!(p.d_s > 0.0) || !(p.rho_s > 0.0))
      throw std::invalid_argument("derive_dimensionless: mu(I) needs positive d_s and rho_s");
    d.c_I = (p.I0 * p.H / p.d_s) * std::sqrt((p.rho / p.rho_s) * d.epsilon * cos_theta);
  }
  return d;
}

/// Contract implemented by every friction law.
class FrictionModel {
 public:
  virtual ~FrictionModel() = default;

  virtual std::string name() const = 0;
  virtual double bottom_stress(const PrimitiveState& P, const MomentBasis& basis) const = 0;
  virtual double surface_stress() const { return 0.0; }
  virtual Vector bulk_terms(const PrimitiveState& P, const MomentBasis& basis) const = 0;

  /// False when the state violates a sign assumption the law's closed form
  /// relies on (positive velocity, increasing profile). Diagnostic only.
  virtual bool assumptions_hold(const PrimitiveState&, const MomentBasis&) const { return true; }

 protected:
  static void require_wet(const PrimitiveState& P, const MomentBasis& basis, const char* who) {
    if (!(P.h > 0.0) || !std::isfinite(P.h))
      throw std::domain_error(std::string(who) + ": friction requires a wet state (h > 0), got h = " +
                              std::to_string(P.h));
    if (P.order() != basis.order())
      throw std::invalid_argument(std::string(who) + ": state order does not match basis order");
  }
};

using FrictionPtr = std::shared_ptr<const FrictionModel>;

namespace detail {

inline double bottom_velocity(const PrimitiveState& P, const MomentBasis& basis) {
  return basis.bottom_velocity(P.u_m, {P.alpha.data(), static_cast<std::size_t>(P.alpha.size())});
}

/// T_i = (nu / h) sum_j C_ij alpha_j
inline Vector newtonian_bulk(const PrimitiveState& P, const MomentBasis& basis, double nu) {
  const int n = basis.order();
  Vector T = Vector::Zero(n);
  for (int i = 1; i <= n; ++i) {
    double s = 0.0;
    for (int j = 1; j <= n; ++j) s += basis.C(i, j) * P.alpha[j - 1];
    T[i - 1] = nu / P.h * s;
  }
  return T;
}

/// Sample points used by the sign-assumption diagnostics.
inline constexpr int kDiagnosticSamples = 16;

}  // namespace detail

struct NewtonianSlipParams {
  double nu = 0.0;      ///< dimensionless viscosity
  double lambda = 1.0;  ///< dimensionless slip length
};

/// Newtonian bulk with a Navier slip bottom.
class NewtonianSlip final : public FrictionModel {
 public:
  explicit NewtonianSlip(NewtonianSlipParams p) : p_(p) {
    if (!(p.lambda > 0.0)) throw std::invalid_argument("NewtonianSlip: slip length must be positive");
    if (!(p.nu >= 0.0)) throw std::invalid_argument("NewtonianSlip: viscosity must be non-negative");
  }
  std::string name() const override { return "newtonian_slip"; }
  const NewtonianSlipParams& params() const { return p_; }

  double bottom_stress(const PrimitiveState& P, const MomentBasis& basis) const override {
    require_wet(P, basis, "NewtonianSlip");
    return p_.nu / p_.lambda * detail::bottom_velocity(P, basis);
  }
  Vector bulk_terms(const PrimitiveState& P, const MomentBasis& basis) const override {
    require_wet(P, basis, "NewtonianSlip");
    return detail::newtonian_bulk(P, basis, p_.nu);
  }

 private:
  NewtonianSlipParams p_;
};

struct ManningParams {
  double manning2 = 0.0;  ///< dimensionless Manning factor n^2
  double nu = 0.0;
};

/// Newtonian bulk with a Manning bottom law.
class NewtonianManning final : public FrictionModel {
 public:
  explicit NewtonianManning(ManningParams p) : p_(p) {
    if (!(p.manning2 >= 0.0) || !(p.nu >= 0.0))
      throw std::invalid_argument("NewtonianManning: parameters must be non-negative");
  }
  std::string name() const override { return "newtonian_manning"; }
  const ManningParams& params() const { return p_; }

  double bottom_stress(const PrimitiveState& P, const MomentBasis& basis) const override {
    require_wet(P, basis, "NewtonianManning");
    const double ub = detail::bottom_velocity(P, basis);
    return p_.manning2 / std::cbrt(P.h) * ub * std::abs(ub);
  }
  Vector bulk_terms(const PrimitiveState& P, const MomentBasis& basis) const override {
    require_wet(P, basis, "NewtonianManning");
    return detail::newtonian_bulk(P, basis, p_.nu);
  }

 private:
  ManningParams p_;
};

struct SavageHutterParams {
  double delta = 0.0;  ///< bed friction angle [rad]
  double phi = 0.0;    ///< internal friction angle [rad]
};

/// Rate-independent Mohr-Coulomb law with bed angle delta and internal angle phi.
/// The bulk closed form assumes u~(zeta) > 0 throughout the column.
class SavageHutter final : public FrictionModel {
 public:
  explicit SavageHutter(SavageHutterParams p) : p_(p) {
    if (!(p.delta >= 0.0) || !(p.phi >= p.delta) || !(p.phi < std::numbers::pi / 2.0))
      throw std::invalid_argument("SavageHutter: need 0 <= delta <= phi < pi/2");
  }
  std::string name() const override { return "savage_hutter"; }
  const SavageHutterParams& params() const { return p_; }

  double bottom_stress(const PrimitiveState& P, const MomentBasis& basis) const override {
    require_wet(P, basis, "SavageHutter");
    return P.h * sign(detail::bottom_velocity(P, basis)) * std::tan(p_.delta);
  }
  Vector bulk_terms(const PrimitiveState& P, const MomentBasis& basis) const override {
    require_wet(P, basis, "SavageHutter");
    return Vector::Constant(basis.order(), -P.h * std::tan(p_.phi));
  }
  bool assumptions_hold(const PrimitiveState& P, const MomentBasis& basis) const override {
    const std::span<const double> a(P.alpha.data(), static_cast<std::size_t>(P.alpha.size()));
    for (int s = 0; s <= detail::kDiagnosticSamples; ++s)
      if (!(basis.reconstruct_velocity(P.u_m, a, static_cast<double>(s) / detail::kDiagnosticSamples) > 0.0))
        return false;
    return true;
  }

 private:
  SavageHutterParams p_;
};

struct CoulombParams {
  double delta = 0.0;  ///< bed friction angle [rad]
  double mu = 0.0;     ///< constant bulk friction coefficient
};

/// Coulomb-type law with constant coefficient; the bulk closed form assumes
/// an increasing velocity profile.
class CoulombType final : public FrictionModel {
 public:
  explicit CoulombType(CoulombParams p) : p_(p) {
    if (!(p.mu >= 0.0)) throw std::invalid_argument("CoulombType: mu must be non-negative");
    if (!(p.delta >= 0.0) || !(p.delta < std::numbers::pi / 2.0))
      throw std::invalid_argument("CoulombType: delta must lie in [0, pi/2)");
  }
  std::string name() const override { return "coulomb"; }
  const CoulombParams& params() const { return p_; }

  double bottom_stress(const PrimitiveState& P, const MomentBasis& basis) const override {
    require_wet(P, basis, "CoulombType");
    return P.h * sign(detail::bottom_velocity(P, basis)) * std::tan(p_.delta);
  }
  Vector bulk_terms(const PrimitiveState& P, const MomentBasis& basis) const override {
    require_wet(P, basis, "CoulombType");
    return Vector::Constant(basis.order(), -p_.mu * P.h);
  }
  bool assumptions_hold(const PrimitiveState& P, const MomentBasis& basis) const override {
    const std::span<const double> a(P.alpha.data(), static_cast<std::size_t>(P.alpha.size()));
    for (int s = 0; s <= detail::kDiagnosticSamples; ++s)
      if (!(basis.velocity_shear(a, static_cast<double>(s) / detail::kDiagnosticSamples) > 0.0)) return false;
    return true;
  }

 private:
  CoulombParams p_;
};

}  // namespace swme
