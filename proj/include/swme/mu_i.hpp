#pragma once

/// mu(I) rheology: bulk friction integrals (closed forms for N = 1, 2 and
/// Gauss quadrature for general N), the basal law variants, and the model
/// wrapper plugged into the source term.
///
/// With p = h (1 - zeta) and C = c_I h^{3/2} the dimensionless shear stress is
///
///   tau(zeta) = h (1 - zeta) (mu_s + (mu_2 - mu_s) |g| / (|g| + C sqrt(1 - zeta))) dir(g),
///
/// where g = d u~/d zeta. Substituting xi = sqrt(1 - zeta) removes the square
/// root singularity at the free surface:
///
///   T_i = 2 h int_0^1 xi^3 phi_i'(1 - xi^2) tau_hat(xi) d xi.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "swme/friction.hpp"

namespace swme {

enum class MuIBottomKind { slip, manning, coulomb, mu_i };

struct MuIBottomLaw {
  MuIBottomKind kind = MuIBottomKind::mu_i;
  double nu0 = 0.0;       ///< slip: dimensionless basal viscosity
  double lambda = 1.0;    ///< slip: dimensionless slip length
  double manning2 = 0.0;  ///< manning: dimensionless factor
  double delta = 0.0;     ///< coulomb: bed friction angle [rad]
};

/// Integration variable used by the bulk quadrature.
enum class QuadratureVariable {
  sqrt_depth,  ///< xi = sqrt(1 - zeta); smooth integrand
  depth,       ///< zeta directly, nodes s_l with weights w_l on [0, 1]
};

struct MuIParams {
  double mu_s = 0.48;
  double mu_2 = 0.73;
  double c_I = 1.0;
  MuIBottomLaw bottom{};
  int quad_points = 8;
  QuadratureVariable variable = QuadratureVariable::sqrt_depth;
  bool analytic_low_order = true;  ///< closed forms for N = 1 and N = 2

  void validate() const {
    if (!(mu_s > 0.0) || !(mu_2 > mu_s)) throw std::invalid_argument("MuIParams: need 0 < mu_s < mu_2");
    if (!(c_I > 0.0) || !std::isfinite(c_I)) throw std::invalid_argument("MuIParams: c_I must be positive");
    if (quad_points < 2 || quad_points > kMaxGaussPoints)
      throw std::invalid_argument("MuIParams: quad_points must lie in [2, 64]");
    switch (bottom.kind) {
      case MuIBottomKind::slip:
        if (!(bottom.lambda > 0.0) || !(bottom.nu0 >= 0.0))
          throw std::invalid_argument("MuIParams: slip bottom needs lambda > 0 and nu0 >= 0");
        break;
      case MuIBottomKind::manning:
        if (!(bottom.manning2 >= 0.0)) throw std::invalid_argument("MuIParams: manning factor must be non-negative");
        break;
      case MuIBottomKind::coulomb:
        if (!(bottom.delta >= 0.0) || !(bottom.delta < std::numbers::pi / 2.0))
          throw std::invalid_argument("MuIParams: coulomb delta must lie in [0, pi/2)");
        break;
      case MuIBottomKind::mu_i:
        break;
    }
  }
};

namespace detail {

/// |g| / (|g| + c), with 0/0 := 0.
inline double rate_fraction(double g, double c) {
  const double a = std::abs(g);
  return a == 0.0 ? 0.0 : a / (a + c);
}

/// Normalised stress tau / p at shear rate g and rate scale c.
inline double mui_stress_ratio(double g, double c, const MuIParams& p, double slip_direction) {
  return (p.mu_s + (p.mu_2 - p.mu_s) * rate_fraction(g, c)) * shear_direction(g, slip_direction);
}

/// int_0^1 xi^3 / (1 + c xi) d xi for c >= 0.
inline double n1_bracket(double c) {
  if (c < 0.5) {
    double sum = 0.0, term = 1.0;
    for (int k = 0; k < 200; ++k) {
      const double add = term / (k + 4);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
      term *= -c;
    }
    return sum;
  }
  const double c2 = c * c;
  return 1.0 / (3.0 * c) - 1.0 / (2.0 * c2) + 1.0 / (c2 * c) - std::log1p(c) / (c2 * c2);
}

template <class T>
T log_ratio(T r, double a, double b) {  // int_a^b d xi / (xi - r) for r outside [a, b]
  using std::log;
  return log((T(b) - r) / (T(a) - r));
}

inline double log_ratio(double r, double a, double b) { return std::log(std::abs(b - r) / std::abs(a - r)); }

/// g_k(r) = int_a^b xi^k / (xi - r) d xi, r not in [a, b], 0 <= a < b.
template <class T>
T cauchy_moment(int k, T r, double a = 0.0, double b = 1.0) {
  using std::abs;
  if (abs(r) > 2.0 * b) {
    T sum(0), rinv = T(1) / r, pw = rinv;
    double ap = std::pow(a, k), bp = std::pow(b, k);
    for (int n = 0; n < 400; ++n) {
      ap *= a;
      bp *= b;
      const T add = pw * ((bp - ap) / static_cast<double>(k + n + 1));
      sum += add;
      if (abs(add) < 1e-18 * abs(sum)) break;
      pw *= rinv;
    }
    return -sum;
  }
  if (r == T(0)) return T((std::pow(b, k) - std::pow(a, k)) / k);
  T sum(0);
  for (int m = 0; m < k; ++m)
    sum += std::pow(r, k - 1 - m) * ((std::pow(b, m + 1) - std::pow(a, m + 1)) / static_cast<double>(m + 1));
  return sum + std::pow(r, k) * log_ratio(r, a, b);
}

/// d g_k / d r = int_a^b xi^k / (xi - r)^2 d xi.
inline double cauchy_moment_derivative(int k, double r, double a = 0.0, double b = 1.0) {
  if (std::abs(r) > 2.0 * b) {
    double sum = 0.0, rinv = 1.0 / r, pw = rinv * rinv;
    double ap = std::pow(a, k), bp = std::pow(b, k);
    for (int n = 0; n < 400; ++n) {
      ap *= a;
      bp *= b;
      const double add = (n + 1) * pw * (bp - ap) / (k + n + 1);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
      pw *= rinv;
    }
    return sum;
  }
  double sum = 0.0;
  for (int m = 0; m + 1 < k; ++m) sum += (k - 1 - m) * std::pow(r, k - 2 - m) * (std::pow(b, m + 1) - std::pow(a, m + 1)) / (m + 1);
  return sum + k * std::pow(r, k - 1) * log_ratio(r, a, b) + std::pow(r, k) * (1.0 / (a - r) - 1.0 / (b - r));
}

/// M_k = int_a^b xi^k / (A xi^2 - C xi + B) d xi, assuming the quadratic has
/// no zero in (a, b] and C > 0.
inline double quadratic_moment(int k, double A, double B, double C, double a = 0.0, double b = 1.0) {
  if (A == 0.0) return -cauchy_moment(k, B / C, a, b) / C;
  const double D = C * C - 4.0 * A * B;
  if (D >= 0.0) {
    const double sq = std::sqrt(D);
    const double q = 0.5 * (C + sq);
    const double r1 = q / A, r2 = B / q;
    const double mid = 0.5 * (r1 + r2);
    if (std::abs(r1 - r2) <= 1e-6 * std::abs(mid)) return cauchy_moment_derivative(k, mid, a, b) / A;
    return (cauchy_moment(k, r1, a, b) - cauchy_moment(k, r2, a, b)) / sq;
  }
  const std::complex<double> r(C / (2.0 * A), std::sqrt(-D) / (2.0 * A));
  if (std::abs(r.imag()) <= 1e-6 * std::abs(r.real())) return cauchy_moment_derivative(k, r.real(), a, b) / A;
  return cauchy_moment(k, r, a, b).imag() / (A * r.imag());
}

/// Generic xi-form integral over [a, b]:
///   out_i += 2 h int_a^b xi^3 q_i(xi) tau_hat(xi) d xi.
template <class Shear, class Weight>
void accumulate_xi(double a, double b, const QuadratureRule& rule, double h, double C, const MuIParams& p,
                   double slip_direction, int n, Shear&& shear, Weight&& q, Vector& out) {
  const QuadratureRule mapped = rule.mapped(a, b);
  for (std::size_t l = 0; l < mapped.size(); ++l) {
    const double xi = mapped.nodes[l];
    const double tau = mui_stress_ratio(shear(xi), C * xi, p, slip_direction);
    const double f = 2.0 * h * mapped.weights[l] * xi * xi * xi * tau;
    for (int i = 1; i <= n; ++i) out[i - 1] += f * q(i, xi);
  }
}

inline const QuadratureRule& cached_rule(int k) {
  static const std::array<QuadratureRule, kMaxGaussPoints + 1> rules = [] {
    std::array<QuadratureRule, kMaxGaussPoints + 1> r;
    for (int j = 1; j <= kMaxGaussPoints; ++j) r[j] = gauss_rule(j);
    return r;
  }();
  return rules.at(static_cast<std::size_t>(k));
}

inline void check_mui_state(double h, const char* who) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::domain_error(std::string(who) + ": requires h > 0, got " + std::to_string(h));
}

}  // namespace detail

/// Closed-form T_1 for N = 1 and alpha_1 <= 0 (velocity increasing upward).
inline double mui_bulk_analytic_n1(double h, double alpha1, const MuIParams& p, double slip_direction = 0.0) {
  detail::check_mui_state(h, "mui_bulk_analytic_n1");
  if (alpha1 > 0.0) throw std::domain_error("mui_bulk_analytic_n1: closed form requires alpha_1 <= 0");
  if (!std::isfinite(alpha1)) throw std::domain_error("mui_bulk_analytic_n1: non-finite alpha_1");
  const double C = p.c_I * std::pow(h, 1.5);
  if (alpha1 == 0.0) return -h * p.mu_s * sign(slip_direction);
  const double abs_a = -alpha1;
  const double bracket = abs_a < 1e-12 * C ? 0.0 : detail::n1_bracket(C / (2.0 * abs_a));
  return -h * p.mu_s - 4.0 * h * (p.mu_2 - p.mu_s) * bracket;
}

/// Sign-independent N = 1 wrapper: uses T(-alpha) = -T(alpha).
inline double mui_bulk_n1(double h, double alpha1, const MuIParams& p, double slip_direction = 0.0) {
  if (alpha1 > 0.0) return -mui_bulk_analytic_n1(h, -alpha1, p, -slip_direction);
  return mui_bulk_analytic_n1(h, alpha1, p, slip_direction);
}

/// N = 2 bulk terms in closed form through the moments M_k = int xi^k / Q,
/// taken piecewise on either side of the zero of the shear when it has one.
inline std::array<double, 2> mui_bulk_analytic_n2(double h, double alpha1, double alpha2, const MuIParams& p,
                                                  double slip_direction = 0.0) {
  detail::check_mui_state(h, "mui_bulk_analytic_n2");
  if (!std::isfinite(alpha1) || !std::isfinite(alpha2))
    throw std::domain_error("mui_bulk_analytic_n2: non-finite moments");
  const double C = p.c_I * std::pow(h, 1.5);
  if (alpha1 == 0.0 && alpha2 == 0.0) {
    const double t = -h * p.mu_s * sign(slip_direction);
    return {t, t};
  }

  // Split at xi* = sqrt(1 - zeta*) when the shear changes sign inside the column.
  std::vector<double> breaks{0.0};
  if (alpha2 != 0.0) {
    const double zs = 0.5 * (1.0 + alpha1 / (3.0 * alpha2));
    if (zs > 0.0 && zs < 1.0) breaks.push_back(std::sqrt(1.0 - zs));
  }
  breaks.push_back(1.0);

  // On a piece where sgn(g) = s, |g| / (|g| + C xi) = 1 + C xi / Q with
  // Q = A xi^2 - C xi + B, A = 12 s alpha_2, B = s (2 alpha_1 - 6 alpha_2).
  const double dmu = p.mu_2 - p.mu_s;
  std::array<double, 2> out{0.0, 0.0};
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    const double xm = 0.5 * (a + b);
    const double s = sign(-2.0 * alpha1 + alpha2 * (6.0 - 12.0 * xm * xm));
    const double A = 12.0 * s * alpha2, B = s * (2.0 * alpha1 - 6.0 * alpha2);
    const double M4 = detail::quadratic_moment(4, A, B, C, a, b);
    const double M6 = detail::quadratic_moment(6, A, B, C, a, b);
    const double p4 = std::pow(b, 4) - std::pow(a, 4), p6 = std::pow(b, 6) - std::pow(a, 6);
    out[0] -= h * s * (p.mu_2 * p4 + 4.0 * dmu * C * M4);
    out[1] += h * s * (p.mu_2 * (3.0 * p4 - 4.0 * p6) + 12.0 * dmu * C * (M4 - 2.0 * M6));
  }
  return out;
}

/// Gauss quadrature of the bulk integrals for arbitrary N.
inline Vector mui_bulk_quadrature(double h, const Vector& alpha, const MuIParams& p, const MomentBasis& basis,
                                  double slip_direction = 0.0) {
  detail::check_mui_state(h, "mui_bulk_quadrature");
  if (alpha.size() != basis.order()) throw std::invalid_argument("mui_bulk_quadrature: alpha size mismatch");
  if (p.quad_points < 2 || p.quad_points > kMaxGaussPoints)
    throw std::invalid_argument("mui_bulk_quadrature: quad_points must lie in [2, 64]");
  const int n = basis.order();
  const std::span<const double> a(alpha.data(), static_cast<std::size_t>(n));
  const double C = p.c_I * std::pow(h, 1.5);
  const auto& rule = detail::cached_rule(p.quad_points);
  Vector T = Vector::Zero(n);

  if (p.variable == QuadratureVariable::sqrt_depth) {
    const auto shear = [&](double xi) { return basis.velocity_shear(a, std::clamp(1.0 - xi * xi, 0.0, 1.0)); };
    const auto q = [&](int i, double xi) { return basis.dphi(i, std::clamp(1.0 - xi * xi, 0.0, 1.0)); };
    detail::accumulate_xi(0.0, 1.0, rule, h, C, p, slip_direction, n, shear, q, T);
    return T;
  }
  for (std::size_t l = 0; l < rule.size(); ++l) {
    const double z = rule.nodes[l];
    const double tau = detail::mui_stress_ratio(basis.velocity_shear(a, z), C * std::sqrt(1.0 - z), p, slip_direction);
    const double f = h * rule.weights[l] * (1.0 - z) * tau;
    for (int i = 1; i <= n; ++i) T[i - 1] += f * basis.dphi(i, z);
  }
  return T;
}

/// int_0^1 |phi_i'(zeta)| (1 - zeta) d zeta for i = 1..N, so that every mu(I)
/// bulk term obeys |T_i| <= h mu_2 bound_i.
inline Vector mui_bulk_bound_coefficients(const MomentBasis& basis) {
  const int n = basis.order();
  Vector out = Vector::Zero(n);
  constexpr int kSamples = 4096;
  for (int i = 1; i <= n; ++i) {
    std::vector<double> breaks{0.0};
    for (int s = 0; s < kSamples; ++s) {
      double lo = static_cast<double>(s) / kSamples, hi = static_cast<double>(s + 1) / kSamples;
      double flo = basis.dphi(i, lo), fhi = basis.dphi(i, hi);
      if (flo == 0.0 && s > 0) {
        breaks.push_back(lo);
        continue;
      }
      if (flo * fhi >= 0.0) continue;
      for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = basis.dphi(i, mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      breaks.push_back(0.5 * (lo + hi));
    }
    breaks.push_back(1.0);
    const QuadratureRule& rule = detail::cached_rule(std::max(2, (i + 2) / 2 + 1));
    double sum = 0.0;
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
      const QuadratureRule m = rule.mapped(breaks[b], breaks[b + 1]);
      double piece = 0.0;
      for (std::size_t l = 0; l < m.size(); ++l) piece += m.weights[l] * basis.dphi(i, m.nodes[l]) * (1.0 - m.nodes[l]);
      sum += std::abs(piece);
    }
    out[i - 1] = sum;
  }
  return out;
}

/// Bottom stress under the selected basal law.
inline double mui_bottom_stress(const PrimitiveState& P, const MuIParams& p, const MomentBasis& basis) {
  detail::check_mui_state(P.h, "mui_bottom_stress");
  const std::span<const double> a(P.alpha.data(), static_cast<std::size_t>(P.alpha.size()));
  const double ub = basis.bottom_velocity(P.u_m, a);
  switch (p.bottom.kind) {
    case MuIBottomKind::slip:
      return p.bottom.nu0 / p.bottom.lambda * ub;
    case MuIBottomKind::manning:
      return p.bottom.manning2 / std::cbrt(P.h) * ub * std::abs(ub);
    case MuIBottomKind::coulomb:
      return P.h * sign(ub) * std::tan(p.bottom.delta);
    case MuIBottomKind::mu_i: {
      const double g0 = basis.velocity_shear(a, 0.0);
      const double C = p.c_I * std::pow(P.h, 1.5);
      return P.h * detail::mui_stress_ratio(g0, C, p, ub);
    }
  }
  throw std::logic_error("mui_bottom_stress: unknown bottom law");
}

class MuIRheology final : public FrictionModel {
 public:
  explicit MuIRheology(MuIParams p) : p_(p) { p_.validate(); }
  std::string name() const override { return "mu_i"; }
  const MuIParams& params() const { return p_; }

  double bottom_stress(const PrimitiveState& P, const MomentBasis& basis) const override {
    require_wet(P, basis, "MuIRheology");
    return mui_bottom_stress(P, p_, basis);
  }

  Vector bulk_terms(const PrimitiveState& P, const MomentBasis& basis) const override {
    require_wet(P, basis, "MuIRheology");
    const double slip = detail::bottom_velocity(P, basis);
    if (p_.analytic_low_order && basis.order() == 1) {
      Vector T(1);
      T[0] = mui_bulk_n1(P.h, P.alpha[0], p_, slip);
      return T;
    }
    if (p_.analytic_low_order && basis.order() == 2) {
      const auto t = mui_bulk_analytic_n2(P.h, P.alpha[0], P.alpha[1], p_, slip);
      return Vector{{t[0], t[1]}};
    }
    return mui_bulk_quadrature(P.h, P.alpha, p_, basis, slip);
  }

 private:
  MuIParams p_;
};

}  // namespace swme
