#pragma once

/// Shifted Legendre moment basis on [0,1] and Gauss-Legendre rules.
///
/// The basis functions are phi_j(zeta) = (d^j/dzeta^j)(zeta - zeta^2)^j / j!,
/// normalised so that phi_j(0) = 1 and phi_j(1) = (-1)^j. Their monomial
/// coefficients are integers, so every coupling coefficient below is an
/// integral of a polynomial with rational coefficients and is evaluated in
/// exact arithmetic before a single rounding to double.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace swme {

/// Nodes and weights of a quadrature rule on an interval (default [0,1]).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t l = 0; l < nodes.size(); ++l) sum += weights[l] * f(nodes[l]);
    return sum;
  }

  /// The same rule affinely mapped from [0,1] onto [a,b].
  QuadratureRule mapped(double a, double b) const {
    QuadratureRule out;
    out.nodes.reserve(size());
    out.weights.reserve(size());
    for (std::size_t l = 0; l < size(); ++l) {
      out.nodes.push_back(a + (b - a) * nodes[l]);
      out.weights.push_back((b - a) * weights[l]);
    }
    return out;
  }
};

inline constexpr int kMaxGaussPoints = 64;

/// k-point Gauss-Legendre rule on [0,1]; nodes ascending.
/// Roots of P_k are found by Newton iteration from the Chebyshev-like guess.
inline QuadratureRule gauss_rule(int k) {
  if (k < 1 || k > kMaxGaussPoints)
    throw std::invalid_argument("gauss_rule: point count must be in [1, " +
                                std::to_string(kMaxGaussPoints) + "], got " + std::to_string(k));
  QuadratureRule rule;
  rule.nodes.assign(k, 0.0);
  rule.weights.assign(k, 0.0);
  const int half = (k + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= k; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      if (k == 1) p0 = 1.0;  // P_1 = x, P_0 = 1
      dp = k * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    // recompute the derivative at the converged root for the weight
    double p0 = 1.0, p1 = x;
    for (int n = 2; n <= k; ++n) {
      const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
      p0 = p1;
      p1 = p2;
    }
    if (k == 1) p0 = 1.0;
    dp = k * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // x runs from near +1 downwards; map to [0,1] ascending
    rule.nodes[k - 1 - i] = 0.5 * (1.0 + x);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.weights[k - 1 - i] = 0.5 * w;
    rule.weights[i] = 0.5 * w;
  }
  if (k % 2 == 1) rule.nodes[k / 2] = 0.5;
  return rule;
}

namespace detail {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Polynomial with integer numerators over one common positive denominator.
struct ExactPolynomial {
  std::vector<BigInt> coeffs;  // ascending powers
  BigInt denominator = 1;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

inline BigInt lcm_up_to(std::size_t n) {
  BigInt l = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    const BigInt kk = static_cast<unsigned long>(k);
    l = l / boost::multiprecision::gcd(l, kk) * kk;
  }
  return l;
}

inline ExactPolynomial multiply(const ExactPolynomial& a, const ExactPolynomial& b) {
  ExactPolynomial out;
  out.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  out.denominator = a.denominator * b.denominator;
  return out;
}

inline ExactPolynomial derivative(const ExactPolynomial& p) {
  ExactPolynomial out;
  out.denominator = p.denominator;
  if (p.coeffs.size() <= 1) {
    out.coeffs = {BigInt(0)};
    return out;
  }
  for (std::size_t k = 1; k < p.coeffs.size(); ++k)
    out.coeffs.push_back(p.coeffs[k] * static_cast<unsigned long>(k));
  return out;
}

/// Antiderivative vanishing at zero.
inline ExactPolynomial antiderivative(const ExactPolynomial& p) {
  const BigInt l = lcm_up_to(p.coeffs.size());
  ExactPolynomial out;
  out.coeffs.assign(p.coeffs.size() + 1, BigInt(0));
  for (std::size_t k = 0; k < p.coeffs.size(); ++k)
    out.coeffs[k + 1] = p.coeffs[k] * (l / static_cast<unsigned long>(k + 1));
  out.denominator = p.denominator * l;
  return out;
}

/// Exact value of the integral over [0,1], rounded once to double.
inline double integrate_unit(const ExactPolynomial& p) {
  const BigInt l = lcm_up_to(p.coeffs.size());
  BigInt num = 0;
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) num += p.coeffs[k] * (l / static_cast<unsigned long>(k + 1));
  return BigRational(num, p.denominator * l).convert_to<double>();
}

/// Integer monomial coefficients of phi_j:
/// phi_j(z) = sum_k (-1)^k C(j,k) C(j+k,k) z^k.
inline ExactPolynomial shifted_legendre(int j) {
  ExactPolynomial p;
  BigInt binom_j_k = 1;    // C(j,k)
  BigInt binom_jk_k = 1;   // C(j+k,k)
  for (int k = 0; k <= j; ++k) {
    if (k > 0) {
      binom_j_k = binom_j_k * (j - k + 1) / k;
      binom_jk_k = binom_jk_k * (j + k) / k;
    }
    BigInt c = binom_j_k * binom_jk_k;
    p.coeffs.push_back(k % 2 == 0 ? c : BigInt(-c));
  }
  return p;
}

inline double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace detail

/// Precomputed shifted Legendre data for a model of order N.
///
/// Indices of basis functions and tensors are 1-based (j = 1..N), matching the
/// moment numbering alpha_1..alpha_N.
class MomentBasis {
 public:
  static constexpr int kMaxOrder = 12;

  explicit MomentBasis(int order) : order_(order) {
    if (order < 1 || order > kMaxOrder)
      throw std::invalid_argument("MomentBasis: order must be in [1, " + std::to_string(kMaxOrder) +
                                  "], got " + std::to_string(order));
    build();
  }

  int order() const { return order_; }

  /// Monomial coefficients (ascending powers) of phi_j.
  const std::vector<double>& coefficients(int j) const { return phi_coeffs_[index(j)]; }
  const std::vector<double>& derivative_coefficients(int j) const { return dphi_coeffs_[index(j)]; }

  double phi(int j, double zeta) const {
    check_zeta(zeta);
    return detail::horner(phi_coeffs_[index(j)], zeta);
  }

  double dphi(int j, double zeta) const {
    check_zeta(zeta);
    return detail::horner(dphi_coeffs_[index(j)], zeta);
  }

  /// A_ijk = (2i+1) int phi_i phi_j phi_k
  double A(int i, int j, int k) const { return A_[flat(i, j, k)]; }
  /// B_ijk = (2i+1) int phi_i' (int_0^zeta phi_j) phi_k
  double B(int i, int j, int k) const { return B_[flat(i, j, k)]; }
  /// C_ij = int phi_i' phi_j'
  double C(int i, int j) const { return C_[static_cast<std::size_t>(index(i)) * order_ + index(j)]; }

  /// u_m + sum_j alpha_j phi_j(zeta), summed left to right.
  double reconstruct_velocity(double u_m, std::span<const double> alpha, double zeta) const {
    check_alpha(alpha);
    check_zeta(zeta);
    double u = u_m;
    for (int j = 0; j < order_; ++j) u += alpha[j] * detail::horner(phi_coeffs_[j], zeta);
    return u;
  }

  /// Vertical shear d(u~)/dzeta = sum_j alpha_j phi_j'(zeta).
  double velocity_shear(std::span<const double> alpha, double zeta) const {
    check_alpha(alpha);
    double s = 0.0;
    for (int j = 0; j < order_; ++j) s += alpha[j] * detail::horner(dphi_coeffs_[j], zeta);
    return s;
  }

  /// u~(0) = u_m + sum alpha_i, using phi_i(0) = 1.
  double bottom_velocity(double u_m, std::span<const double> alpha) const {
    check_alpha(alpha);
    double u = u_m;
    for (int j = 0; j < order_; ++j) u += alpha[j];
    return u;
  }

 private:
  int index(int j) const {
    if (j < 1 || j > order_)
      throw std::out_of_range("MomentBasis: basis index " + std::to_string(j) + " outside [1, " +
                              std::to_string(order_) + "]");
    return j - 1;
  }
  std::size_t flat(int i, int j, int k) const {
    return (static_cast<std::size_t>(index(i)) * order_ + index(j)) * order_ + index(k);
  }
  static void check_zeta(double zeta) {
    if (!(zeta >= 0.0 && zeta <= 1.0))
      throw std::domain_error("MomentBasis: zeta must lie in [0,1], got " + std::to_string(zeta));
  }
  void check_alpha(std::span<const double> alpha) const {
    if (alpha.size() != static_cast<std::size_t>(order_))
      throw std::invalid_argument("MomentBasis: expected " + std::to_string(order_) + " moments, got " +
                                  std::to_string(alpha.size()));
  }

  void build() {
    using detail::ExactPolynomial;
    const auto n = static_cast<std::size_t>(order_);
    std::vector<ExactPolynomial> phi, dphi, iphi;
    for (int j = 1; j <= order_; ++j) {
      phi.push_back(detail::shifted_legendre(j));
      dphi.push_back(detail::derivative(phi.back()));
      iphi.push_back(detail::antiderivative(phi.back()));
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> c, dc;
      for (const auto& v : phi[j].coeffs) c.push_back(v.convert_to<double>());
      for (const auto& v : dphi[j].coeffs) dc.push_back(v.convert_to<double>());
      phi_coeffs_.push_back(std::move(c));
      dphi_coeffs_.push_back(std::move(dc));
    }

    A_.assign(n * n * n, 0.0);
    B_.assign(n * n * n, 0.0);
    C_.assign(n * n, 0.0);

    // int phi_i phi_j phi_k is fully symmetric; evaluate i <= j <= k once.
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j; k < n; ++k) {
        const ExactPolynomial pjk = detail::multiply(phi[j], phi[k]);
        for (std::size_t i = 0; i <= j; ++i) {
          const double v = detail::integrate_unit(detail::multiply(phi[i], pjk));
          const std::size_t idx[3] = {i, j, k};
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
              for (int c = 0; c < 3; ++c) {
                if (a == b || b == c || a == c) continue;
                const std::size_t ii = idx[a], jj = idx[b], kk = idx[c];
                A_[(ii * n + jj) * n + kk] = static_cast<double>(2 * ii + 3) * v;
              }
        }
      }
    }

    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const ExactPolynomial dj_i = detail::multiply(dphi[i], iphi[j]);
        for (std::size_t k = 0; k < n; ++k)
          B_[(i * n + j) * n + k] =
              static_cast<double>(2 * i + 3) * detail::integrate_unit(detail::multiply(dj_i, phi[k]));
        C_[i * n + j] = detail::integrate_unit(detail::multiply(dphi[i], dphi[j]));
      }
  }

  int order_;
  std::vector<std::vector<double>> phi_coeffs_;
  std::vector<std::vector<double>> dphi_coeffs_;
  std::vector<double> A_, B_, C_;
};

/// Convenience constructor mirroring the other free-function entry points.
inline MomentBasis build_basis(int order) { return MomentBasis(order); }

}  // namespace swme
