#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "swme/hswme.hpp"
#include "swme/mu_i.hpp"

using namespace swme;

namespace {

PrimitiveState prim(double h, double u, std::initializer_list<double> a) {
  Vector al(static_cast<Eigen::Index>(a.size()));
  int k = 0;
  for (double v : a) al[k++] = v;
  return PrimitiveState(h, u, al);
}

MuIParams mui_equilibrium_params() {
  MuIParams p;
  p.c_I = 2.639031;
  p.bottom.kind = MuIBottomKind::mu_i;
  return p;
}

}  // namespace

TEST(SystemMatrix, RestStateN1) {
  const Matrix A = system_matrix(prim(1.0, 0.0, {0.0}), 0.01, 0.0);
  Matrix ref(3, 3);
  ref << 0, 1, 0, 0.01, 0, 0, 0, 0, 0;
  EXPECT_EQ(A, ref);
}

TEST(SystemMatrix, GoldenN2) {
  const double eps = 0.01, th = 0.3, u = 0.3, a = 0.2;
  const Matrix A = system_matrix(prim(1.0, u, {a, -0.05}), eps, th);
  Matrix ref(4, 4);
  ref << 0, 1, 0, 0,
      eps * std::cos(th) - u * u - a * a / 3.0, 2 * u, 2.0 * a / 3.0, 0,
      -2 * u * a, 2 * a, u, 3.0 * a / 5.0,
      -2.0 * a * a / 3.0, 0, a / 3.0, u;
  EXPECT_LT((A - ref).cwiseAbs().maxCoeff(), 1e-16);
  EXPECT_NEAR(A(2, 3), 0.12, 1e-16);
  EXPECT_NEAR(A(3, 2), 0.2 / 3.0, 1e-16);
}

TEST(SystemMatrix, ZeroFirstMomentDecouples) {
  const Matrix A = system_matrix(prim(0.5, 0.7, {0.0, 0.3, -0.1}), 0.01, 0.2);
  for (int r = 2; r < 5; ++r)
    for (int c = 0; c < 5; ++c) EXPECT_EQ(A(r, c), r == c ? 0.7 : 0.0) << r << "," << c;
}

TEST(SystemMatrix, HigherMomentsDoNotEnter) {
  // only h, u_m and alpha_1 appear in the regularised matrix
  const Matrix A = system_matrix(prim(0.5, 0.7, {0.2, 0.3, -0.1}), 0.01, 0.2);
  const Matrix B = system_matrix(prim(0.5, 0.7, {0.2, -0.9, 0.4}), 0.01, 0.2);
  EXPECT_EQ(A, B);
}

TEST(Eigenvalues, MeanVelocityShiftsSpectrum) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int n = 1; n <= 6; ++n) {
    Vector a(n);
    for (int i = 0; i < n; ++i) a[i] = d(rng);
    const double h = 0.3 + 0.2 * d(rng);
    auto e0 = eigenvalues(PrimitiveState(h, 0.0, a), 0.01, 0.4);
    auto e1 = eigenvalues(PrimitiveState(h, 0.37, a), 0.01, 0.4);
    std::vector<double> r0, r1;
    for (Eigen::Index k = 0; k < e0.size(); ++k) {
      r0.push_back(e0[k].real() + 0.37);
      r1.push_back(e1[k].real());
    }
    std::sort(r0.begin(), r0.end());
    std::sort(r1.begin(), r1.end());
    for (std::size_t k = 0; k < r0.size(); ++k) EXPECT_NEAR(r0[k], r1[k], 1e-9);
  }
}

TEST(Eigenvalues, HyperbolicSweep) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> hd(1e-3, 1.0), ud(-2.0, 2.0), ad(-1.0, 1.0), td(0.0, 1.5);
  for (int n = 1; n <= 6; ++n) {
    for (int t = 0; t < 2000; ++t) {
      Vector a(n);
      for (int i = 0; i < n; ++i) a[i] = ad(rng);
      const auto e = eigenvalues(PrimitiveState(hd(rng), ud(rng), a), 0.01, td(rng));
      const double lmax = e.cwiseAbs().maxCoeff();
      EXPECT_LE(e.imag().cwiseAbs().maxCoeff(), 1e-9 * std::max(lmax, 1e-300));
    }
  }
}

TEST(Wavespeed, RestState) {
  EXPECT_NEAR(max_wavespeed(prim(1.0, 0.0, {0.0}), 0.01, 0.0), 0.1, 1e-15);
  EXPECT_EQ(max_wavespeed(prim(1e-7, 0.3, {0.1}), 0.01, 0.0), 0.0);
}

TEST(Wavespeed, ShallowWaterCeleritiesForPlugFlow) {
  // alpha = 0: the outer eigenvalues are u_m +- sqrt(eps cos(theta) h)
  const double c = std::sqrt(0.01 * std::cos(0.5) * 0.4);
  EXPECT_NEAR(max_wavespeed(prim(0.4, 0.25, {0.0, 0.0}), 0.01, 0.5), 0.25 + c, 1e-13);
}

TEST(Source, ZeroFrictionFlat) {
  const MomentBasis b(2);
  const NewtonianSlip f({0.0, 1.0});
  const Vector S = source(prim(0.3, 0.5, {0.1, -0.2}), f, SlopeSetting{0.01, 0.0}, 0.0, b);
  EXPECT_EQ(S, Vector::Zero(4));
}

TEST(Source, SavageHutterMomentRow) {
  const MomentBasis b(1);
  const double delta = 15.0 * std::numbers::pi / 180.0, phi = 20.0 * std::numbers::pi / 180.0, th = 0.6;
  const SavageHutter f({delta, phi});
  const Vector S = source(prim(0.08, 0.5, {-0.1}), f, SlopeSetting{0.01, th}, 0.0, b);
  EXPECT_EQ(S[0], 0.0);
  EXPECT_NEAR(S[1], std::sin(th) * 0.08 - std::cos(th) * 0.08 * std::tan(delta), 1e-16);
  EXPECT_NEAR(S[2], -3.0 * std::cos(th) * 0.08 * (std::tan(delta) - std::tan(phi)), 1e-16);
}

TEST(Source, NewtonianRows) {
  const MomentBasis b(2);
  const NewtonianSlip f({0.01, 0.1});
  const double h = 0.05, th = 0.4;
  const auto P = prim(h, 0.5, {-0.1, 0.05});
  const Vector S = source(P, f, SlopeSetting{0.01, th}, 0.0, b);
  const double ub = 0.5 - 0.1 + 0.05;
  const double tb = 0.01 / 0.1 * ub;
  // bulk terms: (nu / h) sum_j C_ij alpha_j with C = diag(4, 12)
  EXPECT_NEAR(S[1], std::sin(th) * h - std::cos(th) * tb, 1e-15);
  EXPECT_NEAR(S[2], 3.0 * std::cos(th) * (-tb - 0.01 / h * 4.0 * -0.1), 1e-14);
  EXPECT_NEAR(S[3], 5.0 * std::cos(th) * (-tb - 0.01 / h * 12.0 * 0.05), 1e-14);
}

TEST(Source, TopographySign) {
  const MomentBasis b(1);
  const NewtonianSlip f({0.0, 1.0});
  const auto P = prim(0.2, 0.0, {0.0});
  SlopeSetting s{0.01, 0.3};
  const double base = std::sin(0.3) * 0.2;
  EXPECT_NEAR(source(P, f, s, 0.5, b)[1], base - std::cos(0.3) * 0.01 * 0.2 * 0.5, 1e-16);
  s.topography_sign = 1.0;
  EXPECT_NEAR(source(P, f, s, 0.5, b)[1], base + std::cos(0.3) * 0.01 * 0.2 * 0.5, 1e-16);
}

TEST(Source, DryCellRejected) {
  const MomentBasis b(1);
  const NewtonianSlip f({0.01, 1.0});
  EXPECT_THROW(source(prim(1e-6, 0.0, {0.0}), f, SlopeSetting{}, 0.0, b), std::domain_error);
}

TEST(Source, MuIEquilibriumVanishes) {
  const MomentBasis b(1);
  const MuIRheology f(mui_equilibrium_params());
  const double th = std::atan(0.48);
  // sliding states only: a column at rest mobilises no friction
  for (double u : {1e-9, 0.1, 0.7}) {
    const Vector S = source(prim(0.05, u, {0.0}), f, SlopeSetting{0.01, th}, 0.0, b);
    EXPECT_LT(S.cwiseAbs().maxCoeff(), 1e-14) << u;
  }
}

TEST(Equilibrium, Residual) {
  const MomentBasis b(1);
  const MuIRheology f(mui_equilibrium_params());
  const double th = std::atan(0.48);
  EXPECT_LT(equilibrium_residual(prim(0.05, 0.1, {0.0}), f, th, b).cwiseAbs().maxCoeff(), 1e-15);

  // T_1 + tau_b = h (mu(I) at the bed - average bulk coefficient), and the bulk
  // mobilises less than the bed for a sheared column: strictly negative.
  const Vector r = equilibrium_residual(prim(0.05, 0.1, {-0.1}), f, th, b);
  EXPECT_LT(r[1], -1e-6);

  const NewtonianSlip none({0.0, 1.0});
  for (double u : {-0.3, 0.0, 2.0})
    EXPECT_EQ(equilibrium_residual(prim(0.1, u, {0.0}), none, 0.0, b), Vector::Zero(2));
}
