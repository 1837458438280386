// Acceptance checks for the solver. Prints one PASS/FAIL line per criterion
// and exits non-zero if any fails. Tolerances are fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "swme/sim.hpp"

using namespace swme;

namespace {

constexpr double kOrthoTol = 1e-13;
constexpr double kN1QuadTol32 = 1e-10;
constexpr double kN1QuadTol8 = 1e-6;
constexpr double kN2QuadTol = 1e-8;
constexpr double kN2ContinuityTol = 1e-4;
constexpr double kEquilibriumTol = 1e-12;
constexpr double kMassDriftTol = 1e-8;
constexpr double kEquivalenceTol = 1e-14;
constexpr double kRoeDiagonalTol = 1e-14;
constexpr double kRoePathTol = 1e-13;
constexpr double kFluctuationTol = 1e-13;
constexpr double kImagTol = 1e-9;
constexpr double kSplittingRatio = 1.8;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const double kExampleCI = (0.279 * 0.1 / 0.7e-3) * std::sqrt((1550.0 / 2500.0) * 0.01 * std::cos(M_PI / 4.0));

MuIParams example4_mui(int points) {
  MuIParams p;
  p.c_I = kExampleCI;
  p.quad_points = points;
  return p;
}

Outcome basis_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  const MomentBasis b(6);
  const QuadratureRule q = gauss_rule(16);
  double ortho = 0.0;
  bool sym = true, ends = true;
  for (int i = 1; i <= 6; ++i) {
    ends = ends && b.phi(i, 0.0) == 1.0 && b.phi(i, 1.0) == (i % 2 ? -1.0 : 1.0);
    for (int j = 1; j <= 6; ++j) {
      const double v = q.integrate([&](double z) { return b.phi(i, z) * b.phi(j, z); });
      ortho = std::max(ortho, std::abs(v - (i == j ? 1.0 / (2 * j + 1) : 0.0)));
      sym = sym && b.C(i, j) == b.C(j, i);
      for (int k = 1; k <= 6; ++k) sym = sym && b.A(i, j, k) == b.A(i, k, j);
    }
  }
  const double secs = seconds_since(t0);
  return {ortho < kOrthoTol && sym && ends && secs < 1.0,
          fmt("max orthogonality error %.2e, symmetric/endpoint checks ok=%g, %.3f s", ortho, sym && ends, secs)};
}

Outcome mui_n1_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const MomentBasis b(1);
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> hd(1e-3, 0.1), ad(-1.0, -1e-6);
  double e32 = 0.0, e8 = 0.0;
  const auto p32 = example4_mui(32), p8 = example4_mui(8);
  for (int t = 0; t < 1000; ++t) {
    const double h = hd(rng), a = ad(rng);
    const double exact = mui_bulk_analytic_n1(h, a, p32);
    const Vector al = Vector::Constant(1, a);
    e32 = std::max(e32, rel(mui_bulk_quadrature(h, al, p32, b)[0], exact));
    e8 = std::max(e8, rel(mui_bulk_quadrature(h, al, p8, b)[0], exact));
  }
  const double secs = seconds_since(t0);
  return {e32 < kN1QuadTol32 && e8 < kN1QuadTol8 && secs < 5.0,
          fmt("max rel. error %.2e (32 pts), %.2e (8 pts), %.2f s", e32, e8, secs)};
}

Outcome mui_n2_oracle() {
  const MomentBasis b(2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> hd(1e-3, 0.1), ad(-1.0, 1.0);
  const auto p32 = example4_mui(32);
  double err = 0.0;
  int n = 0;
  while (n < 200) {
    const double h = hd(rng), a1 = ad(rng), a2 = ad(rng);
    const double zs = 0.5 * (1.0 + a1 / (3.0 * a2));
    if (!((a2 > 0.0 && zs <= 0.0) || (a2 < 0.0 && zs >= 1.0))) continue;
    ++n;
    const auto T = mui_bulk_analytic_n2(h, a1, a2, p32);
    const Vector Q = mui_bulk_quadrature(h, (Vector(2) << a1, a2).finished(), p32, b);
    err = std::max({err, rel(T[0], Q[0]), rel(T[1], Q[1])});
  }
  double cont = 0.0;
  for (double a1 : {-1.0, -0.5, -0.1, -1e-3})
    for (double h : {1e-3, 0.02, 0.1})
      cont = std::max(cont, rel(mui_bulk_analytic_n2(h, a1, 1e-8, p32)[0], mui_bulk_analytic_n1(h, a1, p32)));
  return {err < kN2QuadTol && cont < kN2ContinuityTol,
          fmt("max rel. error vs quadrature %.2e, continuity gap %.2e", err, cont)};
}

Outcome equilibrium_preservation() {
  const auto t0 = std::chrono::steady_clock::now();
  const MomentBasis b(1);
  MuIParams p = example4_mui(8);
  p.bottom.kind = MuIBottomKind::mu_i;
  const MuIRheology f(p);
  const Problem prob{&b, &f, SlopeSetting{0.01, std::atan(0.48)}, WetDryPolicy{}};
  Grid g(200, 0.0, 1.0, 1);
  g.set_bathymetry(Bathymetry::flat());
  const Vector U0 = to_conservative(PrimitiveState(0.05, 0.1, Vector::Zero(1))).u;
  for (int j = 1; j <= 200; ++j) g.U[j] = U0;
  StepperConfig cfg;
  for (int k = 0; k < 100; ++k) step_semi_implicit(g, cfl_dt(g, prob, cfg), prob, cfg);
  double dev = 0.0;
  for (int j = 1; j <= 200; ++j) dev = std::max(dev, (g.U[j] - U0).cwiseAbs().maxCoeff());
  const double secs = seconds_since(t0);
  return {dev < kEquilibriumTol && secs < 5.0, fmt("max deviation %.2e after 100 steps, %.2f s", dev, secs)};
}

Outcome mass_conservation() {
  const auto t0 = std::chrono::steady_clock::now();
  ConfigTree t = preset_tree(1, PresetOptions{.cells = 200});
  apply_override(t, "scheme.mode=explicit");
  apply_override(t, "output.times=0.5");
  try {
    const RunResult r = run(config_from_tree(t));
    const double m0 = r.diagnostics.front().mass, m1 = r.diagnostics.back().mass;
    const double drift = std::abs(m1 - m0) / m0;
    const double secs = seconds_since(t0);
    return {drift < kMassDriftTol && secs < 30.0, fmt("relative mass drift %.2e, %.1f s", drift, secs)};
  } catch (const RunError& e) {
    return {false, std::string("explicit run aborted: ") + e.what()};
  }
}

Outcome sh_coulomb_equivalence() {
  const double phi = 20.0 * std::numbers::pi / 180.0, delta = 15.0 * std::numbers::pi / 180.0;
  const SavageHutter sh({delta, phi});
  const CoulombType co({delta, std::tan(phi)});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> hd(1e-3, 0.2), ud(0.0, 1.0), td(0.0, 1.4);
  double err = 0.0;
  int n = 0;
  while (n < 100) {
    const int N = 1 + n % 3;
    const MomentBasis b(N);
    Vector a = Vector::Zero(N);
    a[0] = -ud(rng);
    if (N >= 2) a[1] = 0.2 * (ud(rng) - 0.5) * std::abs(a[0]);
    if (N >= 3) a[2] = 0.05 * (ud(rng) - 0.5) * std::abs(a[0]);
    const PrimitiveState P(hd(rng), ud(rng) + std::abs(a.sum()), a);
    if (!sh.assumptions_hold(P, b) || !co.assumptions_hold(P, b)) continue;
    ++n;
    const SlopeSetting s{0.01, td(rng)};
    const Vector d = source(P, sh, s, 0.0, b) - source(P, co, s, 0.0, b);
    err = std::max(err, d.cwiseAbs().maxCoeff());
  }
  return {err < kEquivalenceTol, fmt("max source difference %.2e over 100 states", err)};
}

Outcome roe_properties() {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> hd(0.01, 0.5), d(-1.0, 1.0);
  const WetDryPolicy pol;
  const SlopeSetting s{0.01, 0.6};
  double diag = 0.0, path = 0.0, cons = 0.0;
  for (int N = 1; N <= 6; ++N)
    for (int t = 0; t < 100; ++t) {
      auto draw = [&] {
        Vector a(N);
        for (int i = 0; i < N; ++i) a[i] = 0.5 * d(rng);
        return PrimitiveState(hd(rng), d(rng), a);
      };
      const PrimitiveState PL = draw(), PR = draw();
      const Vector UL = to_conservative(PL).u, UR = to_conservative(PR).u;
      const PrimitiveState QL = to_primitive(ConservativeState(UL), pol), QR = to_primitive(ConservativeState(UR), pol);
      diag = std::max(diag, (roe_matrix(UL, UL, s, pol) - system_matrix(QL, s)).cwiseAbs().maxCoeff());
      const PrimitiveState QM(0.5 * (QL.h + QR.h), 0.5 * (QL.u_m + QR.u_m), 0.5 * (QL.alpha + QR.alpha));
      const Matrix exact = (system_matrix(QL, s) + 4.0 * system_matrix(QM, s) + system_matrix(QR, s)) / 6.0;
      const Matrix A = roe_matrix(UL, UR, s, pol);
      path = std::max(path, (A - exact).cwiseAbs().maxCoeff());
      const auto F = fluctuations(A, UR - UL, 1e-3, 5e-5);
      cons = std::max(cons, (F.plus + F.minus - A * (UR - UL)).cwiseAbs().maxCoeff());
    }
  return {diag < kRoeDiagonalTol && path < kRoePathTol && cons < kFluctuationTol,
          fmt("A(U,U) gap %.2e, path integral gap %.2e, D+ + D- gap %.2e", diag, path, cons)};
}

Outcome hyperbolicity() {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> hd(1e-3, 1.0), ud(-2.0, 2.0), ad(-1.0, 1.0), td(0.0, 1.5);
  double worst = 0.0;
  for (int N = 1; N <= 6; ++N)
    for (int t = 0; t < 10000; ++t) {
      Vector a(N);
      for (int i = 0; i < N; ++i) a[i] = ad(rng);
      const auto e = eigenvalues(PrimitiveState(hd(rng), ud(rng), a), 0.01, td(rng));
      worst = std::max(worst, e.imag().cwiseAbs().maxCoeff() / e.cwiseAbs().maxCoeff());
    }
  return {worst < kImagTol, fmt("max |Im| / lambda_max = %.2e over 6 x 10^4 states", worst)};
}

Outcome inclination_fronts() {
  const auto t0 = std::chrono::steady_clock::now();
  const double pi = std::numbers::pi;
  std::vector<double> fronts;
  std::string detail = "fronts at t=1:";
  bool clean = true;
  for (double th : {pi / 8, pi / 6, pi / 4, pi / 3, 2 * pi / 5}) {
    PresetOptions o;
    o.cells = 200;
    o.theta_deg = th * 180.0 / pi;
    ConfigTree t = preset_tree(1, o);
    apply_override(t, "output.times=1");
    try {
      const RunResult r = run(config_from_tree(t));
      for (int j = 1; j <= r.final_grid.J; ++j)
        if (!r.final_grid.U[j].allFinite() || r.final_grid.U[j][0] < 0.0) clean = false;
      fronts.push_back(r.diagnostics.back().front);
      detail += fmt(" %.4f", fronts.back());
    } catch (const RunError& e) {
      clean = false;
      detail += std::string(" [abort: ") + e.what() + "]";
    }
  }
  bool increasing = fronts.size() == 5;
  for (std::size_t k = 1; k < fronts.size(); ++k) increasing = increasing && fronts[k] > fronts[k - 1];
  const double secs = seconds_since(t0);
  detail += fmt(", %.0f s", secs);
  return {increasing && clean && secs < 300.0, detail};
}

double peak_bottom_velocity(bool manning) {
  PresetOptions o;
  o.cells = 200;
  o.theta_deg = 45.0;
  o.manning = manning;
  ConfigTree t = preset_tree(2, o);
  apply_override(t, "output.times=0.6");
  const RunResult r = run(config_from_tree(t));
  const MomentBasis b(2);
  double peak = 0.0;
  for (const auto& P : r.snapshots.back().cells) {
    const std::span<const double> a(P.alpha.data(), static_cast<std::size_t>(P.alpha.size()));
    peak = std::max(peak, std::abs(b.bottom_velocity(P.u_m, a)));
  }
  return peak;
}

Outcome bottom_law_comparison() {
  try {
    const double slip = peak_bottom_velocity(false), man = peak_bottom_velocity(true);
    return {man < slip, fmt("peak bottom velocity: slip %.4f, Manning %.4f", slip, man)};
  } catch (const RunError& e) {
    return {false, std::string("run aborted: ") + e.what()};
  }
}

// L1 distance at t = 0.2 between explicit and semi-implicit runs with a fixed step.
double splitting_gap(int steps) {
  const MomentBasis b(2);
  const NewtonianSlip f({1e-4, 1e-3});
  const Problem p{&b, &f, SlopeSetting{0.01, std::numbers::pi / 6.0}, WetDryPolicy{}};
  Grid g(100, 0.0, 1.0, 2);
  for (int j = 1; j <= g.J; ++j) {
    const double x = g.center(j);
    g.U[j][0] = 0.04 + 0.04 * std::exp(-60.0 * (x - 0.35) * (x - 0.35));
  }
  apply_transmissive_bc(g);
  Grid ge = g, gs = g;
  const double dt = 0.2 / steps;
  StepperConfig cfg;
  cfg.newton_tol = 1e-12;
  for (int k = 0; k < steps; ++k) {
    step_explicit(ge, dt, p, cfg);
    step_semi_implicit(gs, dt, p, cfg);
  }
  double l1 = 0.0;
  for (int j = 1; j <= g.J; ++j) l1 += (ge.U[j] - gs.U[j]).cwiseAbs().sum() * g.dx();
  return l1;
}

Outcome stepper_consistency() {
  // 400 steps keep the coarse run below CFL 0.3 for this hump
  const double coarse = splitting_gap(400), fine = splitting_gap(800);
  const double ratio = coarse / fine;
  return {ratio >= kSplittingRatio, fmt("L1 gap %.3e -> %.3e, ratio %.3f", coarse, fine, ratio)};
}

Outcome wet_dry_robustness() {
  PresetOptions o;
  o.cells = 200;
  o.order = 3;
  o.runoff = true;
  try {
    const SimConfig c = preset(4, o);
    const RunResult r = run(c);
    const WetDryPolicy pol(c.h_min);
    double min_h = 1e300;
    for (const auto& d : r.diagnostics) min_h = std::min(min_h, d.min_h);
    bool still = true;
    int dry = 0;
    for (int j = 1; j <= r.final_grid.J; ++j) {
      const Vector& U = r.final_grid.U[j];
      if (pol.is_dry(U[0])) still = still && U.tail(U.size() - 1).isZero(0.0);
    }
    for (const auto& s : r.snapshots)
      for (const auto& P : s.cells)
        if (pol.is_dry(P.h)) {
          ++dry;
          still = still && P.u_m == 0.0 && P.alpha.isZero(0.0);
        }
    return {min_h >= 0.0 && still, fmt("min h over all steps %.3e, %g dry cells in snapshots all at rest, %g steps",
                                       min_h, dry, r.diagnostics.back().step)};
  } catch (const std::exception& e) {
    return {false, std::string("run aborted: ") + e.what()};
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"basis correctness", basis_correctness},
      {"mu(I) first-order closed form vs quadrature", mui_n1_oracle},
      {"mu(I) second-order closed form vs quadrature", mui_n2_oracle},
      {"mu(I) equilibrium preservation", equilibrium_preservation},
      {"mass conservation, explicit stepper", mass_conservation},
      {"Savage-Hutter / Coulomb equivalence", sh_coulomb_equivalence},
      {"Roe matrix properties", roe_properties},
      {"hyperbolicity sweep", hyperbolicity},
      {"front position increases with inclination", inclination_fronts},
      {"Manning vs slip bottom velocity", bottom_law_comparison},
      {"explicit vs semi-implicit consistency", stepper_consistency},
      {"wet-dry robustness on runoff bed", wet_dry_robustness},
  };
  int failed = 0;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const Outcome o = checks[k].second();
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, checks[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(checks.size()) - failed, checks.size());
  return failed == 0 ? 0 : 1;
}
