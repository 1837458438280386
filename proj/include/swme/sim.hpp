#pragma once

/// Simulation driver: configuration, presets for the four reference
/// scenarios, the time loop and file output.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "swme/mu_i.hpp"
#include "swme/scheme.hpp"

namespace swme {

using ConfigTree = boost::property_tree::ptree;

struct InitialCondition {
  enum class Kind { block, uniform };
  Kind kind = Kind::block;
  double h_inside = 0.08;
  double x_lo = 0.3, x_hi = 0.5;
  std::optional<double> h_outside;  ///< defaults to h_min
  double h = 0.05;                  ///< uniform height
  double u_m = 0.0;
  std::vector<double> alpha;        ///< uniform moments; missing entries are zero
};

struct BathymetrySpec {
  enum class Kind { flat, runoff, file };
  Kind kind = Kind::flat;
  std::string path;
};

/// Dimensionless values that replace the derived ones when set.
struct DimensionlessOverrides {
  std::optional<double> nu, nu0, lambda, manning2, c_I;
};

struct SimConfig {
  std::string name = "custom";
  int order = 2;
  int cells = 1000;
  double x_a = 0.0, x_b = 1.0;
  PhysicalParameters physical{};
  double h_min = 1e-6;
  double topography_sign = -1.0;

  std::string friction = "newtonian_slip";
  double delta = 0.0;  ///< bed friction angle [rad]
  double phi = 0.0;    ///< internal friction angle [rad]
  double mu = 0.0;     ///< constant Coulomb coefficient
  double mu_s = 0.48, mu_2 = 0.73;
  MuIBottomKind mui_bottom = MuIBottomKind::slip;
  int quad_points = 8;
  QuadratureVariable quad_variable = QuadratureVariable::sqrt_depth;
  bool analytic_low_order = true;
  DimensionlessOverrides overrides{};

  StepperConfig stepper{};
  InitialCondition initial{};
  BathymetrySpec bathymetry{};

  std::vector<double> times{1.0};
  std::string out_dir = "out";
  bool write_profiles = false;
  int profile_resolution = 21;
  long max_steps = 50'000'000;

  void validate() const {
    if (order < 1 || order > MomentBasis::kMaxOrder) throw std::invalid_argument("config: order must lie in [1, 12]");
    if (cells < 3) throw std::invalid_argument("config: need at least 3 cells");
    if (!(x_b > x_a)) throw std::invalid_argument("config: need x_b > x_a");
    if (!(physical.theta >= 0.0) || !(physical.theta < std::numbers::pi / 2.0))
      throw std::invalid_argument("config: theta must lie in [0, 90) degrees");
    if (times.empty()) throw std::invalid_argument("config: at least one snapshot time is required");
    if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0)
      throw std::invalid_argument("config: snapshot times must be non-negative and ascending");
    if (profile_resolution < 2) throw std::invalid_argument("config: profile resolution must be at least 2");
    stepper.validate();
  }
};

// ---------------------------------------------------------------- parsing

namespace detail {

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::string token;
  std::istringstream ss(s);
  while (ss >> token) {
    token.erase(std::remove(token.begin(), token.end(), ','), token.end());
    if (token.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument("config: bad number '" + token + "'");
    out.push_back(v);
  }
  return out;
}

inline std::string format_list(const std::vector<double>& v) {
  std::ostringstream ss;
  ss << std::setprecision(17);
  for (std::size_t k = 0; k < v.size(); ++k) ss << (k ? " " : "") << v[k];
  return ss.str();
}

template <class T>
std::optional<T> get_opt(const ConfigTree& t, const std::string& key) {
  if (auto v = t.get_optional<T>(key)) return *v;
  return std::nullopt;
}

}  // namespace detail

/// Builds a SimConfig from an INI-style tree. Angles are in degrees.
inline SimConfig config_from_tree(const ConfigTree& t) {
  SimConfig c;
  c.name = t.get("run.name", c.name);

  c.order = t.get("grid.order", c.order);
  c.cells = t.get("grid.cells", c.cells);
  c.x_a = t.get("grid.x_a", c.x_a);
  c.x_b = t.get("grid.x_b", c.x_b);

  auto& p = c.physical;
  p.g = t.get("physics.g", p.g);
  p.H = t.get("physics.H", p.H);
  p.L = t.get("physics.L", p.L);
  p.theta = deg_to_rad(t.get("physics.theta_deg", 45.0));
  p.rho = t.get("physics.rho", p.rho);
  p.rho_s = t.get("physics.rho_s", p.rho_s);
  c.h_min = t.get("physics.h_min", c.h_min);
  c.topography_sign = t.get("physics.topography_sign", c.topography_sign);

  c.friction = t.get("friction.model", c.friction);
  p.eta = t.get("friction.eta", p.eta);
  p.eta0 = t.get("friction.eta0", p.eta0);
  p.slip_length = t.get("friction.slip_length", p.slip_length);
  p.manning_n = t.get("friction.manning_n", p.manning_n);
  p.I0 = t.get("friction.I0", p.I0);
  p.d_s = t.get("friction.d_s", p.d_s);
  c.delta = deg_to_rad(t.get("friction.delta_deg", 0.0));
  c.phi = deg_to_rad(t.get("friction.phi_deg", 0.0));
  c.mu = t.get("friction.mu", c.mu);
  c.mu_s = t.get("friction.mu_s", c.mu_s);
  c.mu_2 = t.get("friction.mu_2", c.mu_2);
  const std::string bottom = t.get("friction.bottom", std::string("slip"));
  if (bottom == "slip") c.mui_bottom = MuIBottomKind::slip;
  else if (bottom == "manning") c.mui_bottom = MuIBottomKind::manning;
  else if (bottom == "coulomb") c.mui_bottom = MuIBottomKind::coulomb;
  else if (bottom == "mu_i") c.mui_bottom = MuIBottomKind::mu_i;
  else throw std::invalid_argument("config: unknown friction.bottom '" + bottom + "'");
  c.quad_points = t.get("friction.quad_points", c.quad_points);
  const std::string var = t.get("friction.quad_variable", std::string("sqrt_depth"));
  if (var == "sqrt_depth") c.quad_variable = QuadratureVariable::sqrt_depth;
  else if (var == "depth") c.quad_variable = QuadratureVariable::depth;
  else throw std::invalid_argument("config: unknown friction.quad_variable '" + var + "'");
  c.analytic_low_order = t.get("friction.analytic_low_order", c.analytic_low_order);
  c.overrides.nu = detail::get_opt<double>(t, "friction.nu");
  c.overrides.nu0 = detail::get_opt<double>(t, "friction.nu0");
  c.overrides.lambda = detail::get_opt<double>(t, "friction.lambda");
  c.overrides.manning2 = detail::get_opt<double>(t, "friction.manning2");
  c.overrides.c_I = detail::get_opt<double>(t, "friction.c_I");

  auto& s = c.stepper;
  const std::string mode = t.get("scheme.mode", std::string("semi_implicit"));
  if (mode == "explicit") s.mode = StepMode::explicit_euler;
  else if (mode == "semi_implicit") s.mode = StepMode::semi_implicit;
  else throw std::invalid_argument("config: unknown scheme.mode '" + mode + "'");
  s.cfl = t.get("scheme.cfl", s.cfl);
  s.newton_tol = t.get("scheme.newton_tol", s.newton_tol);
  s.newton_max_iter = t.get("scheme.newton_max_iter", s.newton_max_iter);
  s.fd_eps = t.get("scheme.fd_eps", s.fd_eps);
  s.dt_max = t.get("scheme.dt_max", s.dt_max);
  const std::string path = t.get("scheme.path", std::string("primitive"));
  if (path == "primitive") s.path = PathVariable::primitive;
  else if (path == "conservative") s.path = PathVariable::conservative;
  else throw std::invalid_argument("config: unknown scheme.path '" + path + "'");
  c.max_steps = t.get("scheme.max_steps", c.max_steps);

  auto& ic = c.initial;
  const std::string kind = t.get("initial.kind", std::string("block"));
  if (kind == "block") ic.kind = InitialCondition::Kind::block;
  else if (kind == "uniform") ic.kind = InitialCondition::Kind::uniform;
  else throw std::invalid_argument("config: unknown initial.kind '" + kind + "'");
  ic.h_inside = t.get("initial.h_inside", ic.h_inside);
  ic.x_lo = t.get("initial.x_lo", ic.x_lo);
  ic.x_hi = t.get("initial.x_hi", ic.x_hi);
  ic.h_outside = detail::get_opt<double>(t, "initial.h_outside");
  ic.h = t.get("initial.h", ic.h);
  ic.u_m = t.get("initial.u_m", ic.u_m);
  ic.alpha = detail::parse_list(t.get("initial.alpha", std::string()));

  const std::string bk = t.get("bathymetry.kind", std::string("flat"));
  if (bk == "flat") c.bathymetry.kind = BathymetrySpec::Kind::flat;
  else if (bk == "runoff") c.bathymetry.kind = BathymetrySpec::Kind::runoff;
  else if (bk == "file") c.bathymetry.kind = BathymetrySpec::Kind::file;
  else throw std::invalid_argument("config: unknown bathymetry.kind '" + bk + "'");
  c.bathymetry.path = t.get("bathymetry.path", std::string());

  c.times = detail::parse_list(t.get("output.times", std::string("1.0")));
  c.out_dir = t.get("output.dir", c.out_dir);
  c.write_profiles = t.get("output.profiles", c.write_profiles);
  c.profile_resolution = t.get("output.profile_resolution", c.profile_resolution);

  c.validate();
  return c;
}

inline ConfigTree read_config_file(const std::string& path) {
  ConfigTree t;
  boost::property_tree::ini_parser::read_ini(path, t);
  return t;
}

/// Copies every leaf of `overlay` into `base`.
inline void merge_tree(ConfigTree& base, const ConfigTree& overlay) {
  for (const auto& [section, child] : overlay) {
    if (child.empty()) {
      base.put(section, child.data());
      continue;
    }
    for (const auto& [key, leaf] : child) base.put(section + "." + key, leaf.data());
  }
}

/// Applies "section.key=value".
inline void apply_override(ConfigTree& t, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("override must read section.key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  if (key.find('.') == std::string::npos) throw std::invalid_argument("override key needs a section: " + key);
  t.put(key, assignment.substr(eq + 1));
}

// ---------------------------------------------------------------- presets

struct PresetOptions {
  std::optional<double> theta_deg;
  std::optional<int> order;
  std::optional<int> cells;
  bool runoff = false;            ///< example 4: runoff bathymetry
  bool manning = false;           ///< example 2: Manning bottom instead of slip
  std::optional<double> slip_length;
  std::optional<double> manning_n;
  std::optional<double> delta_deg;  ///< example 3
};

/// Tree form of the reference scenarios 1-4.
inline ConfigTree preset_tree(int example, const PresetOptions& o = {}) {
  if (example < 1 || example > 4) throw std::invalid_argument("preset: unknown example " + std::to_string(example));
  ConfigTree t;
  t.put("run.name", "example" + std::to_string(example));
  t.put("grid.order", 2);
  t.put("grid.cells", 1000);
  t.put("grid.x_a", 0.0);
  t.put("grid.x_b", 1.0);
  t.put("physics.H", 0.1);
  t.put("physics.L", 10.0);
  t.put("physics.g", 9.81);
  t.put("physics.theta_deg", 45.0);
  t.put("physics.rho", 1200.0);
  t.put("physics.h_min", 1e-6);
  t.put("initial.kind", "block");
  t.put("initial.h_inside", 0.08);
  t.put("initial.x_lo", 0.3);
  t.put("initial.x_hi", 0.5);
  t.put("output.times", "0.4 0.6 1");
  t.put("scheme.cfl", 0.05);
  t.put("scheme.newton_tol", 1e-6);

  switch (example) {
    case 1:
      t.put("friction.model", "newtonian_slip");
      t.put("friction.slip_length", 1e-4);
      t.put("friction.eta", 0.01);
      t.put("scheme.mode", "semi_implicit");
      break;
    case 2:
      t.put("friction.eta", 0.01);
      if (o.manning) {
        t.put("friction.model", "newtonian_manning");
        t.put("friction.manning_n", o.manning_n.value_or(0.0165));
      } else {
        t.put("friction.model", "newtonian_slip");
        t.put("friction.slip_length", o.slip_length.value_or(0.0015));
      }
      t.put("scheme.mode", "semi_implicit");
      break;
    case 3:
      t.put("friction.model", "savage_hutter");
      t.put("friction.delta_deg", o.delta_deg.value_or(15.0));
      t.put("friction.phi_deg", 20.0);
      t.put("scheme.mode", "explicit");
      break;
    case 4:
      t.put("grid.order", 3);
      t.put("physics.rho", 1550.0);
      t.put("physics.rho_s", 2500.0);
      t.put("friction.model", "mu_i");
      t.put("friction.bottom", "slip");
      t.put("friction.I0", 0.279);
      t.put("friction.d_s", 0.7e-3);
      t.put("friction.mu_s", 0.48);
      t.put("friction.mu_2", 0.73);
      t.put("friction.slip_length", 0.001);
      t.put("friction.eta0", 0.001);
      t.put("friction.quad_points", 8);
      t.put("scheme.mode", "explicit");
      t.put("scheme.cfl", 0.01);
      t.put("output.times", "0.2 0.4 0.6 0.8 1");
      if (o.runoff) t.put("bathymetry.kind", "runoff");
      break;
  }
  if (example == 1 && o.slip_length) t.put("friction.slip_length", *o.slip_length);
  if (o.theta_deg) t.put("physics.theta_deg", *o.theta_deg);
  if (o.order) t.put("grid.order", *o.order);
  if (o.cells) t.put("grid.cells", *o.cells);
  return t;
}

inline SimConfig preset(int example, const PresetOptions& o = {}) { return config_from_tree(preset_tree(example, o)); }

// ---------------------------------------------------------------- assembly

inline DimensionlessParameters dimensionless(const SimConfig& c) {
  DimensionlessParameters d = derive_dimensionless(c.physical);
  if (c.overrides.nu) d.nu = *c.overrides.nu;
  if (c.overrides.nu0) d.nu0 = *c.overrides.nu0;
  if (c.overrides.lambda) d.lambda = *c.overrides.lambda;
  if (c.overrides.manning2) d.manning2 = *c.overrides.manning2;
  if (c.overrides.c_I) d.c_I = *c.overrides.c_I;
  return d;
}

inline FrictionPtr make_friction(const SimConfig& c) {
  const DimensionlessParameters d = dimensionless(c);
  if (c.friction == "newtonian_slip") return std::make_shared<NewtonianSlip>(NewtonianSlipParams{d.nu, d.lambda});
  if (c.friction == "newtonian_manning") return std::make_shared<NewtonianManning>(ManningParams{d.manning2, d.nu});
  if (c.friction == "savage_hutter") return std::make_shared<SavageHutter>(SavageHutterParams{c.delta, c.phi});
  if (c.friction == "coulomb") return std::make_shared<CoulombType>(CoulombParams{c.delta, c.mu});
  if (c.friction == "mu_i") {
    MuIParams m;
    m.mu_s = c.mu_s;
    m.mu_2 = c.mu_2;
    m.c_I = d.c_I;
    m.bottom.kind = c.mui_bottom;
    m.bottom.nu0 = d.nu0;
    m.bottom.lambda = d.lambda;
    m.bottom.manning2 = d.manning2;
    m.bottom.delta = c.delta;
    m.quad_points = c.quad_points;
    m.variable = c.quad_variable;
    m.analytic_low_order = c.analytic_low_order;
    return std::make_shared<MuIRheology>(m);
  }
  throw std::invalid_argument("config: unknown friction model '" + c.friction + "'");
}

inline Bathymetry make_bathymetry(const SimConfig& c) {
  switch (c.bathymetry.kind) {
    case BathymetrySpec::Kind::flat:
      return Bathymetry::flat();
    case BathymetrySpec::Kind::runoff:
      return Bathymetry::runoff(c.physical.theta);
    case BathymetrySpec::Kind::file:
      return Bathymetry::load(c.bathymetry.path);
  }
  throw std::logic_error("unknown bathymetry kind");
}

inline Grid initial_grid(const SimConfig& c, const Bathymetry& bath) {
  Grid g(c.cells, c.x_a, c.x_b, c.order);
  g.set_bathymetry(bath);
  const auto& ic = c.initial;
  for (int j = 1; j <= g.J; ++j) {
    PrimitiveState P(0.0, 0.0, Vector::Zero(c.order));
    if (ic.kind == InitialCondition::Kind::block) {
      const double x = g.center(j);
      P.h = (x >= ic.x_lo && x <= ic.x_hi) ? ic.h_inside : ic.h_outside.value_or(c.h_min);
    } else {
      P.h = ic.h;
      P.u_m = ic.u_m;
      for (int i = 0; i < c.order && i < static_cast<int>(ic.alpha.size()); ++i) P.alpha[i] = ic.alpha[i];
    }
    g.U[j] = to_conservative(P).u;
  }
  apply_transmissive_bc(g);
  return g;
}

// ---------------------------------------------------------------- running

struct Snapshot {
  double time = 0.0;
  int order = 0;
  std::vector<double> x, b;
  std::vector<PrimitiveState> cells;
};

struct DiagnosticRecord {
  long step = 0;
  double time = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double max_speed = 0.0;  ///< max |u_m| over wet cells
  double min_h = 0.0;
  double front = 0.0;      ///< largest x with h > 10 h_min
  StepStats stats{};
};

struct RunResult {
  std::vector<Snapshot> snapshots;
  std::vector<DiagnosticRecord> diagnostics;
  Grid final_grid;
};

class RunError : public std::runtime_error {
 public:
  RunError(const std::string& what, double time, int cell)
      : std::runtime_error(what + " at t = " + std::to_string(time)), time_(time), cell_(cell) {}
  double time() const { return time_; }
  int cell() const { return cell_; }

 private:
  double time_;
  int cell_;
};

inline double front_position(const Grid& g, double h_min) {
  double front = g.x_a;
  for (int j = 1; j <= g.J; ++j)
    if (g.U[j][0] > 10.0 * h_min) front = g.center(j);
  return front;
}

inline Snapshot take_snapshot(const Grid& g, const Bathymetry& bath, const WetDryPolicy& policy, double time) {
  Snapshot s;
  s.time = time;
  s.order = g.order();
  for (int j = 1; j <= g.J; ++j) {
    s.x.push_back(g.center(j));
    s.b.push_back(bath.eval_b(g.center(j)));
    s.cells.push_back(to_primitive(ConservativeState(g.U[j]), policy));
  }
  return s;
}

inline DiagnosticRecord diagnose(const Grid& g, const WetDryPolicy& policy, long step, double t, double dt,
                                 const StepStats& stats) {
  DiagnosticRecord r;
  r.step = step;
  r.time = t;
  r.dt = dt;
  r.mass = g.mass();
  r.min_h = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= g.J; ++j) {
    r.min_h = std::min(r.min_h, g.U[j][0]);
    if (policy.is_dry(g.U[j][0])) continue;
    r.max_speed = std::max(r.max_speed, std::abs(to_primitive(ConservativeState(g.U[j]), policy).u_m));
  }
  r.front = front_position(g, policy.h_min);
  r.stats = stats;
  return r;
}

/// Runs the configured simulation, recording snapshots at the requested times.
inline RunResult run(const SimConfig& c) {
  c.validate();
  const MomentBasis basis(c.order);
  const FrictionPtr friction = make_friction(c);
  const Bathymetry bath = make_bathymetry(c).with_domain(c.x_a, c.x_b);
  Problem problem{&basis, friction.get(), SlopeSetting{c.physical.H / c.physical.L, c.physical.theta, c.topography_sign},
                  WetDryPolicy(c.h_min)};

  RunResult out;
  Grid g = initial_grid(c, bath);
  double t = 0.0;
  long step = 0;
  out.diagnostics.push_back(diagnose(g, problem.policy, 0, 0.0, 0.0, StepStats{}));

  for (const double target : c.times) {
    while (t < target) {
      if (step >= c.max_steps) throw RunError("step limit reached", t, -1);
      double dt = cfl_dt(g, problem, c.stepper);
      bool last = false;
      if (t + dt >= target) {
        dt = target - t;
        last = true;
      }
      StepStats stats;
      try {
        stats = swme::step(g, dt, problem, c.stepper);
      } catch (const StepError& e) {
        throw RunError(e.what(), t, e.cell());
      }
      t = last ? target : t + dt;
      ++step;
      out.diagnostics.push_back(diagnose(g, problem.policy, step, t, dt, stats));
      if (out.diagnostics.back().min_h < 0.0) throw RunError("negative height", t, -1);
    }
    out.snapshots.push_back(take_snapshot(g, bath, problem.policy, target));
  }
  out.final_grid = std::move(g);
  return out;
}

// ---------------------------------------------------------------- output

inline std::string format_number(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

inline void write_snapshot(const Snapshot& s, const MomentBasis& basis, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << "x,h,u_m";
  for (int i = 1; i <= s.order; ++i) f << ",alpha_" << i;
  f << ",u_bottom,h_s\n";
  for (std::size_t k = 0; k < s.cells.size(); ++k) {
    const PrimitiveState& P = s.cells[k];
    const std::span<const double> a(P.alpha.data(), static_cast<std::size_t>(P.alpha.size()));
    f << format_number(s.x[k]) << ',' << format_number(P.h) << ',' << format_number(P.u_m);
    for (int i = 0; i < s.order; ++i) f << ',' << format_number(P.alpha[i]);
    f << ',' << format_number(basis.bottom_velocity(P.u_m, a)) << ',' << format_number(P.h + s.b[k]) << '\n';
  }
  if (!f) throw std::runtime_error("write failed for " + path);
}

/// (x, zeta, u~) table on `resolution` equally spaced zeta levels per cell.
inline void emit_profile(const Snapshot& s, const MomentBasis& basis, int resolution, const std::string& path) {
  if (resolution < 2) throw std::invalid_argument("emit_profile: resolution must be at least 2");
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << "x,zeta,u\n";
  for (std::size_t k = 0; k < s.cells.size(); ++k) {
    const PrimitiveState& P = s.cells[k];
    const std::span<const double> a(P.alpha.data(), static_cast<std::size_t>(P.alpha.size()));
    for (int r = 0; r < resolution; ++r) {
      const double z = static_cast<double>(r) / (resolution - 1);
      f << format_number(s.x[k]) << ',' << format_number(z) << ','
        << format_number(basis.reconstruct_velocity(P.u_m, a, z)) << '\n';
    }
  }
  if (!f) throw std::runtime_error("write failed for " + path);
}

inline std::string snapshot_stem(double time) {
  std::ostringstream ss;
  ss << "snapshot_t" << std::fixed << std::setprecision(4) << time;
  return ss.str();
}

/// Writes snapshots, optional profile fields, a diagnostics series and a
/// plain-text summary into c.out_dir.
inline void write_outputs(const SimConfig& c, const RunResult& r) {
  namespace fs = std::filesystem;
  fs::create_directories(c.out_dir);
  const MomentBasis basis(c.order);
  for (const Snapshot& s : r.snapshots) {
    write_snapshot(s, basis, (fs::path(c.out_dir) / (snapshot_stem(s.time) + ".csv")).string());
    if (c.write_profiles)
      emit_profile(s, basis, c.profile_resolution,
                   (fs::path(c.out_dir) / (snapshot_stem(s.time) + "_profile.csv")).string());
  }

  const std::string diag_path = (fs::path(c.out_dir) / "diagnostics.csv").string();
  std::ofstream d(diag_path);
  if (!d) throw std::runtime_error("cannot open " + diag_path);
  d << "step,time,dt,mass,max_speed,min_h,front,dry_cells,assumption_violations,newton_solves,newton_iterations,"
       "newton_max_iterations\n";
  for (const auto& e : r.diagnostics)
    d << e.step << ',' << format_number(e.time) << ',' << format_number(e.dt) << ',' << format_number(e.mass) << ','
      << format_number(e.max_speed) << ',' << format_number(e.min_h) << ',' << format_number(e.front) << ','
      << e.stats.dry_cells << ',' << e.stats.assumption_violations << ',' << e.stats.newton_solves << ','
      << e.stats.newton_iterations << ',' << e.stats.newton_max_iterations << '\n';

  const std::string sum_path = (fs::path(c.out_dir) / "summary.txt").string();
  std::ofstream s(sum_path);
  if (!s) throw std::runtime_error("cannot open " + sum_path);
  const DimensionlessParameters dp = dimensionless(c);
  s << "name            " << c.name << '\n'
    << "friction        " << c.friction << '\n'
    << "order N         " << c.order << '\n'
    << "cells J         " << c.cells << '\n'
    << "theta [deg]     " << format_number(c.physical.theta * 180.0 / std::numbers::pi) << '\n'
    << "epsilon         " << format_number(dp.epsilon) << '\n'
    << "U [m/s]         " << format_number(dp.velocity_scale) << '\n'
    << "nu              " << format_number(dp.nu) << '\n'
    << "nu0             " << format_number(dp.nu0) << '\n'
    << "lambda          " << format_number(dp.lambda) << '\n'
    << "manning2        " << format_number(dp.manning2) << '\n'
    << "c_I             " << format_number(dp.c_I) << '\n'
    << "stepper         " << (c.stepper.mode == StepMode::explicit_euler ? "explicit" : "semi_implicit") << '\n'
    << "CFL             " << format_number(c.stepper.cfl) << '\n'
    << "snapshot times  " << detail::format_list(c.times) << '\n';
  if (!r.diagnostics.empty()) {
    const auto& first = r.diagnostics.front();
    const auto& last = r.diagnostics.back();
    long violations = 0, newton = 0;
    int newton_max = 0;
    for (const auto& e : r.diagnostics) {
      violations += e.stats.assumption_violations;
      newton += e.stats.newton_iterations;
      newton_max = std::max(newton_max, e.stats.newton_max_iterations);
    }
    s << "steps           " << last.step << '\n'
      << "mass initial    " << format_number(first.mass) << '\n'
      << "mass final      " << format_number(last.mass) << '\n'
      << "front final     " << format_number(last.front) << '\n'
      << "violations      " << violations << '\n'
      << "newton iters    " << newton << " (max per cell " << newton_max << ")\n";
  }
}

}  // namespace swme
