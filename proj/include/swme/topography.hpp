#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace swme {

/// Bed elevation b(x) and its slope.
class Bathymetry {
 public:
  enum class Kind { flat, runoff, tabulated };

  static Bathymetry flat() { return Bathymetry(Kind::flat); }

  /// b = 0 for x < 0.5, a parabolic transition on [0.5, 0.85] and a straight
  /// ramp of slope tan(theta) beyond.
  static Bathymetry runoff(double theta) {
    Bathymetry b(Kind::runoff);
    b.tan_theta_ = std::tan(theta);
    return b;
  }

  static Bathymetry tabulated(std::vector<double> x, std::vector<double> b) {
    if (x.size() != b.size()) throw std::invalid_argument("Bathymetry: x and b sizes differ");
    if (x.size() < 2) throw std::invalid_argument("Bathymetry: need at least two samples");
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (!std::isfinite(x[k]) || !std::isfinite(b[k])) throw std::invalid_argument("Bathymetry: non-finite sample");
      if (k > 0 && !(x[k] > x[k - 1])) throw std::invalid_argument("Bathymetry: x must be strictly increasing");
    }
    Bathymetry out(Kind::tabulated);
    out.domain_ = {x.front(), x.back()};
    out.x_ = std::move(x);
    out.b_ = std::move(b);
    return out;
  }

  /// Whitespace-separated (x, b) pairs; '#' starts a comment.
  static Bathymetry load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("Bathymetry: cannot open " + path);
    std::vector<double> x, b;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      double xv, bv;
      if (!(ss >> xv)) continue;
      if (!(ss >> bv)) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected two columns");
      x.push_back(xv);
      b.push_back(bv);
    }
    return tabulated(std::move(x), std::move(b));
  }

  Kind kind() const { return kind_; }

  /// Restrict evaluation to [lo, hi]; points outside are rejected.
  Bathymetry& with_domain(double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("Bathymetry: empty domain");
    domain_ = {lo, hi};
    return *this;
  }

  double eval_b(double x) const {
    check(x);
    switch (kind_) {
      case Kind::flat:
        return 0.0;
      case Kind::runoff:
        if (x < 0.5) return 0.0;
        if (x <= 0.85) return 10.0 / 7.0 * tan_theta_ * (x - 0.5) * (x - 0.5);
        return tan_theta_ * (x - 0.675);
      case Kind::tabulated: {
        const std::size_t k = segment(x);
        const double t = (x - x_[k]) / (x_[k + 1] - x_[k]);
        return b_[k] + t * (b_[k + 1] - b_[k]);
      }
    }
    return 0.0;
  }

  /// Analytic db/dx; for tables, the slope of the segment containing x
  /// (right segment at interior nodes).
  double slope(double x) const {
    check(x);
    switch (kind_) {
      case Kind::flat:
        return 0.0;
      case Kind::runoff:
        if (x < 0.5) return 0.0;
        if (x <= 0.85) return 20.0 / 7.0 * tan_theta_ * (x - 0.5);
        return tan_theta_;
      case Kind::tabulated: {
        const std::size_t k = segment(x);
        return (b_[k + 1] - b_[k]) / (x_[k + 1] - x_[k]);
      }
    }
    return 0.0;
  }

  /// Average of the face slopes of the cell [x_left, x_right].
  double cell_slope(double x_left, double x_right) const {
    if (!(x_left < x_right)) throw std::invalid_argument("cell_slope: need x_left < x_right");
    return 0.5 * (slope(x_left) + slope(x_right));
  }

 private:
  explicit Bathymetry(Kind k) : kind_(k) {}

  void check(double x) const {
    if (!std::isfinite(x)) throw std::domain_error("Bathymetry: non-finite x");
    if (domain_ && (x < domain_->first || x > domain_->second))
      throw std::domain_error("Bathymetry: x = " + std::to_string(x) + " outside [" +
                              std::to_string(domain_->first) + ", " + std::to_string(domain_->second) + "]");
  }

  std::size_t segment(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(k, x_.size() - 2);
  }

  Kind kind_;
  double tan_theta_ = 0.0;
  std::vector<double> x_, b_;
  std::optional<std::pair<double, double>> domain_;
};

}  // namespace swme
