#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcm/lattice.hpp"

namespace rcm {

// Real-valued function on the sites of a Box.
class LatticeField {
 public:
  LatticeField() = default;
  explicit LatticeField(const Box& box, double fill = 0.0)
      : box_(box), v_(static_cast<std::size_t>(box.site_count()), fill) {}

  static LatticeField delta(const Box& box, std::int64_t site) {
    LatticeField f(box);
    f.v_[static_cast<std::size_t>(site)] = 1.0;
    return f;
  }

  const Box& box() const { return box_; }
  std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }

  double& operator[](std::int64_t i) { return v_[static_cast<std::size_t>(i)]; }
  double operator[](std::int64_t i) const { return v_[static_cast<std::size_t>(i)]; }
  double& at(const Coord& x) { return v_[static_cast<std::size_t>(box_.index(x))]; }
  double at(const Coord& x) const { return v_[static_cast<std::size_t>(box_.index(x))]; }

  std::span<double> values() { return v_; }
  std::span<const double> values() const { return v_; }

  double sum() const {
    double s = 0;
    for (double x : v_) s += x;
    return s;
  }
  double max_abs() const {
    double m = 0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }
  double min() const {
    double m = v_.empty() ? 0 : v_[0];
    for (double x : v_) m = std::min(m, x);
    return m;
  }
  double max() const {
    double m = v_.empty() ? 0 : v_[0];
    for (double x : v_) m = std::max(m, x);
    return m;
  }

 private:
  Box box_;
  std::vector<double> v_;
};

// Function on a uniform time grid times a Box; slice s lives at time
// t0 + s*dt, s = 0..steps.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  SpaceTimeField(const Box& box, double t0, double dt, std::int64_t steps)
      : box_(box), t0_(t0), dt_(dt), steps_(steps),
        v_(static_cast<std::size_t>((steps + 1) * box.site_count()), 0.0) {
    if (dt <= 0 || steps < 0) throw std::invalid_argument("SpaceTimeField: bad grid");
  }

  const Box& box() const { return box_; }
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  std::int64_t steps() const { return steps_; }
  double t_end() const { return t0_ + dt_ * static_cast<double>(steps_); }
  double time(std::int64_t s) const { return t0_ + dt_ * static_cast<double>(s); }

  std::span<double> slice(std::int64_t s) {
    return std::span<double>(v_).subspan(
        static_cast<std::size_t>(s * box_.site_count()),
        static_cast<std::size_t>(box_.site_count()));
  }
  std::span<const double> slice(std::int64_t s) const {
    return std::span<const double>(v_).subspan(
        static_cast<std::size_t>(s * box_.site_count()),
        static_cast<std::size_t>(box_.site_count()));
  }

  double at(std::int64_t s, std::int64_t site) const {
    return v_[static_cast<std::size_t>(s * box_.site_count() + site)];
  }
  double& at(std::int64_t s, std::int64_t site) {
    return v_[static_cast<std::size_t>(s * box_.site_count() + site)];
  }

  // nearest grid slice for time t; caller reports the snap if it matters
  std::int64_t snap(double t) const {
    double s = std::round((t - t0_) / dt_);
    if (s < 0) s = 0;
    if (s > static_cast<double>(steps_)) s = static_cast<double>(steps_);
    return static_cast<std::int64_t>(s);
  }
  bool covers(double ta, double tb, double tol = 1e-9) const {
    return ta >= t0_ - tol && tb <= t_end() + tol;
  }

 private:
  Box box_;
  double t0_ = 0, dt_ = 1;
  std::int64_t steps_ = 0;
  std::vector<double> v_;
};

// Space-time windows [t_lo, t_hi] x B_radius(center).
struct Cylinder {
  enum class Kind { base, q_minus, q_plus, u_minus, u_plus };

  Kind kind = Kind::base;
  double t_lo = 0, t_hi = 0;
  double radius = 1;
  std::int64_t center = 0;  // site index

  double depth() const { return t_hi - t_lo; }

  // Q_{t,x,s,R} = [t-s, t] x B_R(x)
  static Cylinder base(double t, std::int64_t x, double s, double R) {
    if (s <= 0 || R < 1) throw std::invalid_argument("Cylinder: need s > 0, R >= 1");
    return {Kind::base, t - s, t, R, x};
  }
  // Q_r^-(t0) = [t0 - r^2, t0] x B_r
  static Cylinder q_minus(double t0, double r, std::int64_t x = 0) {
    return {Kind::q_minus, t0 - r * r, t0, r, x};
  }
  // Q_r^+(t0) = [t0, t0 + r^2] x B_r
  static Cylinder q_plus(double t0, double r, std::int64_t x = 0) {
    return {Kind::q_plus, t0, t0 + r * r, r, x};
  }
  // U^-(t0,r) = [t0 - 2r^2, t0 - r^2] x B_r
  static Cylinder u_minus(double t0, double r, std::int64_t x = 0) {
    return {Kind::u_minus, t0 - 2 * r * r, t0 - r * r, r, x};
  }
  // U^+(t0,r) = [t0 + r^2, t0 + 2r^2] x B_r
  static Cylinder u_plus(double t0, double r, std::int64_t x = 0) {
    return {Kind::u_plus, t0 + r * r, t0 + 2 * r * r, r, x};
  }
};

}  // namespace rcm
