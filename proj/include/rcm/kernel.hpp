#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rcm/environment.hpp"
#include "rcm/field.hpp"

namespace rcm {

/// Generator applied at one site: sum_y (u(y) - u(x)) C_{x,y}. In box mode
/// the open edges leaving the box contribute (exterior - u(x)) * C; the
/// default exterior 0 is the killed walk.
double apply_generator(const Environment& env, const LatticeField& u,
                       std::int64_t x, double exterior = 0.0);

/// (1/2) sum_{x,y} (f(x) - f(y))^2 C_{x,y} over the in-box edges.
double dirichlet_energy(const Environment& env, const LatticeField& f);

/// Evolve du/dt = Lu by uniformization: e^{tL} as a Poisson mixture of powers
/// of the sub-stochastic jump matrix at rate Lambda = max_x pi_x. The Poisson
/// series is truncated once its certified tail is below `tol`, so
/// ||u(T) - e^{TL}u0||_inf <= tol * ||u0||_inf. Returns slices at i*T/steps.
SpaceTimeField evolve(const Environment& env, const LatticeField& u0, double T,
                      double tol, std::int64_t steps = 1);

/// p(t, x, .) with respect to the counting measure: evolve of the indicator.
LatticeField heat_kernel(const Environment& env, double t, std::int64_t x,
                         double tol = 1e-12);

/// Incremental kernel evaluation over an increasing time sequence; the state
/// is advanced, never recomputed from zero.
class HeatKernelSequence {
 public:
  HeatKernelSequence(const Environment& env, std::int64_t x0, double tol = 1e-12);
  const LatticeField& advance_to(double t);
  double time() const { return t_; }

 private:
  const Environment* env_;
  LatticeField state_;
  double t_ = 0;
  double tol_;
};

/// Solve the caloric equation on the cylinder: interior sites of B_R(center)
/// follow du/dt = Lu with the nonlocal coupling to the prescribed exterior
/// values (frozen per grid interval, left endpoint); exterior sites of the
/// returned field carry the prescribed data. `initial` gives u at cyl.t_lo.
/// Exterior slices must be non-NaN on every stored-edge-reachable site.
SpaceTimeField solve_caloric(const Environment& env, const Cylinder& cyl,
                             const LatticeField& initial,
                             const SpaceTimeField& exterior, double tol = 1e-12);

struct OndiagEntry {
  double t;
  double sup_p;        // sup over B_{sqrt(t)/4} of p(t,0,x)
  double scaled;       // t^{d/2} * sup_p
  std::int64_t argmax_site;
};

struct OndiagReport {
  std::vector<OndiagEntry> entries;
  std::vector<double> excluded;  // t with sqrt(t)/4 beyond the box radius
  double max_scaled = 0, min_scaled = 0;
  double ratio = 0;              // max/min over the grid
  double factor_ceiling = 3.0;
  bool bounded = false;
};

/// sup_{x in B_{sqrt(t)/4}} p(t,0,x) * t^{d/2} over a time grid; verdict
/// "bounded" when max/min <= factor_ceiling.
OndiagReport ondiag_check(const Environment& env, std::vector<double> t_grid,
                          double factor_ceiling = 3.0, double tol = 1e-12);

}  // namespace rcm
