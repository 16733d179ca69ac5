#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rcm/environment.hpp"
#include "rcm/field.hpp"

namespace rcm {

// ||f||_{p,A} = (1/|A| sum_A |f|^p)^{1/p}, max for p = inf
double norm_spatial(std::span<const double> values,
                    const std::vector<std::int64_t>& sites, double p);

struct TimeWindow {
  std::int64_t s_lo = 0, s_hi = 0;  // snapped slice range
  double requested_lo = 0, requested_hi = 0;
  double snapped_lo = 0, snapped_hi = 0;
};

TimeWindow snap_window(const SpaceTimeField& u, double t_lo, double t_hi);

// ||f||_{p,p',I x A}: trapezoid in time over the snapped window, spatial norm
// per slice; p' = inf takes the max over slices
double norm_spacetime(const SpaceTimeField& u, double t_lo, double t_hi,
                      const std::vector<std::int64_t>& sites, double p,
                      double pprime, TimeWindow* window_out = nullptr);

struct InequalityReport {
  std::string name;
  double lhs = 0;
  std::vector<std::pair<std::string, double>> rhs;  // itemized, constant stripped
  double implied_constant = 0;
  double ceiling = kInfReportCeiling;
  bool pass = false;
  std::map<std::string, double> numbers;     // echoed inputs
  std::map<std::string, std::string> notes;

  static constexpr double kInfReportCeiling = 1e308;
};

/// ||u^2||_{rho,B_R} against |B_R|^{2/d} ||nu||_{q,B_R} * (normalized
/// nearest-neighbor energy) plus ||u^2||_{p*,B_R}. Refuses when the exponent
/// condition (1-1/d)/p + 1/q <= 1/d fails or rho is infinite.
InequalityReport sobolev_audit(const Environment& env, const LatticeField& u,
                               double R, double p, double q);

/// Weighted Poincare: sum eta^2 |u - weighted mean|^2 against
/// |B_R|^{2/d} ||nu||_{d/2,B_R} * (eta^2-weighted nn energy) / |B_R|.
/// Phi must be nonincreasing; eta(x) = Phi(|x|).
InequalityReport poincare_audit(const Environment& env, const LatticeField& u,
                                double R, const std::function<double(double)>& Phi);

/// Weak parabolic Harnack: mean of u over U^-(t0,r) against
/// inf_{U^+(t0,r)} u plus (r/R)^2 sup_t ||Tail(u_-(t,.),R)||_{p,B_2r}.
/// u must be caloric data from solve_caloric, nonnegative on the B_R cylinder.
InequalityReport wphi_report(const Environment& env, const SpaceTimeField& u,
                             double t0, double r, double R, double p);

/// Maximal inequality: max_{Q_{theta' n^2, theta' n}} |u| against
/// n^{-(m-2)} ||u||_{inf,inf,[-n^2,0] x box} plus
/// (M_n/(theta-theta')^{m+3}) ||u||_{1,1,Q_{theta n^2, theta n}}.
InequalityReport maximal_report(const Environment& env, const SpaceTimeField& u,
                                double n, double m, double theta, double theta_prime,
                                double p, double q);

struct HolderReport {
  std::vector<double> radii;        // 6^{-k} R while > 2
  std::vector<double> osc;          // max - min over Q(6^{-k}R)
  bool nonincreasing = false;
  double beta_hat = 0;
  bool beta_defined = false;
  double shrink_base = 6;
};

/// Oscillation decay over the shrinking windows Q(b^{-k}R) =
/// [-(b^{-k}R)^2/2, (b^{-k}R)^2/2] x B_{b^{-k}R} and the fitted decay rate.
HolderReport holder_report(const Environment& env, const SpaceTimeField& u,
                           double R, double shrink_base = 6.0);

}  // namespace rcm
