#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace rcm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// reciprocal with the 1/inf = 0 convention
inline double rcp(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

// conjugate exponent p/(p-1); p_* = inf at p = 1 and 1 at p = inf
inline double conjugate(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInf;
  return p / (p - 1.0);
}

// Integrability bookkeeping (d, p, q) and every exponent derived from it.
struct ExponentSet {
  int d = 2;
  double p = kInf;
  double q = kInf;
  double m = 0;  // tail-moment order, carried along when relevant
  double s = 0;  // model exponent, carried along when relevant

  double p_star() const { return conjugate(p); }
  double q_star() const { return conjugate(q); }

  // rho = d/(d-2+d/q); infinity when the denominator vanishes (d=2, q=inf)
  double rho() const {
    const double denom = d - 2.0 + d * rcp(q);
    if (denom <= 0.0) return kInf;
    return d / denom;
  }
  double kappa() const {  // (rho-1)/rho
    const double r = rho();
    return std::isinf(r) ? 1.0 : (r - 1.0) / r;
  }
  double theta() const { return (1.0 + kappa()) / p_star(); }

  // gamma = (d(p-1)+4p)/(p+1), the |z|-exponent of mu_*
  double gamma() const {
    if (std::isinf(p)) return d + 4.0;
    return (d * (p - 1.0) + 4.0 * p) / (p + 1.0);
  }
  // gamma0 = gamma (p+1)/(2p)
  double gamma0() const {
    if (std::isinf(p)) return (d + 4.0) / 2.0;
    return gamma() * (p + 1.0) / (2.0 * p);
  }
};

struct AssumptionReport {
  ExponentSet exponents;
  bool moment_condition_11 = false;   // 1/p + 1/q < 2/d
  bool strong_first = false;          // 1/p + 1/q <= (1 + 1/p)/d
  bool strong_second = false;         // 1/(p-1) + 1/q < 2/d
  bool sobolev_condition = false;     // (1 - 1/d)/p + 1/q <= 1/d
  double rho = 0, kappa = 0, theta = 0;
  bool rho_infinite = false;
  std::string q_infinity_note;        // set when q = inf
};

/// Verdicts for the moment assumptions at the given exponents. Requires
/// d >= 2 and p, q in (1, inf].
AssumptionReport check_assumptions(const ExponentSet& e);

}  // namespace rcm
