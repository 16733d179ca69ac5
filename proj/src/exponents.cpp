#include "rcm/exponents.hpp"

#include <stdexcept>

namespace rcm {

AssumptionReport check_assumptions(const ExponentSet& e) {
  if (e.d < 2) throw std::invalid_argument("check_assumptions: d >= 2 required");
  if (!(e.p > 1.0)) throw std::invalid_argument("check_assumptions: p > 1 required");
  if (!(e.q > 1.0)) throw std::invalid_argument("check_assumptions: q > 1 required");

  AssumptionReport rep;
  rep.exponents = e;
  const double ip = rcp(e.p), iq = rcp(e.q), d = e.d;
  rep.moment_condition_11 = ip + iq < 2.0 / d;
  rep.strong_first = ip + iq <= (1.0 + ip) / d;
  rep.strong_second = (std::isinf(e.p) ? 0.0 : 1.0 / (e.p - 1.0)) + iq < 2.0 / d;
  rep.sobolev_condition = (1.0 - 1.0 / d) * ip + iq <= 1.0 / d;
  rep.rho = e.rho();
  rep.rho_infinite = std::isinf(rep.rho);
  rep.kappa = e.kappa();
  rep.theta = e.theta();
  if (std::isinf(e.q))
    rep.q_infinity_note =
        "q = inf read as: inf over nearest-neighbor conductances is positive";
  return rep;
}

}  // namespace rcm
