#include "rcm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rcm/exponents.hpp"

namespace rcm {

double norm_spatial(std::span<const double> values,
                    const std::vector<std::int64_t>& sites, double p) {
  return ball_norm(values, sites, p);
}

TimeWindow snap_window(const SpaceTimeField& u, double t_lo, double t_hi) {
  if (t_hi < t_lo) throw std::invalid_argument("snap_window: empty window");
  TimeWindow w;
  w.requested_lo = t_lo;
  w.requested_hi = t_hi;
  w.s_lo = u.snap(t_lo);
  w.s_hi = u.snap(t_hi);
  if (w.s_hi < w.s_lo) w.s_hi = w.s_lo;
  w.snapped_lo = u.time(w.s_lo);
  w.snapped_hi = u.time(w.s_hi);
  return w;
}

double norm_spacetime(const SpaceTimeField& u, double t_lo, double t_hi,
                      const std::vector<std::int64_t>& sites, double p,
                      double pprime, TimeWindow* window_out) {
  TimeWindow w = snap_window(u, t_lo, t_hi);
  if (window_out) *window_out = w;
  if (std::isinf(pprime)) {
    double m = 0;
    for (std::int64_t s = w.s_lo; s <= w.s_hi; ++s)
      m = std::max(m, norm_spatial(u.slice(s), sites, p));
    return m;
  }
  if (pprime < 1) throw std::invalid_argument("norm_spacetime: p' >= 1 required");
  if (w.s_hi == w.s_lo) return norm_spatial(u.slice(w.s_lo), sites, p);
  double acc = 0;
  for (std::int64_t s = w.s_lo; s <= w.s_hi; ++s) {
    const double v = std::pow(norm_spatial(u.slice(s), sites, p), pprime);
    const double weight = (s == w.s_lo || s == w.s_hi) ? 0.5 : 1.0;
    acc += weight * v;
  }
  const double len = w.snapped_hi - w.snapped_lo;
  return std::pow(acc * u.dt() / len, 1.0 / pprime);
}

namespace {

std::vector<char> membership(const Box& bx, const std::vector<std::int64_t>& sites) {
  std::vector<char> in(static_cast<std::size_t>(bx.site_count()), 0);
  for (auto i : sites) in[static_cast<std::size_t>(i)] = 1;
  return in;
}

// sum over ordered nearest-neighbor pairs inside the ball of
// (u(x)-u(y))^2 * weight(x,y) * C_{x,y}
template <typename WeightFn>
double nn_energy(const Environment& env, std::span<const double> u,
                 const std::vector<std::int64_t>& sites, WeightFn&& weight) {
  const Box& bx = env.box();
  auto in = membership(bx, sites);
  double acc = 0;
  for (auto x : sites) {
    const Coord xc = bx.coord(x);
    for (const auto& nb : env.neighbors(x)) {
      if (!in[static_cast<std::size_t>(nb.site)]) continue;
      if (bx.distance2(xc, bx.coord(nb.site)) != 1.0) continue;
      const double du = u[static_cast<std::size_t>(x)] - u[static_cast<std::size_t>(nb.site)];
      acc += du * du * weight(x, nb.site) * nb.c;
    }
  }
  return acc;
}

double finalize_ratio(double numer, double denom) {
  if (numer <= 0) return 0.0;
  if (denom <= 0) return kInf;
  return numer / denom;
}

void set_pass(InequalityReport& rep) {
  rep.pass = rep.implied_constant >= 0 &&
             rep.implied_constant <= rep.ceiling;
}

}  // namespace

InequalityReport sobolev_audit(const Environment& env, const LatticeField& u,
                               double R, double p, double q) {
  const Box& bx = env.box();
  const double d = bx.dim();
  const double cond = (1.0 - 1.0 / d) * rcp(p) + rcp(q);
  if (cond > 1.0 / d + 1e-15) {
    std::ostringstream os;
    os << "sobolev_audit: exponent condition violated: (1-1/d)/p + 1/q = " << cond
       << " > 1/d = " << 1.0 / d;
    throw std::invalid_argument(os.str());
  }
  ExponentSet es{bx.dim(), p, q};
  const double rho = es.rho();
  if (std::isinf(rho))
    throw std::invalid_argument("sobolev_audit: rho is infinite at these exponents (d=2, q=inf)");

  const auto ball = bx.ball(bx.origin(), R);
  std::vector<double> usq(static_cast<std::size_t>(bx.site_count()), 0.0);
  for (std::int64_t i = 0; i < bx.site_count(); ++i) usq[static_cast<std::size_t>(i)] = u[i] * u[i];

  const auto prof = moments(env, {}, std::isinf(p) ? kInf : std::max(p, 1.5), q);
  const double nu_norm = ball_norm(prof.nu, ball, q);
  const double energy = nn_energy(env, u.values(), ball, [](std::int64_t, std::int64_t) { return 1.0; }) /
                        static_cast<double>(ball.size());

  InequalityReport rep;
  rep.name = "sobolev";
  rep.lhs = norm_spatial(usq, ball, rho);
  const double vol_factor = std::pow(static_cast<double>(ball.size()), 2.0 / d);
  const double rhs_energy = vol_factor * nu_norm * energy;
  const double rhs_mass = norm_spatial(usq, ball, es.p_star());
  rep.rhs = {{"volume_nu_energy", rhs_energy}, {"u2_pstar_norm", rhs_mass}};
  double numer = rep.lhs - rhs_mass;
  if (numer <= 1e-12 * std::max(rep.lhs, rhs_mass)) numer = 0;  // equality case
  rep.implied_constant = finalize_ratio(numer, rhs_energy);
  rep.numbers = {{"R", R}, {"p", p}, {"q", q}, {"rho", rho},
                 {"ball_sites", double(ball.size())}, {"nu_norm_q", nu_norm},
                 {"nn_energy_normalized", energy}};
  rep.notes["env"] = env.meta().id;
  set_pass(rep);
  return rep;
}

InequalityReport poincare_audit(const Environment& env, const LatticeField& u,
                                double R, const std::function<double(double)>& Phi) {
  const Box& bx = env.box();
  const double d = bx.dim();
  // Phi must be nonincreasing on [0, R]
  {
    const int k = 64;
    double prev = Phi(0.0);
    for (int i = 1; i <= k; ++i) {
      const double cur = Phi(R * double(i) / double(k));
      if (cur > prev + 1e-12 * std::max(1.0, std::abs(prev)))
        throw std::invalid_argument("poincare_audit: profile Phi is increasing");
      prev = cur;
    }
  }
  const auto ball = bx.ball(bx.origin(), R);
  std::vector<double> eta(static_cast<std::size_t>(bx.site_count()), 0.0);
  const Coord origin = bx.origin();
  for (auto i : ball)
    eta[static_cast<std::size_t>(i)] = Phi(bx.distance(origin, bx.coord(i)));

  double sum_eta2 = 0, sum_ueta2 = 0;
  for (auto i : ball) {
    const double e2 = eta[static_cast<std::size_t>(i)] * eta[static_cast<std::size_t>(i)];
    sum_eta2 += e2;
    sum_ueta2 += u[i] * e2;
  }
  if (sum_eta2 <= 0)
    throw std::invalid_argument("poincare_audit: Phi vanishes on the whole ball");
  const double mean = sum_ueta2 / sum_eta2;

  double lhs = 0;
  for (auto i : ball) {
    const double dev = u[i] - mean;
    lhs += eta[static_cast<std::size_t>(i)] * eta[static_cast<std::size_t>(i)] * dev * dev;
  }

  const auto prof = moments(env, {}, 2.0, std::max(d / 2.0, 1.0));
  const double nu_norm = ball_norm(prof.nu, ball, d / 2.0);
  const double energy = nn_energy(env, u.values(), ball, [&](std::int64_t a, std::int64_t b) {
    const double ea = eta[static_cast<std::size_t>(a)], eb = eta[static_cast<std::size_t>(b)];
    return std::max(ea * ea, eb * eb);
  });

  InequalityReport rep;
  rep.name = "poincare";
  rep.lhs = lhs;
  const double vol_factor = std::pow(static_cast<double>(ball.size()), 2.0 / d);
  const double rhs_val = vol_factor * nu_norm * energy / static_cast<double>(ball.size());
  rep.rhs = {{"volume_nu_energy", rhs_val}};
  rep.implied_constant = finalize_ratio(lhs, rhs_val);
  rep.numbers = {{"R", R}, {"ball_sites", double(ball.size())},
                 {"nu_norm_dhalf", nu_norm}, {"weighted_mean", mean},
                 {"weighted_energy", energy}};
  rep.notes["env"] = env.meta().id;
  set_pass(rep);
  return rep;
}

InequalityReport wphi_report(const Environment& env, const SpaceTimeField& u,
                             double t0, double r, double R, double p) {
  const Box& bx = env.box();
  if (!(r >= 2.0) || !(r < R / 4.0))
    throw std::invalid_argument("wphi_report: need 2 <= r < R/4");
  if (R > bx.half_width())
    throw std::invalid_argument("wphi_report: B_R exceeds the box");
  if (!u.covers(t0 - 4 * r * r, t0 + 4 * r * r))
    throw std::invalid_argument("wphi_report: [t0-4r^2, t0+4r^2] outside the solved window");

  const auto ball_R = bx.ball(bx.origin(), R);
  const auto ball_r = bx.ball(bx.origin(), r);
  const auto ball_2r = bx.ball(bx.origin(), 2 * r);

  // hypothesis: u >= 0 on the solved part of [-2R^2, 2R^2] x B_R
  {
    const TimeWindow hw = snap_window(u, std::max(-2 * R * R, u.t0()),
                                      std::min(2 * R * R, u.t_end()));
    double umax = 0;
    for (std::int64_t s = hw.s_lo; s <= hw.s_hi; ++s) {
      auto sl = u.slice(s);
      for (auto i : ball_R) umax = std::max(umax, std::abs(sl[static_cast<std::size_t>(i)]));
    }
    const double neg_tol = 1e-9 * std::max(umax, 1e-300);
    for (std::int64_t s = hw.s_lo; s <= hw.s_hi; ++s) {
      auto sl = u.slice(s);
      for (auto i : ball_R) {
        if (sl[static_cast<std::size_t>(i)] < -neg_tol) {
          std::ostringstream os;
          os << "wphi_report: u negative on the cylinder (site " << i << ", t="
             << u.time(s) << ", value " << sl[static_cast<std::size_t>(i)] << ")";
          throw std::invalid_argument(os.str());
        }
      }
    }
  }

  TimeWindow wm;
  const double lhs = norm_spacetime(u, t0 - 2 * r * r, t0 - r * r, ball_r, 1.0, 1.0, &wm);

  const TimeWindow wp = snap_window(u, t0 + r * r, t0 + 2 * r * r);
  double inf_plus = kInf;
  for (std::int64_t s = wp.s_lo; s <= wp.s_hi; ++s) {
    auto sl = u.slice(s);
    for (auto i : ball_r) inf_plus = std::min(inf_plus, sl[static_cast<std::size_t>(i)]);
  }

  const TimeWindow wt = snap_window(u, t0 - 4 * r * r, t0 + 4 * r * r);
  double tail_sup = 0;
  std::vector<double> uneg(static_cast<std::size_t>(bx.site_count()));
  std::vector<double> tails(static_cast<std::size_t>(bx.site_count()), 0.0);
  for (std::int64_t s = wt.s_lo; s <= wt.s_hi; ++s) {
    auto sl = u.slice(s);
    for (std::size_t i = 0; i < uneg.size(); ++i) uneg[i] = std::max(-sl[i], 0.0);
    for (auto x : ball_2r)
      tails[static_cast<std::size_t>(x)] = tail(env, uneg, R, x);
    tail_sup = std::max(tail_sup, ball_norm(tails, ball_2r, p));
  }
  const double tail_term = (r / R) * (r / R) * tail_sup;

  InequalityReport rep;
  rep.name = "wphi";
  rep.lhs = lhs;
  rep.rhs = {{"inf_u_plus_window", inf_plus}, {"tail_term", tail_term}};
  rep.implied_constant = finalize_ratio(lhs, inf_plus + tail_term);
  rep.numbers = {{"t0", t0}, {"r", r}, {"R", R}, {"p", p},
                 {"grid_dt", u.dt()},
                 {"uminus_window_lo", wm.snapped_lo}, {"uminus_window_hi", wm.snapped_hi},
                 {"uplus_window_lo", wp.snapped_lo}, {"uplus_window_hi", wp.snapped_hi}};
  rep.notes["env"] = env.meta().id;
  set_pass(rep);
  return rep;
}

InequalityReport maximal_report(const Environment& env, const SpaceTimeField& u,
                                double n, double m, double theta, double theta_prime,
                                double p, double q) {
  const Box& bx = env.box();
  if (!(0.5 <= theta_prime) || !(theta_prime < theta) || !(theta < 1.0))
    throw std::invalid_argument("maximal_report: need 1/2 <= theta' < theta < 1");
  if (!u.covers(-4 * n * n, 0))
    throw std::invalid_argument("maximal_report: window [-4n^2, 0] outside the solved field");
  if (2 * n > bx.half_width())
    throw std::invalid_argument("maximal_report: B_2n exceeds the box");

  const auto ball_tp = bx.ball(bx.origin(), theta_prime * n);
  const auto ball_t = bx.ball(bx.origin(), theta * n);

  const TimeWindow w1 = snap_window(u, -theta_prime * n * n, 0.0);
  double lhs = 0;
  for (std::int64_t s = w1.s_lo; s <= w1.s_hi; ++s) {
    auto sl = u.slice(s);
    for (auto i : ball_tp) lhs = std::max(lhs, std::abs(sl[static_cast<std::size_t>(i)]));
  }

  const TimeWindow w2 = snap_window(u, -n * n, 0.0);
  double sup_all = 0;
  for (std::int64_t s = w2.s_lo; s <= w2.s_hi; ++s) {
    auto sl = u.slice(s);
    for (double v : sl) sup_all = std::max(sup_all, std::abs(v));
  }
  const double comp_sup = std::pow(n, -(m - 2.0)) * sup_all;

  const double mn = maximal_m_factor(env, ball_t, p, q, m);
  const double l11 = norm_spacetime(u, -theta * n * n, 0.0, ball_t, 1.0, 1.0);
  const double comp_mean = mn / std::pow(theta - theta_prime, m + 3.0) * l11;

  InequalityReport rep;
  rep.name = "maximal";
  rep.lhs = lhs;
  rep.rhs = {{"sup_term", comp_sup}, {"mean_term", comp_mean}};
  rep.implied_constant = finalize_ratio(lhs, comp_sup + comp_mean);
  rep.numbers = {{"n", n}, {"m", m}, {"theta", theta}, {"theta_prime", theta_prime},
                 {"p", p}, {"q", q}, {"M_n", mn}, {"u_11_norm", l11},
                 {"sup_box_norm", sup_all}, {"grid_dt", u.dt()}};
  rep.notes["env"] = env.meta().id;
  rep.notes["sup_norm_domain"] =
      "||u||_{inf,inf} evaluated over the stored box, not all of Z^d";
  set_pass(rep);
  return rep;
}

HolderReport holder_report(const Environment& env, const SpaceTimeField& u,
                           double R, double shrink_base) {
  const Box& bx = env.box();
  if (shrink_base <= 1) throw std::invalid_argument("holder_report: base must exceed 1");
  if (!u.covers(-R * R / 2, R * R / 2))
    throw std::invalid_argument("holder_report: Q(R) outside the solved window");
  HolderReport rep;
  rep.shrink_base = shrink_base;
  double rk = R;
  while (rk > 2.0) {
    const TimeWindow w = snap_window(u, -rk * rk / 2.0, rk * rk / 2.0);
    const auto ball = bx.ball(bx.origin(), rk);
    double lo = kInf, hi = -kInf;
    for (std::int64_t s = w.s_lo; s <= w.s_hi; ++s) {
      auto sl = u.slice(s);
      for (auto i : ball) {
        lo = std::min(lo, sl[static_cast<std::size_t>(i)]);
        hi = std::max(hi, sl[static_cast<std::size_t>(i)]);
      }
    }
    rep.radii.push_back(rk);
    rep.osc.push_back(hi - lo);
    rk /= shrink_base;
  }
  rep.nonincreasing = true;
  for (std::size_t k = 1; k < rep.osc.size(); ++k)
    if (rep.osc[k] > rep.osc[k - 1] + 1e-15) rep.nonincreasing = false;

  // least squares of log osc_k against k; beta_hat = -slope / log(base)
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < rep.osc.size(); ++k) {
    if (rep.osc[k] > 0) {
      xs.push_back(static_cast<double>(k));
      ys.push_back(std::log(rep.osc[k]));
    }
  }
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= double(xs.size());
    my /= double(ys.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx > 0) {
      rep.beta_hat = -(sxy / sxx) / std::log(shrink_base);
      rep.beta_defined = true;
    }
  }
  return rep;
}

}  // namespace rcm
