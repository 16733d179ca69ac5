#include "rcm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rcm/parallel.hpp"

namespace rcm {

namespace {

// One uniformization step: advance the entries of `u` listed in `active` by
// dt; all other entries are held fixed and act as frozen sources. Truncation
// keeps the Poisson tail below tol.
void uniform_step(const Environment& env, std::span<double> u, double dt,
                  double tol, const std::vector<std::int64_t>& active) {
  if (active.empty() || dt <= 0) return;
  double lambda_rate = 0;
  for (auto i : active) lambda_rate = std::max(lambda_rate, env.pi(i));
  if (lambda_rate <= 0) throw std::invalid_argument("evolve: Lambda = 0");
  if (tol <= 0) throw std::invalid_argument("evolve: tol must be positive");

  const double lam = dt * lambda_rate;
  const double inv_rate = 1.0 / lambda_rate;
  const std::int64_t na = static_cast<std::int64_t>(active.size());

  // ping-pong buffers hold the full field so frozen neighbors are visible
  std::vector<double> cur(u.begin(), u.end());
  std::vector<double> nxt(u.begin(), u.end());
  std::vector<double> acc(static_cast<std::size_t>(na), 0.0);

  const double log_lam = std::log(lam);
  double cum = 0;
  const std::int64_t hard_cap =
      static_cast<std::int64_t>(lam + 40.0 * std::sqrt(lam + 25.0) + 64.0);
  for (std::int64_t k = 0;; ++k) {
    const double logw = -lam + k * log_lam - std::lgamma(double(k) + 1.0);
    const double w = std::exp(logw);
    if (k > 0) {
      par::parallel_for(na, [&](std::int64_t j) {
        const std::int64_t x = active[static_cast<std::size_t>(j)];
        double s = cur[static_cast<std::size_t>(x)] * (1.0 - env.pi(x) * inv_rate);
        for (const auto& nb : env.neighbors(x))
          s += cur[static_cast<std::size_t>(nb.site)] * (nb.c * inv_rate);
        nxt[static_cast<std::size_t>(x)] = s;
      });
      cur.swap(nxt);
    }
    if (w > 0) {
      par::parallel_for(na, [&](std::int64_t j) {
        acc[static_cast<std::size_t>(j)] +=
            w * cur[static_cast<std::size_t>(active[static_cast<std::size_t>(j)])];
      });
      cum += w;
    }
    if ((cum >= 1.0 - tol && double(k) >= lam) || k >= hard_cap) break;
  }
  for (std::int64_t j = 0; j < na; ++j)
    u[static_cast<std::size_t>(active[static_cast<std::size_t>(j)])] =
        acc[static_cast<std::size_t>(j)];
}

std::vector<std::int64_t> all_sites(const Environment& env) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(env.site_count()));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<std::int64_t>(i);
  return v;
}

}  // namespace

double apply_generator(const Environment& env, const LatticeField& u,
                       std::int64_t x, double exterior) {
  double s = 0;
  const double ux = u[x];
  for (const auto& nb : env.neighbors(x)) s += (u[nb.site] - ux) * nb.c;
  s += (exterior - ux) * env.exit_rate(x);
  return s;
}

double dirichlet_energy(const Environment& env, const LatticeField& f) {
  const Box& bx = env.box();
  double e = 0;
  for (const auto& rec : env.edges()) {
    const double df = f[bx.index(rec.x)] - f[bx.index(rec.y)];
    e += df * df * rec.c;
  }
  return e;  // ordered-pair double count cancels the 1/2
}

SpaceTimeField evolve(const Environment& env, const LatticeField& u0, double T,
                      double tol, std::int64_t steps) {
  if (T <= 0) throw std::invalid_argument("evolve: T must be positive");
  if (steps < 1) throw std::invalid_argument("evolve: steps must be >= 1");
  if (!(u0.box() == env.box())) throw std::invalid_argument("evolve: box mismatch");
  const auto active = all_sites(env);
  SpaceTimeField out(env.box(), 0.0, T / double(steps), steps);
  std::vector<double> u(u0.values().begin(), u0.values().end());
  std::copy(u.begin(), u.end(), out.slice(0).begin());
  for (std::int64_t s = 1; s <= steps; ++s) {
    uniform_step(env, u, T / double(steps), tol, active);
    std::copy(u.begin(), u.end(), out.slice(s).begin());
  }
  return out;
}

LatticeField heat_kernel(const Environment& env, double t, std::int64_t x,
                         double tol) {
  LatticeField u = LatticeField::delta(env.box(), x);
  if (t == 0) return u;
  SpaceTimeField st = evolve(env, u, t, tol, 1);
  LatticeField out(env.box());
  auto last = st.slice(st.steps());
  std::copy(last.begin(), last.end(), out.values().begin());
  return out;
}

HeatKernelSequence::HeatKernelSequence(const Environment& env, std::int64_t x0,
                                       double tol)
    : env_(&env), state_(LatticeField::delta(env.box(), x0)), tol_(tol) {}

const LatticeField& HeatKernelSequence::advance_to(double t) {
  if (t < t_) throw std::invalid_argument("HeatKernelSequence: time must not decrease");
  if (t > t_) {
    const auto active = all_sites(*env_);
    std::vector<double> u(state_.values().begin(), state_.values().end());
    uniform_step(*env_, u, t - t_, tol_, active);
    std::copy(u.begin(), u.end(), state_.values().begin());
    t_ = t;
  }
  return state_;
}

SpaceTimeField solve_caloric(const Environment& env, const Cylinder& cyl,
                             const LatticeField& initial,
                             const SpaceTimeField& exterior, double tol) {
  const Box& bx = env.box();
  if (!(exterior.box() == bx) || !(initial.box() == bx))
    throw std::invalid_argument("solve_caloric: box mismatch");
  if (std::abs(exterior.t0() - cyl.t_lo) > 1e-9 * std::max(1.0, std::abs(cyl.t_lo)))
    throw std::invalid_argument("solve_caloric: exterior grid must start at the cylinder bottom");
  if (exterior.t_end() < cyl.t_hi - 1e-9)
    throw std::invalid_argument("solve_caloric: exterior grid does not cover the cylinder");

  const auto ball = bx.ball(cyl.center, cyl.radius);
  std::vector<char> in_ball(static_cast<std::size_t>(bx.site_count()), 0);
  for (auto i : ball) in_ball[static_cast<std::size_t>(i)] = 1;

  // every stored-edge-reachable site outside the ball must carry data
  std::vector<std::int64_t> reachable;
  for (auto i : ball) {
    for (const auto& nb : env.neighbors(i)) {
      if (!in_ball[static_cast<std::size_t>(nb.site)]) reachable.push_back(nb.site);
    }
  }
  std::sort(reachable.begin(), reachable.end());
  reachable.erase(std::unique(reachable.begin(), reachable.end()), reachable.end());
  for (std::int64_t s = 0; s <= exterior.steps(); ++s) {
    auto sl = exterior.slice(s);
    for (auto y : reachable) {
      if (std::isnan(sl[static_cast<std::size_t>(y)])) {
        std::ostringstream os;
        os << "solve_caloric: exterior missing reachable site index " << y << " (";
        Coord c = bx.coord(y);
        for (int k = 0; k < bx.dim(); ++k) os << (k ? "," : "") << c[k];
        os << ") at slice " << s;
        throw std::invalid_argument(os.str());
      }
    }
  }

  SpaceTimeField out(bx, exterior.t0(), exterior.dt(), exterior.steps());
  std::vector<double> u(exterior.slice(0).begin(), exterior.slice(0).end());
  for (auto i : ball) u[static_cast<std::size_t>(i)] = initial[i];
  std::copy(u.begin(), u.end(), out.slice(0).begin());

  for (std::int64_t s = 1; s <= exterior.steps(); ++s) {
    // freeze exterior at the left endpoint of the interval
    auto prev = exterior.slice(s - 1);
    for (std::size_t i = 0; i < u.size(); ++i)
      if (!in_ball[i]) u[i] = prev[i];
    uniform_step(env, u, exterior.dt(), tol, ball);
    auto now = exterior.slice(s);
    for (std::size_t i = 0; i < u.size(); ++i)
      if (!in_ball[i]) u[i] = now[i];
    std::copy(u.begin(), u.end(), out.slice(s).begin());
  }
  return out;
}

OndiagReport ondiag_check(const Environment& env, std::vector<double> t_grid,
                          double factor_ceiling, double tol) {
  std::sort(t_grid.begin(), t_grid.end());
  OndiagReport rep;
  rep.factor_ceiling = factor_ceiling;
  const Box& bx = env.box();
  const std::int64_t origin = bx.index(bx.origin());
  HeatKernelSequence seq(env, origin, tol);
  for (double t : t_grid) {
    if (t <= 0 || std::sqrt(t) / 4.0 > bx.half_width()) {
      rep.excluded.push_back(t);
      continue;
    }
    const LatticeField& p = seq.advance_to(t);
    const auto ball = bx.ball(bx.origin(), std::sqrt(t) / 4.0);
    OndiagEntry e;
    e.t = t;
    e.sup_p = 0;
    e.argmax_site = origin;
    for (auto i : ball) {
      if (p[i] > e.sup_p) {
        e.sup_p = p[i];
        e.argmax_site = i;
      }
    }
    e.scaled = std::pow(t, bx.dim() / 2.0) * e.sup_p;
    rep.entries.push_back(e);
  }
  if (!rep.entries.empty()) {
    rep.max_scaled = rep.entries[0].scaled;
    rep.min_scaled = rep.entries[0].scaled;
    for (const auto& e : rep.entries) {
      rep.max_scaled = std::max(rep.max_scaled, e.scaled);
      rep.min_scaled = std::min(rep.min_scaled, e.scaled);
    }
    rep.ratio = rep.min_scaled > 0 ? rep.max_scaled / rep.min_scaled
                                   : std::numeric_limits<double>::infinity();
    rep.bounded = rep.ratio <= factor_ceiling;
  }
  return rep;
}

}  // namespace rcm
