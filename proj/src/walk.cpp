#include "rcm/walk.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "rcm/rng.hpp"
#include "rcm/walk_tables.hpp"

namespace rcm {

const Environment::WalkTables& Environment::walk_tables() const {
  std::call_once(walk_once_, [this] {
    auto tables = std::make_unique<WalkTables>();
    const std::int64_t n = site_count();
    tables->offset.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::int64_t i = 0; i < n; ++i) {
      std::int64_t k = static_cast<std::int64_t>(neighbors(i).size());
      if (exit_rate(i) > 0) ++k;
      tables->offset[static_cast<std::size_t>(i) + 1] =
          tables->offset[static_cast<std::size_t>(i)] + std::max<std::int64_t>(k, 0);
    }
    const std::int64_t slots = tables->offset.back();
    tables->prob.assign(static_cast<std::size_t>(slots), 1.0);
    tables->target.assign(static_cast<std::size_t>(slots), WalkTables::kExit);
    tables->alias_target.assign(static_cast<std::size_t>(slots), WalkTables::kExit);

    std::vector<double> w;
    std::vector<std::int64_t> tgt, small, large;
    for (std::int64_t i = 0; i < n; ++i) {
      const auto nbrs = neighbors(i);
      w.clear();
      tgt.clear();
      for (const auto& nb : nbrs) {
        w.push_back(nb.c);
        tgt.push_back(nb.site);
      }
      if (exit_rate(i) > 0) {
        w.push_back(exit_rate(i));
        tgt.push_back(WalkTables::kExit);
      }
      const std::int64_t k = static_cast<std::int64_t>(w.size());
      if (k == 0) continue;
      const double total = pi(i);
      const std::int64_t base = tables->offset[static_cast<std::size_t>(i)];
      // Walker's method with index-ordered worklists
      small.clear();
      large.clear();
      for (std::int64_t j = 0; j < k; ++j) {
        w[static_cast<std::size_t>(j)] *= static_cast<double>(k) / total;
        (w[static_cast<std::size_t>(j)] < 1.0 ? small : large).push_back(j);
      }
      for (std::int64_t j = 0; j < k; ++j) {
        tables->target[static_cast<std::size_t>(base + j)] = tgt[static_cast<std::size_t>(j)];
        tables->alias_target[static_cast<std::size_t>(base + j)] = tgt[static_cast<std::size_t>(j)];
      }
      while (!small.empty() && !large.empty()) {
        const std::int64_t s = small.back();
        small.pop_back();
        const std::int64_t l = large.back();
        tables->prob[static_cast<std::size_t>(base + s)] = w[static_cast<std::size_t>(s)];
        tables->alias_target[static_cast<std::size_t>(base + s)] =
            tgt[static_cast<std::size_t>(l)];
        w[static_cast<std::size_t>(l)] -= 1.0 - w[static_cast<std::size_t>(s)];
        if (w[static_cast<std::size_t>(l)] < 1.0) {
          large.pop_back();
          small.push_back(l);
        }
      }
      // leftovers keep prob 1
    }
    walk_tables_ = std::move(tables);
  });
  return *walk_tables_;
}

Trajectory sample_path(const Environment& env, std::int64_t x0, double T,
                       std::uint64_t seed, std::uint64_t stream_id) {
  if (T <= 0) throw std::invalid_argument("sample_path: T must be positive");
  if (!(env.pi(x0) > 0)) throw std::invalid_argument("sample_path: pi(x0) = 0");
  const auto& tables = env.walk_tables();
  rng::Stream st = rng::stream(seed, {rng::tag::kWalk, stream_id});

  Trajectory traj;
  traj.start = x0;
  traj.horizon = T;
  std::int64_t x = x0;
  double t = 0;
  while (true) {
    const double rate = env.pi(x);
    if (!(rate > 0)) throw std::runtime_error("sample_path: reached a site with pi = 0");
    t += st.next_exp(rate);
    if (t > T) break;
    const std::int64_t y = tables.sample(x, st.next_unit(), st.next_unit());
    if (y == Environment::WalkTables::kExit) {
      traj.killed = true;
      traj.kill_time = t;
      break;
    }
    x = y;
    traj.events.emplace_back(t, y);
  }
  traj.end_site = x;
  return traj;
}

EmpiricalKernel empirical_kernel(const Environment& env, double t, std::int64_t N,
                                 std::uint64_t seed, std::uint64_t base_stream) {
  if (t <= 0) throw std::invalid_argument("empirical_kernel: t must be positive");
  if (N < 1) throw std::invalid_argument("empirical_kernel: N >= 1 required");
  env.walk_tables();  // build once before the path loop
  const std::int64_t origin = env.box().index(env.box().origin());
  std::vector<std::int64_t> counts(static_cast<std::size_t>(env.site_count()), 0);
  std::int64_t killed = 0;
  for (std::int64_t i = 0; i < N; ++i) {
    Trajectory traj = sample_path(env, origin, t, seed, base_stream + static_cast<std::uint64_t>(i));
    if (traj.killed)
      ++killed;
    else
      ++counts[static_cast<std::size_t>(traj.end_site)];
  }
  EmpiricalKernel out;
  out.t = t;
  out.samples = N;
  out.killed_fraction = static_cast<double>(killed) / static_cast<double>(N);
  out.prob.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    out.prob[i] = static_cast<double>(counts[i]) / static_cast<double>(N);
  return out;
}

ScaledEndpoints scaled_endpoint_samples(const Environment& env, int n, double t,
                                        std::int64_t N, std::uint64_t seed,
                                        std::uint64_t base_stream) {
  if (n < 1) throw std::invalid_argument("scaled_endpoint_samples: n >= 1 required");
  const Box& bx = env.box();
  const std::int64_t origin = bx.index(bx.origin());
  const double horizon = static_cast<double>(n) * static_cast<double>(n) * t;
  ScaledEndpoints out;
  out.n = n;
  out.t = t;
  env.walk_tables();
  for (std::int64_t i = 0; i < N; ++i) {
    Trajectory traj =
        sample_path(env, origin, horizon, seed, base_stream + static_cast<std::uint64_t>(i));
    if (traj.killed) {
      ++out.killed;
      continue;
    }
    const Coord c = bx.coord(traj.end_site);
    std::array<double, kMaxDim> p{};
    for (int k = 0; k < bx.dim(); ++k) p[static_cast<std::size_t>(k)] = double(c[k]) / double(n);
    out.points.push_back(p);
  }
  // diffusive-range guard: mean mu over the box approximates E|X_s|^2 / s
  double mu_mean = 0;
  {
    const auto prof = moments(env, {}, 2.0, 2.0);
    for (double v : prof.mu) mu_mean += v;
    mu_mean /= static_cast<double>(prof.mu.size());
  }
  const double spread = 3.0 * std::sqrt(std::max(mu_mean, 1e-300) * horizon /
                                        std::max(1, bx.dim()));
  if (env.boundary() == Boundary::box) {
    const double frac = static_cast<double>(out.killed) / static_cast<double>(N);
    if (frac > 1e-3) {
      out.warning = "killed fraction " + std::to_string(frac) +
                    " exceeds 1e-3; box too small for the diffusive range";
    }
  } else if (spread > bx.half_width()) {
    out.warning = "3-sigma diffusive range " + std::to_string(spread) +
                  " exceeds the torus half-width " + std::to_string(bx.half_width());
  }
  return out;
}

}  // namespace rcm
