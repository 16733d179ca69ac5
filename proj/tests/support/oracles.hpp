#pragma once

// Dense reference implementations used only by the test suites. Everything
// here recomputes results along an independent route: dense matrices and
// Eigen factorizations instead of the library's sparse/matrix-free paths.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <vector>

#include "rcm/environment.hpp"
#include "rcm/field.hpp"
#include "rcm/rng.hpp"

namespace oracle {

using rcm::Boundary;
using rcm::Box;
using rcm::Coord;
using rcm::EdgeRecord;
using rcm::EnvMeta;
using rcm::Environment;

// dense generator including the box-exit killing on the diagonal
inline Eigen::MatrixXd dense_generator(const Environment& env) {
  const auto n = env.site_count();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    for (const auto& nb : env.neighbors(i)) A(i, nb.site) += nb.c;
    A(i, i) = -env.pi(i);
  }
  return A;
}

inline Eigen::VectorXd field_vector(const rcm::LatticeField& f) {
  Eigen::VectorXd v(f.size());
  for (std::int64_t i = 0; i < f.size(); ++i) v(i) = f[i];
  return v;
}

// e^{tA} u0 by Eigen's scaling-and-squaring matrix exponential
inline Eigen::VectorXd expm_apply(const Environment& env, const Eigen::VectorXd& u0,
                                  double t) {
  Eigen::MatrixXd A = dense_generator(env);
  Eigen::MatrixXd E = (t * A).exp();
  return E * u0;
}

// dense implicit Euler for the caloric problem with frozen exterior data
// (left endpoint per interval), with Richardson extrapolation in the step
inline std::vector<Eigen::VectorXd> implicit_euler_caloric(
    const Environment& env, const std::vector<std::int64_t>& ball,
    const Eigen::VectorXd& initial_full, const rcm::SpaceTimeField& exterior,
    int substeps) {
  const auto n = env.site_count();
  std::vector<char> in(n, 0);
  for (auto i : ball) in[static_cast<std::size_t>(i)] = 1;
  Eigen::MatrixXd A = dense_generator(env);

  // interior-restricted operator and coupling to frozen sites
  const auto nb = static_cast<std::int64_t>(ball.size());
  Eigen::MatrixXd Aii(nb, nb);
  for (std::int64_t a = 0; a < nb; ++a)
    for (std::int64_t b = 0; b < nb; ++b) Aii(a, b) = A(ball[a], ball[b]);

  std::vector<Eigen::VectorXd> out;
  Eigen::VectorXd u = initial_full;
  out.push_back(u);
  const double dt = exterior.dt();
  for (std::int64_t s = 1; s <= exterior.steps(); ++s) {
    auto prev = exterior.slice(s - 1);
    Eigen::VectorXd frozen(n);
    for (std::int64_t i = 0; i < n; ++i)
      frozen(i) = in[static_cast<std::size_t>(i)] ? 0.0 : prev[static_cast<std::size_t>(i)];
    Eigen::VectorXd b(nb);
    for (std::int64_t a = 0; a < nb; ++a) {
      double acc = 0;
      for (std::int64_t j = 0; j < n; ++j)
        if (!in[static_cast<std::size_t>(j)]) acc += A(ball[a], j) * frozen(j);
      b(a) = acc;
    }
    Eigen::VectorXd x(nb);
    for (std::int64_t a = 0; a < nb; ++a) x(a) = u(ball[a]);
    const double h = dt / substeps;
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(nb, nb) - h * Aii;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    for (int k = 0; k < substeps; ++k) x = lu.solve(x + h * b);
    auto now = exterior.slice(s);
    for (std::int64_t i = 0; i < n; ++i)
      u(i) = in[static_cast<std::size_t>(i)] ? 0.0 : now[static_cast<std::size_t>(i)];
    for (std::int64_t a = 0; a < nb; ++a) u(ball[a]) = x(a);
    out.push_back(u);
  }
  return out;
}

// Moore-Penrose solve of the corrector equation on a dense torus Laplacian
inline std::vector<Eigen::VectorXd> pinv_corrector(const Environment& env) {
  const auto n = env.site_count();
  const Box& bx = env.box();
  Eigen::MatrixXd A = -dense_generator(env);  // graph Laplacian
  std::vector<Eigen::VectorXd> g(bx.dim(), Eigen::VectorXd::Zero(n));
  for (std::int64_t x = 0; x < n; ++x) {
    const Coord xc = bx.coord(x);
    for (const auto& nb : env.neighbors(x)) {
      const Coord z = bx.displacement(xc, bx.coord(nb.site));
      for (int i = 0; i < bx.dim(); ++i) g[static_cast<std::size_t>(i)](x) += z[i] * nb.c;
    }
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  std::vector<Eigen::VectorXd> chi;
  const std::int64_t origin = bx.index(bx.origin());
  for (int i = 0; i < bx.dim(); ++i) {
    Eigen::VectorXd sol = cod.solve(g[static_cast<std::size_t>(i)]);
    sol.array() -= sol(origin);
    chi.push_back(sol);
  }
  return chi;
}

// ad-hoc random conductance fields for oracle tests: nn bonds U[0.2,3], extra
// longer edges kept with probability 0.3 at weight U[0,1.5]
inline Environment random_env(int d, Boundary boundary, int side, double lmax,
                              std::uint64_t seed) {
  Box bx(d, boundary, side);
  std::vector<EdgeRecord> edges;
  const auto offsets = rcm::offsets_in_ball(d, lmax);
  for (std::int64_t i = 0; i < bx.site_count(); ++i) {
    const Coord x = bx.coord(i);
    for (const Coord& z : offsets) {
      Coord y = x;
      for (int k = 0; k < d; ++k) y[k] += z[k];
      const bool exits = boundary == Boundary::box && !bx.contains(y);
      if (!exits) {
        y = bx.wrap(y);
        if (y < x) continue;
      }
      Coord a = x, b = y;
      if (b < a) std::swap(a, b);
      std::uint64_t key = rcm::rng::derive_key(seed, {0x7465737465ULL});
      key = rcm::rng::fold(key, static_cast<std::uint64_t>(a[0]) * 1315423911ULL);
      for (int k = 0; k < d; ++k) key = rcm::rng::fold(key, static_cast<std::uint64_t>(a[k] + 1000));
      for (int k = 0; k < d; ++k) key = rcm::rng::fold(key, static_cast<std::uint64_t>(b[k] + 1000));
      rcm::rng::Stream st(key);
      double c;
      if (z.norm2() == 1.0) {
        c = st.next_uniform(0.2, 3.0);
      } else {
        c = st.next_unit() < 0.3 ? st.next_uniform(0.0, 1.5) : 0.0;
      }
      if (c > 0) edges.push_back({a, b, c});
    }
  }
  EnvMeta meta;
  meta.model = "test-random";
  meta.seed = seed;
  meta.non_paper = true;
  return Environment::from_edges(bx, std::move(edges), meta, lmax);
}

struct MeanStd {
  double mean = 0;
  double sd = 0;
};

inline MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd r;
  for (double v : xs) r.mean += v;
  r.mean /= static_cast<double>(xs.size());
  double acc = 0;
  for (double v : xs) acc += (v - r.mean) * (v - r.mean);
  r.sd = std::sqrt(acc / static_cast<double>(xs.size() - 1));
  return r;
}

}  // namespace oracle
