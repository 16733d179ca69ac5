#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rcm/kernel.hpp"
#include "rcm/walk.hpp"
#include "support/oracles.hpp"

using namespace rcm;

TEST_SUITE("walk") {

TEST_CASE("paths are valid and bit-reproducible") {
  Environment env = oracle::random_env(2, Boundary::torus, 10, 3.0, 5);
  for (std::uint64_t stream = 0; stream < 100; ++stream) {
    Trajectory t1 = sample_path(env, 0, 5.0, 99, stream);
    Trajectory t2 = sample_path(env, 0, 5.0, 99, stream);
    REQUIRE(t1.events.size() == t2.events.size());
    std::int64_t prev = t1.start;
    double tprev = 0;
    for (std::size_t k = 0; k < t1.events.size(); ++k) {
      REQUIRE(t1.events[k].first == t2.events[k].first);    // bit identical
      REQUIRE(t1.events[k].second == t2.events[k].second);
      REQUIRE(t1.events[k].first > tprev);                  // strictly increasing
      REQUIRE(env.conductance(prev, t1.events[k].second) > 0.0);  // stored edge
      prev = t1.events[k].second;
      tprev = t1.events[k].first;
    }
    REQUIRE(t1.end_site == prev);
  }
}

TEST_CASE("conductance scaling: same jump chain, rescaled clocks") {
  Environment env = oracle::random_env(2, Boundary::torus, 8, 2.0, 6);
  std::vector<EdgeRecord> scaled = env.edges();
  for (auto& e : scaled) e.c *= 2.0;
  Environment env2 = Environment::from_edges(env.box(), std::move(scaled),
                                             env.meta(), env.jump_cutoff());
  for (std::uint64_t stream = 0; stream < 200; ++stream) {
    Trajectory a = sample_path(env, 0, 4.0, 7, stream);
    Trajectory b = sample_path(env2, 0, 2.0, 7, stream);
    // with doubled rates, the same draws give the same targets at half times
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t k = 0; k < a.events.size(); ++k) {
      REQUIRE(a.events[k].second == b.events[k].second);
      REQUIRE(a.events[k].first == doctest::Approx(2.0 * b.events[k].first).epsilon(1e-14));
    }
  }
}

TEST_CASE("holding time mean is 1/pi") {
  Environment env = Environment::constant_nn(2, Boundary::torus, 16);
  const std::int64_t origin = env.box().index(env.box().origin());
  const int n = 100000;
  std::vector<double> first_holds;
  first_holds.reserve(n);
  for (int i = 0; i < n; ++i) {
    Trajectory t = sample_path(env, origin, 100.0, 13, static_cast<std::uint64_t>(i));
    REQUIRE(!t.events.empty());
    first_holds.push_back(t.events[0].first);
  }
  auto ms = oracle::mean_std(first_holds);
  const double target = 1.0 / env.pi(origin);  // = 0.25
  CHECK(std::abs(ms.mean - target) <= 3.0 * ms.sd / std::sqrt(double(n)));
}

TEST_CASE("mean square displacement is trace(M) t") {
  Environment env = Environment::constant_nn(2, Boundary::torus, 64);
  const Box& bx = env.box();
  const std::int64_t origin = bx.index(bx.origin());
  const double t = 2.0;
  const int n = 100000;
  std::vector<double> r2;
  r2.reserve(n);
  for (int i = 0; i < n; ++i) {
    Trajectory tr = sample_path(env, origin, t, 29, static_cast<std::uint64_t>(i));
    r2.push_back(bx.coord(tr.end_site).norm2());
  }
  auto ms = oracle::mean_std(r2);
  CHECK(std::abs(ms.mean - 4.0 * t) <= 3.0 * ms.sd / std::sqrt(double(n)));

  // monotone mean-square displacement, re-using the same streams at t/2
  std::vector<double> r2half;
  r2half.reserve(n / 10);
  for (int i = 0; i < n / 10; ++i) {
    Trajectory tr = sample_path(env, origin, t / 2, 29, static_cast<std::uint64_t>(i));
    r2half.push_back(bx.coord(tr.end_site).norm2());
  }
  auto mh = oracle::mean_std(r2half);
  CHECK(mh.mean <= ms.mean + 3.0 * (ms.sd + mh.sd) / std::sqrt(double(n / 10)));
}

TEST_CASE("empirical kernel: vanishing time keeps mass at the origin") {
  Environment env = Environment::constant_nn(2, Boundary::torus, 8);
  EmpiricalKernel k = empirical_kernel(env, 1e-9, 10000, 3);
  const std::int64_t origin = env.box().index(env.box().origin());
  CHECK(k.prob[static_cast<std::size_t>(origin)] >= 1.0 - 1e-6);
  double mass = k.killed_fraction;
  for (double v : k.prob) mass += v;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empirical kernel matches the deterministic kernel in TV") {
  Environment env = Environment::constant_nn(2, Boundary::box, 9);
  const double t = 1.0;
  EmpiricalKernel emp = empirical_kernel(env, t, 1000000, 17);
  LatticeField det = heat_kernel(env, t, env.box().index(env.box().origin()), 1e-12);
  double tv = 0, det_mass = 0;
  for (std::int64_t i = 0; i < env.site_count(); ++i) {
    tv += std::abs(emp.prob[static_cast<std::size_t>(i)] - det[i]);
    det_mass += det[i];
  }
  tv += std::abs(emp.killed_fraction - (1.0 - det_mass));
  CHECK(tv / 2.0 <= 0.01);
}

TEST_CASE("empirical kernel is reflection symmetric up to noise") {
  Environment env = Environment::constant_nn(2, Boundary::torus, 16);
  EmpiricalKernel emp = empirical_kernel(env, 1.5, 300000, 23);
  const Box& bx = env.box();
  double tv = 0;
  for (std::int64_t i = 0; i < bx.site_count(); ++i) {
    Coord c = bx.coord(i);
    Coord m = c;
    for (int k = 0; k < bx.dim(); ++k) m[k] = -c[k];
    m = bx.wrap(m);
    tv += std::abs(emp.prob[static_cast<std::size_t>(i)] -
                   emp.prob[static_cast<std::size_t>(bx.index(m))]);
  }
  CHECK(tv / 2.0 <= 0.015);
}

TEST_CASE("scaled endpoints: n=1 is raw, covariance matches M t") {
  Environment env = Environment::constant_nn(2, Boundary::torus, 128);
  ScaledEndpoints raw = scaled_endpoint_samples(env, 1, 1.0, 500, 31);
  REQUIRE(raw.points.size() == 500);
  for (const auto& p : raw.points) {
    REQUIRE(p[0] == std::floor(p[0]));  // integer endpoints at n = 1
    REQUIRE(p[1] == std::floor(p[1]));
  }

  const int n = 8;
  const double t = 1.0;
  ScaledEndpoints pts = scaled_endpoint_samples(env, n, t, 100000, 37);
  REQUIRE(pts.killed == 0);
  REQUIRE(pts.warning.empty());
  double m1 = 0, m2 = 0, c11 = 0, c22 = 0, c12 = 0;
  const auto N = static_cast<double>(pts.points.size());
  std::vector<double> v11, v22;
  v11.reserve(pts.points.size());
  for (const auto& p : pts.points) {
    m1 += p[0];
    m2 += p[1];
    c11 += p[0] * p[0];
    c22 += p[1] * p[1];
    c12 += p[0] * p[1];
    v11.push_back(p[0] * p[0]);
  }
  m1 /= N;
  m2 /= N;
  c11 = c11 / N - m1 * m1;
  c22 = c22 / N - m2 * m2;
  c12 = c12 / N - m1 * m2;
  auto sd11 = oracle::mean_std(v11).sd;
  // covariance = M t = 2 t per coordinate, zero off-diagonal
  CHECK(std::abs(c11 - 2.0 * t) <= 3.0 * sd11 / std::sqrt(N));
  CHECK(std::abs(c22 - 2.0 * t) <= 3.0 * sd11 / std::sqrt(N));
  CHECK(std::abs(c12) <= 3.0 * 2.0 * t / std::sqrt(N));
  // mean is 0 by symmetry; per-coordinate sigma ~ sqrt(2t/N)
  CHECK(std::abs(m1) <= 3.0 * std::sqrt(2.0 * t / N));
  CHECK(std::abs(m2) <= 3.0 * std::sqrt(2.0 * t / N));
}

TEST_CASE("box walks report the killed fraction") {
  Environment env = Environment::constant_nn(2, Boundary::box, 5);
  EmpiricalKernel k = empirical_kernel(env, 10.0, 20000, 41);
  CHECK(k.killed_fraction > 0.5);  // long horizon on a tiny box
  double mass = k.killed_fraction;
  for (double v : k.prob) mass += v;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

  ScaledEndpoints pts = scaled_endpoint_samples(env, 2, 4.0, 2000, 43);
  CHECK(pts.killed > 0);
  CHECK(!pts.warning.empty());
}

TEST_CASE("walk input validation") {
  Environment env = Environment::constant_nn(2, Boundary::torus, 4);
  CHECK_THROWS_AS(sample_path(env, 0, -1.0, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(empirical_kernel(env, 1.0, 0, 1), std::invalid_argument);
  // isolated site: pi = 0
  std::vector<EdgeRecord> edges{{make_coord({0, 0}), make_coord({1, 0}), 1.0}};
  Environment dumbbell = Environment::from_edges(Box::box_of_halfwidth(2, 2),
                                                 std::move(edges), EnvMeta{}, 1.0);
  CHECK_THROWS_AS(
      sample_path(dumbbell, dumbbell.box().index(make_coord({2, 2})), 1.0, 1, 0),
      std::invalid_argument);
}

}  // TEST_SUITE
