#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rcm/environment.hpp"

namespace rcm {

struct Trajectory {
  std::int64_t start = 0;
  std::vector<std::pair<double, std::int64_t>> events;  // (jump time, target site)
  double horizon = 0;
  bool killed = false;      // attempted to leave the box
  double kill_time = 0;
  std::int64_t end_site = 0;  // position at the horizon (or at the kill)
};

/// VSRW path: holding time Exp(pi_x), jump to y with probability C_{x,y}/pi_x.
/// The path is a function of (seed, stream_id) only.
Trajectory sample_path(const Environment& env, std::int64_t x0, double T,
                       std::uint64_t seed, std::uint64_t stream_id);

struct EmpiricalKernel {
  double t = 0;
  std::int64_t samples = 0;
  std::vector<double> prob;       // per site, counts/N
  double killed_fraction = 0;     // box-mode mass lost before t
};

/// Endpoint histogram of N independent paths started at the origin.
EmpiricalKernel empirical_kernel(const Environment& env, double t, std::int64_t N,
                                 std::uint64_t seed, std::uint64_t base_stream = 0);

struct ScaledEndpoints {
  int n = 1;
  double t = 0;
  std::vector<std::array<double, kMaxDim>> points;  // n^{-1} X_{n^2 t}, survivors
  std::int64_t killed = 0;
  std::string warning;  // set when the diffusive range strains the box
};

ScaledEndpoints scaled_endpoint_samples(const Environment& env, int n, double t,
                                        std::int64_t N, std::uint64_t seed,
                                        std::uint64_t base_stream = 0);

}  // namespace rcm
