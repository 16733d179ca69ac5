#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rcm/environment.hpp"
#include "rcm/smallmat.hpp"

namespace rcm {

// Gaussian kernel data with covariance(t) = M t:
// k_M(t,x) = (2 pi t)^{-d/2} det(M)^{-1/2} exp(-<x, M^{-1} x>/(2t)).
struct GaussianKernelParams {
  SmallMat M;
  SmallMat chol;  // lower Cholesky factor of M
  double det = 0;

  // rejects matrices that are not strictly positive definite
  static GaussianKernelParams from_matrix(const SmallMat& m);
};

double gaussian_kernel(const GaussianKernelParams& params, double t,
                       std::span<const double> x);

// [nx] componentwise floor (not truncation: n=4, x=-0.3 -> -2)
Coord floor_map(std::span<const double> x, int n, int d);

struct LltOptions {
  double R = 1;
  double T1 = 1;
  double T2 = 2;
  double t_step = 0.5;
  double escape_threshold = 1e-3;
  double evolve_tol = 1e-10;
};

struct LltPointRecord {
  int n;
  double t;
  std::array<double, kMaxDim> x;
  double rescaled_p;
  double gaussian;
  double abs_err;
};

struct LltErrorResult {
  int n = 0;
  double sup_error = 0;
  double escape_estimate = 0;  // killed mass (box) or wrap-bias proxy (torus)
};

/// sup over the sampled grid of |n^d p(n^2 t, 0, [nx]) - k_M(t,x)|; the x-grid
/// is the lattice points y/n with |y| <= nR, the t-grid is uniform with step
/// t_step. Throws when the escape estimate exceeds the declared threshold.
LltErrorResult llt_error(const Environment& env, const GaussianKernelParams& params,
                         int n, const LltOptions& opts,
                         std::vector<LltPointRecord>* long_records = nullptr);

struct LltErrorCurve {
  std::vector<int> n_list;
  std::vector<double> errors;
  std::vector<double> escape_estimates;
  std::string verdict;  // "decreasing" | "not-decreasing" | "undefined"
  LltOptions opts;
};

LltErrorCurve convergence_study(const Environment& env,
                                const GaussianKernelParams& params,
                                const std::vector<int>& n_list, const LltOptions& opts,
                                std::vector<LltPointRecord>* long_records = nullptr);

}  // namespace rcm
