#include "rcm/llt.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rcm/exponents.hpp"
#include "rcm/kernel.hpp"

namespace rcm {

GaussianKernelParams GaussianKernelParams::from_matrix(const SmallMat& m) {
  GaussianKernelParams p;
  p.M = m;
  if (m.max_asymmetry() > 1e-12 * std::max(1.0, m.max_abs()))
    throw std::invalid_argument("GaussianKernelParams: matrix not symmetric");
  if (!cholesky(m, p.chol))
    throw std::invalid_argument(
        "GaussianKernelParams: matrix not positive definite (PSD with a zero "
        "eigenvalue is rejected)");
  p.det = det_from_cholesky(p.chol);
  return p;
}

double gaussian_kernel(const GaussianKernelParams& params, double t,
                       std::span<const double> x) {
  if (t <= 0) throw std::invalid_argument("gaussian_kernel: t > 0 required");
  const int d = params.M.d;
  std::array<double, kMaxDim> b{};
  for (int i = 0; i < d; ++i) b[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
  const auto minv_x = cholesky_solve(params.chol, b);
  double quad = 0;
  for (int i = 0; i < d; ++i)
    quad += x[static_cast<std::size_t>(i)] * minv_x[static_cast<std::size_t>(i)];
  return std::pow(2.0 * std::numbers::pi * t, -d / 2.0) / std::sqrt(params.det) *
         std::exp(-quad / (2.0 * t));
}

Coord floor_map(std::span<const double> x, int n, int d) {
  Coord y;
  y.d = d;
  for (int i = 0; i < d; ++i)
    y[i] = static_cast<int>(std::floor(static_cast<double>(n) * x[static_cast<std::size_t>(i)]));
  return y;
}

namespace {

// wrap-bias proxy on the torus: nearest periodic image of the evaluation
// region sits at lattice distance 2H - nR; 2d images at Gaussian density
double wrap_bias_estimate(const GaussianKernelParams& params, int d, double t,
                          double image_dist_rescaled) {
  std::array<double, kMaxDim> x{};
  x[0] = image_dist_rescaled;
  return 2.0 * d * gaussian_kernel(params, t, std::span<const double>(x.data(), static_cast<std::size_t>(d)));
}

}  // namespace

LltErrorResult llt_error(const Environment& env, const GaussianKernelParams& params,
                         int n, const LltOptions& opts,
                         std::vector<LltPointRecord>* long_records) {
  const Box& bx = env.box();
  const int d = bx.dim();
  if (n < 1) throw std::invalid_argument("llt_error: n >= 1 required");
  if (params.M.d != d) throw std::invalid_argument("llt_error: dimension mismatch");
  if (!(opts.T2 > opts.T1) || opts.T1 <= 0 || opts.t_step <= 0)
    throw std::invalid_argument("llt_error: need 0 < T1 < T2 and t_step > 0");
  if (double(n) * opts.R > bx.half_width())
    throw std::invalid_argument("llt_error: |x| <= R rescaled grid exceeds the box");

  std::vector<double> t_grid;
  const auto count = static_cast<std::int64_t>(std::round((opts.T2 - opts.T1) / opts.t_step));
  for (std::int64_t k = 0; k <= count; ++k)
    t_grid.push_back(opts.T1 + opts.t_step * static_cast<double>(k));
  if (t_grid.back() < opts.T2 - 1e-12) t_grid.push_back(opts.T2);

  const auto grid_sites = bx.ball(bx.origin(), double(n) * opts.R);
  const double nd = std::pow(double(n), d);

  HeatKernelSequence seq(env, bx.index(bx.origin()), opts.evolve_tol);
  LltErrorResult res;
  res.n = n;
  for (double t : t_grid) {
    const LatticeField& p = seq.advance_to(double(n) * double(n) * t);
    for (auto site : grid_sites) {
      const Coord y = bx.coord(site);
      std::array<double, kMaxDim> x{};
      for (int i = 0; i < d; ++i)
        x[static_cast<std::size_t>(i)] = double(y[i]) / double(n);
      const double g =
          gaussian_kernel(params, t, std::span<const double>(x.data(), static_cast<std::size_t>(d)));
      const double rescaled = nd * p[site];
      const double err = std::abs(rescaled - g);
      res.sup_error = std::max(res.sup_error, err);
      if (long_records)
        long_records->push_back({n, t, x, rescaled, g, err});
    }
    // escape diagnostics at this horizon
    if (env.boundary() == Boundary::box) {
      res.escape_estimate = std::max(res.escape_estimate, 1.0 - p.sum());
    } else {
      const double img = (2.0 * bx.half_width() - double(n) * opts.R) / double(n);
      res.escape_estimate =
          std::max(res.escape_estimate, wrap_bias_estimate(params, d, t, img));
    }
  }
  if (res.escape_estimate > opts.escape_threshold) {
    std::ostringstream os;
    os << "llt_error: escaped-mass estimate " << res.escape_estimate
       << " exceeds threshold " << opts.escape_threshold << " at n = " << n;
    throw std::runtime_error(os.str());
  }
  return res;
}

LltErrorCurve convergence_study(const Environment& env,
                                const GaussianKernelParams& params,
                                const std::vector<int>& n_list, const LltOptions& opts,
                                std::vector<LltPointRecord>* long_records) {
  LltErrorCurve curve;
  curve.opts = opts;
  for (int n : n_list) {
    auto res = llt_error(env, params, n, opts, long_records);
    curve.n_list.push_back(n);
    curve.errors.push_back(res.sup_error);
    curve.escape_estimates.push_back(res.escape_estimate);
  }
  if (curve.errors.size() < 2)
    curve.verdict = "undefined";
  else
    curve.verdict = curve.errors.back() < curve.errors.front() ? "decreasing"
                                                               : "not-decreasing";
  return curve;
}

}  // namespace rcm
