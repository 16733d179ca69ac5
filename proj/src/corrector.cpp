#include "rcm/corrector.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rcm/parallel.hpp"

namespace rcm {

namespace {

// (A v)(x) = sum_y (v(x) - v(y)) C_{x,y}, the negative generator
void laplacian(const Environment& env, const std::vector<double>& v,
               std::vector<double>& out) {
  par::parallel_for(env.site_count(), [&](std::int64_t x) {
    double s = 0;
    const double vx = v[static_cast<std::size_t>(x)];
    for (const auto& nb : env.neighbors(x))
      s += (vx - v[static_cast<std::size_t>(nb.site)]) * nb.c;
    out[static_cast<std::size_t>(x)] = s;
  });
}

double pi_norm(const Environment& env, const std::vector<double>& v) {
  double s = 0;
  for (std::int64_t i = 0; i < env.site_count(); ++i)
    s += env.pi(i) * v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
  return std::sqrt(s);
}

void deflate_mean(std::vector<double>& v) {
  double m = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
  for (auto& x : v) x -= m;
}

}  // namespace

std::vector<std::vector<double>> corrector_rhs(const Environment& env) {
  const Box& bx = env.box();
  const int d = bx.dim();
  std::vector<std::vector<double>> g(static_cast<std::size_t>(d));
  for (auto& gi : g) gi.assign(static_cast<std::size_t>(bx.site_count()), 0.0);
  for (std::int64_t x = 0; x < bx.site_count(); ++x) {
    const Coord xc = bx.coord(x);
    for (const auto& nb : env.neighbors(x)) {
      const Coord z = bx.displacement(xc, bx.coord(nb.site));
      for (int i = 0; i < d; ++i)
        g[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)] += z[i] * nb.c;
    }
  }
  return g;
}

CorrectorField solve_corrector(const Environment& env, double tol,
                               std::int64_t max_iter) {
  if (env.boundary() != Boundary::torus)
    throw std::invalid_argument("solve_corrector: torus environment required");
  const std::int64_t n = env.site_count();
  const int d = env.dim();
  auto g = corrector_rhs(env);

  CorrectorField cf;
  cf.tol = tol;
  cf.env_id = env.meta().id;
  cf.chi.resize(static_cast<std::size_t>(d));
  cf.residual.resize(static_cast<std::size_t>(d));
  cf.iterations.resize(static_cast<std::size_t>(d));

  const std::int64_t origin = env.box().index(env.box().origin());

  for (int i = 0; i < d; ++i) {
    // solve A chi = g_i, A the graph Laplacian; kernel = constants, RHS sums
    // to zero by edge symmetry
    std::vector<double>& b = g[static_cast<std::size_t>(i)];
    deflate_mean(b);
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    std::vector<double> r = b;
    std::vector<double> z(static_cast<std::size_t>(n)), p(static_cast<std::size_t>(n)),
        ap(static_cast<std::size_t>(n));
    const double bnorm = pi_norm(env, b);
    std::vector<double> history;
    double rel = bnorm == 0 ? 0.0 : 1.0;
    std::int64_t it = 0;
    if (bnorm > 0) {
      for (std::int64_t k = 0; k < n; ++k)
        z[static_cast<std::size_t>(k)] = r[static_cast<std::size_t>(k)] / env.pi(k);
      p = z;
      double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
      for (it = 1; it <= max_iter; ++it) {
        laplacian(env, p, ap);
        const double pap = std::inner_product(p.begin(), p.end(), ap.begin(), 0.0);
        if (pap <= 0) break;  // numerically in the kernel
        const double alpha = rz / pap;
        for (std::size_t k = 0; k < x.size(); ++k) {
          x[k] += alpha * p[k];
          r[k] -= alpha * ap[k];
        }
        rel = pi_norm(env, r) / bnorm;
        history.push_back(rel);
        if (rel <= tol) break;
        for (std::int64_t k = 0; k < n; ++k)
          z[static_cast<std::size_t>(k)] = r[static_cast<std::size_t>(k)] / env.pi(k);
        const double rz_new = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = z[k] + beta * p[k];
      }
      if (rel > tol) {
        std::ostringstream os;
        os << "solve_corrector: CG stagnated, coordinate " << i
           << ", relative residual " << rel << " after " << it
           << " iterations; history tail:";
        for (std::size_t h = history.size() > 8 ? history.size() - 8 : 0;
             h < history.size(); ++h)
          os << " " << history[h];
        throw std::runtime_error(os.str());
      }
    }
    // gauge chi(0) = 0, exact
    const double x0 = x[static_cast<std::size_t>(origin)];
    for (auto& v : x) v -= x0;
    x[static_cast<std::size_t>(origin)] = 0.0;
    // certificate recomputed from scratch
    laplacian(env, x, ap);
    for (std::size_t k = 0; k < ap.size(); ++k) ap[k] -= b[k];
    cf.residual[static_cast<std::size_t>(i)] =
        bnorm == 0 ? pi_norm(env, ap) : pi_norm(env, ap) / bnorm;
    cf.iterations[static_cast<std::size_t>(i)] = it;
    cf.chi[static_cast<std::size_t>(i)] = std::move(x);
  }
  return cf;
}

DiffusionMatrix diffusion_matrix(const Environment& env, const CorrectorField& chi) {
  const Box& bx = env.box();
  const int d = bx.dim();
  if (static_cast<int>(chi.chi.size()) != d ||
      (d > 0 && chi.chi[0].size() != static_cast<std::size_t>(bx.site_count())))
    throw std::invalid_argument("diffusion_matrix: corrector/environment mismatch");
  SmallMat m = SmallMat::zero(d);
  for (std::int64_t x = 0; x < bx.site_count(); ++x) {
    const Coord xc = bx.coord(x);
    for (const auto& nb : env.neighbors(x)) {
      const Coord z = bx.displacement(xc, bx.coord(nb.site));
      std::array<double, kMaxDim> w{};
      for (int i = 0; i < d; ++i) {
        w[static_cast<std::size_t>(i)] =
            z[i] + chi.chi[static_cast<std::size_t>(i)][static_cast<std::size_t>(nb.site)] -
            chi.chi[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
      }
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          m(i, j) += nb.c * w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)];
    }
  }
  const double inv_n = 1.0 / double(bx.site_count());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) *= inv_n;
  DiffusionMatrix out;
  out.m = m;
  out.max_asymmetry = m.max_asymmetry();
  auto ev = sym_eigenvalues(m);
  out.min_eigenvalue = ev.empty() ? 0 : *std::min_element(ev.begin(), ev.end());
  return out;
}

double corrected_energy(const Environment& env,
                        const std::vector<std::vector<double>>& psi, int coord) {
  const Box& bx = env.box();
  double e = 0;
  const auto& f = psi[static_cast<std::size_t>(coord)];
  for (std::int64_t x = 0; x < bx.site_count(); ++x) {
    const Coord xc = bx.coord(x);
    for (const auto& nb : env.neighbors(x)) {
      const Coord z = bx.displacement(xc, bx.coord(nb.site));
      const double w = z[coord] + f[static_cast<std::size_t>(nb.site)] -
                       f[static_cast<std::size_t>(x)];
      e += nb.c * w * w;
    }
  }
  return e;
}

SublinearityReport sublinearity_report(const Environment& env,
                                       const CorrectorField& chi,
                                       const std::vector<double>& radii, double p) {
  if (p <= 1) throw std::invalid_argument("sublinearity_report: p > 1 required");
  const Box& bx = env.box();
  const int d = bx.dim();
  SublinearityReport rep;
  rep.norm_exponent = 2.0 * p / (p - 1.0);
  for (double n : radii) {
    if (n > bx.half_width()) {
      rep.excluded_radii.push_back(n);
      continue;
    }
    auto ball = bx.ball(bx.origin(), n);
    double amax = 0;
    std::vector<double> mag(ball.size());
    for (std::size_t k = 0; k < ball.size(); ++k) {
      double minf = 0, m2 = 0;
      for (int i = 0; i < d; ++i) {
        const double v =
            chi.chi[static_cast<std::size_t>(i)][static_cast<std::size_t>(ball[k])];
        minf = std::max(minf, std::abs(v));
        m2 += v * v;
      }
      amax = std::max(amax, minf);
      mag[k] = std::sqrt(m2);
    }
    double bacc = 0;
    for (double v : mag) bacc += std::pow(v, rep.norm_exponent);
    const double bnorm = std::pow(bacc / double(mag.size()), 1.0 / rep.norm_exponent);
    rep.entries.push_back({n, amax / n, bnorm / n});
  }
  if (rep.entries.size() >= 2) {
    rep.a_decreasing = rep.entries.back().a < rep.entries.front().a;
    rep.b_decreasing = rep.entries.back().b < rep.entries.front().b;
  }
  return rep;
}

}  // namespace rcm
