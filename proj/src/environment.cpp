#include "rcm/environment.hpp"

#include "rcm/hash.hpp"
#include "rcm/walk_tables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rcm {

namespace {

constexpr double kDropThreshold = 1e-14;

std::uint64_t coord_u64(int v) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(v)); }

std::uint64_t edge_key(std::uint64_t seed, const Coord& a, const Coord& b) {
  std::uint64_t h = rng::derive_key(seed, {rng::tag::kEdge});
  h = rng::fold(h, static_cast<std::uint64_t>(a.d));
  for (int i = 0; i < a.d; ++i) h = rng::fold(h, coord_u64(a[i]));
  for (int i = 0; i < b.d; ++i) h = rng::fold(h, coord_u64(b[i]));
  return h;
}

bool lex_less(const EdgeRecord& e, const EdgeRecord& f) {
  if (!(e.x == f.x)) return e.x < f.x;
  return e.y < f.y;
}

}  // namespace

// ---------------------------------------------------------------- XiSpec

XiSpec XiSpec::parse(const std::string& s) {
  XiSpec spec;
  auto colon = s.find(':');
  std::string name = s.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : s.substr(colon + 1);
  double a = 1, b = 0;
  if (!args.empty()) {
    std::replace(args.begin(), args.end(), ',', ' ');
    std::istringstream is(args);
    is >> a;
    if (!(is >> b)) b = 0;
  }
  if (name == "const" || name == "constant") {
    spec = {Kind::constant, a, 0};
  } else if (name == "uniform") {
    spec = {Kind::uniform, a, b};
  } else if (name == "exp" || name == "exponential") {
    spec = {Kind::exponential, a, 0};
  } else if (name == "bernoulli") {
    spec = {Kind::bernoulli, a, 0};
  } else {
    throw std::invalid_argument("XiSpec: unknown distribution '" + name + "'");
  }
  spec.validate();
  return spec;
}

std::string XiSpec::to_string() const {
  char buf[64];
  switch (kind) {
    case Kind::constant: std::snprintf(buf, sizeof buf, "const:%.17g", a); break;
    case Kind::uniform: std::snprintf(buf, sizeof buf, "uniform:%.17g,%.17g", a, b); break;
    case Kind::exponential: std::snprintf(buf, sizeof buf, "exp:%.17g", a); break;
    case Kind::bernoulli: std::snprintf(buf, sizeof buf, "bernoulli:%.17g", a); break;
  }
  return buf;
}

void XiSpec::validate() const {
  switch (kind) {
    case Kind::constant:
      if (a < 0) throw std::invalid_argument("XiSpec: negative constant");
      break;
    case Kind::uniform:
      if (a < 0 || b < a) throw std::invalid_argument("XiSpec: uniform needs 0 <= a <= b");
      break;
    case Kind::exponential:
      if (a <= 0) throw std::invalid_argument("XiSpec: exponential needs mean > 0");
      break;
    case Kind::bernoulli:
      if (a < 0 || a > 1) throw std::invalid_argument("XiSpec: bernoulli needs p in [0,1]");
      break;
  }
}

double XiSpec::sample(rng::Stream& st) const {
  switch (kind) {
    case Kind::constant: return a;
    case Kind::uniform: return st.next_uniform(a, b);
    case Kind::exponential: return -a * std::log(st.next_unit_pos());
    case Kind::bernoulli: return st.next_unit() < a ? 1.0 : 0.0;
  }
  return 0;
}

double XiSpec::mean() const {
  switch (kind) {
    case Kind::constant: return a;
    case Kind::uniform: return 0.5 * (a + b);
    case Kind::exponential: return a;
    case Kind::bernoulli: return a;
  }
  return 0;
}

// ----------------------------------------------------------- Environment

Environment::~Environment() = default;

Environment::Environment(Environment&& o) noexcept
    : box_(o.box_), meta_(std::move(o.meta_)), lmax_(o.lmax_),
      edges_(std::move(o.edges_)), exit_edges_(std::move(o.exit_edges_)),
      row_(std::move(o.row_)), adj_(std::move(o.adj_)),
      exit_rate_(std::move(o.exit_rate_)), pi_(std::move(o.pi_)),
      max_rate_(o.max_rate_) {}

Environment& Environment::operator=(Environment&& o) noexcept {
  box_ = o.box_;
  meta_ = std::move(o.meta_);
  lmax_ = o.lmax_;
  edges_ = std::move(o.edges_);
  exit_edges_ = std::move(o.exit_edges_);
  row_ = std::move(o.row_);
  adj_ = std::move(o.adj_);
  exit_rate_ = std::move(o.exit_rate_);
  pi_ = std::move(o.pi_);
  max_rate_ = o.max_rate_;
  walk_tables_.reset();
  return *this;
}

Environment::Environment(const Environment& o)
    : box_(o.box_), meta_(o.meta_), lmax_(o.lmax_), edges_(o.edges_),
      exit_edges_(o.exit_edges_), row_(o.row_), adj_(o.adj_),
      exit_rate_(o.exit_rate_), pi_(o.pi_), max_rate_(o.max_rate_) {}

Environment& Environment::operator=(const Environment& o) {
  if (this == &o) return *this;
  Environment tmp(o);
  *this = std::move(tmp);
  return *this;
}

void Environment::finalize() {
  const std::int64_t n = box_.site_count();

  std::sort(edges_.begin(), edges_.end(), lex_less);
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].x == edges_[i - 1].x && edges_[i].y == edges_[i - 1].y)
      throw std::logic_error("Environment: duplicate edge record");
  }
  std::sort(exit_edges_.begin(), exit_edges_.end(), lex_less);

  row_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : edges_) {
    ++row_[static_cast<std::size_t>(box_.index(e.x)) + 1];
    ++row_[static_cast<std::size_t>(box_.index(e.y)) + 1];
  }
  for (std::size_t i = 1; i < row_.size(); ++i) row_[i] += row_[i - 1];
  adj_.resize(static_cast<std::size_t>(row_.back()));
  std::vector<std::int64_t> fill(row_.begin(), row_.end() - 1);
  for (const auto& e : edges_) {
    const std::int64_t a = box_.index(e.x), b = box_.index(e.y);
    adj_[static_cast<std::size_t>(fill[static_cast<std::size_t>(a)]++)] = {b, e.c};
    adj_[static_cast<std::size_t>(fill[static_cast<std::size_t>(b)]++)] = {a, e.c};
  }
  for (std::int64_t i = 0; i < n; ++i) {
    std::sort(adj_.begin() + row_[static_cast<std::size_t>(i)],
              adj_.begin() + row_[static_cast<std::size_t>(i) + 1],
              [](const Neighbor& u, const Neighbor& v) { return u.site < v.site; });
  }

  exit_rate_.assign(static_cast<std::size_t>(n), 0.0);
  for (const auto& e : exit_edges_) {
    const Coord& inside = box_.contains(e.x) ? e.x : e.y;
    if (!box_.contains(inside))
      throw std::logic_error("Environment: exit edge with no in-box endpoint");
    exit_rate_[static_cast<std::size_t>(box_.index(inside))] += e.c;
  }

  pi_.assign(static_cast<std::size_t>(n), 0.0);
  max_rate_ = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    double s = exit_rate_[static_cast<std::size_t>(i)];
    for (const auto& nb : neighbors(i)) s += nb.c;
    pi_[static_cast<std::size_t>(i)] = s;
    max_rate_ = std::max(max_rate_, s);
  }
}

Environment Environment::from_edges(const Box& box, std::vector<EdgeRecord> edges,
                                    EnvMeta meta, double lmax) {
  Environment env;
  env.box_ = box;
  env.meta_ = std::move(meta);
  env.lmax_ = lmax;
  for (auto& e : edges) {
    if (e.c < 0) throw std::invalid_argument("Environment: negative conductance");
    if (e.c == 0) continue;
    if (e.y < e.x) std::swap(e.x, e.y);
    if (e.x == e.y) throw std::invalid_argument("Environment: self-loop");
    const bool xin = box.contains(e.x), yin = box.contains(e.y);
    if (xin && yin)
      env.edges_.push_back(e);
    else if (xin || yin)
      env.exit_edges_.push_back(e);
    else
      throw std::invalid_argument("Environment: edge with both endpoints outside");
  }
  env.finalize();
  return env;
}

Environment Environment::constant_nn(int d, Boundary boundary, int side, double c) {
  if (boundary == Boundary::torus && side < 3)
    throw std::invalid_argument("constant_nn: torus side must be >= 3");
  Box bx(d, boundary, side);
  std::vector<EdgeRecord> edges;
  for (std::int64_t i = 0; i < bx.site_count(); ++i) {
    Coord x = bx.coord(i);
    for (int k = 0; k < d; ++k) {
      for (int sgn : {-1, 1}) {
        Coord y = x;
        y[k] += sgn;
        if (boundary == Boundary::torus) y = bx.wrap(y);
        EdgeRecord e{x, y, c};
        if (e.y < e.x) std::swap(e.x, e.y);
        if (bx.contains(y)) {
          if (x < y) edges.push_back({x, y, c});
        } else {
          edges.push_back(e);  // box boundary bond, walk exits here
        }
      }
    }
  }
  EnvMeta meta;
  meta.model = "constant_nn";
  meta.non_paper = d < 2;
  Environment env = from_edges(bx, std::move(edges), meta, 1.0);
  return env;
}

double Environment::conductance(std::int64_t a, std::int64_t b) const {
  auto nbrs = neighbors(a);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b,
                             [](const Neighbor& n, std::int64_t s) { return n.site < s; });
  if (it != nbrs.end() && it->site == b) return it->c;
  return 0.0;
}

// ------------------------------------------------------------ generation

namespace {

struct GenParams {
  int d;
  double s;
  int L;
  Boundary boundary;
  double lmax;
  std::uint64_t seed;
};

Box generation_box(const GenParams& g) {
  if (g.d < 1 || g.d > kMaxDim) throw std::invalid_argument("gen: d out of range");
  if (g.L < 2) throw std::invalid_argument("gen: L must be >= 2");
  if (g.lmax < 1) throw std::invalid_argument("gen: lmax must be >= 1");
  if (g.boundary == Boundary::box) {
    if (g.lmax > 2.0 * g.L) throw std::invalid_argument("gen: lmax exceeds box diameter");
    return Box::box_of_halfwidth(g.d, g.L);
  }
  const int side = 2 * g.L;
  if (g.lmax > (side - 1) / 2)
    throw std::invalid_argument(
        "gen: torus mode requires lmax <= (side-1)/2, longer edges would wrap "
        "onto ambiguous minimal images");
  return Box::torus_of_side(g.d, side);
}

template <typename DrawFn>
Environment generate(const GenParams& g, EnvMeta meta, DrawFn&& draw) {
  Box bx = generation_box(g);
  const auto offsets = offsets_in_ball(g.d, g.lmax);
  std::vector<EdgeRecord> edges;
  for (std::int64_t i = 0; i < bx.site_count(); ++i) {
    const Coord x = bx.coord(i);
    for (const Coord& z : offsets) {
      Coord y = x;
      for (int k = 0; k < g.d; ++k) y[k] += z[k];
      const double dist = z.norm();
      const bool exits_box = bx.boundary() == Boundary::box && !bx.contains(y);
      if (!exits_box) {
        y = bx.wrap(y);
        if (y < x) continue;  // each in-box pair handled from its lex-smaller end
      }
      Coord a = x, b = y;
      if (b < a) std::swap(a, b);
      rng::Stream st(edge_key(g.seed, a, b));
      const double c = draw(dist, st);
      if (c > kDropThreshold) edges.push_back({a, b, c});
    }
  }
  meta.seed = g.seed;
  meta.s = g.s;
  meta.non_paper = g.d < 2;
  {
    std::ostringstream os;
    os << meta.model << "|d=" << g.d << "|s=" << g.s << "|L=" << g.L
       << "|boundary=" << to_string(g.boundary) << "|lmax=" << g.lmax
       << "|xi=" << meta.xi_spec << "|seed=" << g.seed;
    meta.id = fnv1a_hex(os.str());
  }
  Environment env = Environment::from_edges(bx, std::move(edges), meta, g.lmax);
  for (std::int64_t i = 0; i < env.site_count(); ++i) {
    if (!(env.pi(i) > 0)) throw std::logic_error("gen: isolated site, pi == 0");
  }
  return env;
}

}  // namespace

Environment gen_long_range_percolation(int d, double s, int L, Boundary boundary,
                                       double lmax, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("gen_long_range_percolation: d >= 2 required");
  if (s <= 0) throw std::invalid_argument("gen_long_range_percolation: s > 0 required");
  GenParams g{d, s, L, boundary, lmax, seed};
  EnvMeta meta;
  meta.model = "lrp";
  const double exponent = d + s;
  return generate(g, meta, [exponent](double dist, rng::Stream& st) {
    const double p = std::min(1.0, std::pow(dist, -exponent));
    return st.next_unit() < p ? 1.0 : 0.0;
  });
}

Environment gen_polynomial_conductance(int d, double s, const XiSpec& xi, int L,
                                       Boundary boundary, double lmax,
                                       std::uint64_t seed) {
  if (s <= 2) throw std::invalid_argument("gen_polynomial_conductance: s > 2 required");
  xi.validate();
  GenParams g{d, s, L, boundary, lmax, seed};
  EnvMeta meta;
  meta.model = "poly";
  meta.xi_spec = xi.to_string();
  const double exponent = d + s;
  return generate(g, meta, [exponent, &xi](double dist, rng::Stream& st) {
    if (dist <= 1.0) return 1.0;  // xi == 1 on nearest-neighbor bonds
    return xi.sample(st) * std::pow(dist, -exponent);
  });
}

double dropped_mass_estimate(int d, double s, double xi_mean, double lmax,
                             const std::string& model) {
  // sum_{|z| > lmax} E[C] |z|^2 with E[C] = prefactor * |z|^{-(d+s)},
  // continuum shell approximation S_d * prefactor * R^{2-s} / (s-2)
  if (s <= 2) return std::numeric_limits<double>::infinity();
  const double prefactor = model == "poly" ? xi_mean : 1.0;
  const double surface = 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
  return surface * prefactor * std::pow(lmax, 2.0 - s) / (s - 2.0);
}

// --------------------------------------------------------------- moments

double ball_norm(std::span<const double> values,
                 const std::vector<std::int64_t>& sites, double p) {
  if (sites.empty()) throw std::invalid_argument("ball_norm: empty region");
  if (std::isinf(p)) {
    double m = 0;
    for (auto i : sites) m = std::max(m, std::abs(values[static_cast<std::size_t>(i)]));
    return m;
  }
  if (p < 1) throw std::invalid_argument("ball_norm: p must be >= 1");
  double acc = 0;
  for (auto i : sites) acc += std::pow(std::abs(values[static_cast<std::size_t>(i)]), p);
  return std::pow(acc / static_cast<double>(sites.size()), 1.0 / p);
}

MomentProfile moments(const Environment& env, const std::vector<double>& m_list,
                      double p, double q) {
  if (p <= 1 && !std::isinf(p))
    throw std::invalid_argument("moments: p > 1 required for mu_star");
  const Box& bx = env.box();
  const std::int64_t n = bx.site_count();
  MomentProfile mp;
  mp.p = p;
  mp.q = q;
  // gamma = (d(p-1)+4p)/(1+p) and the conductance power 2p/(p+1)
  const double d = bx.dim();
  if (std::isinf(p)) {
    mp.mu_star_exponent = d + 4.0;
    mp.mu_star_cpower = 2.0;
  } else {
    mp.mu_star_exponent = (d * (p - 1.0) + 4.0 * p) / (1.0 + p);
    mp.mu_star_cpower = 2.0 * p / (p + 1.0);
  }

  mp.mu.assign(static_cast<std::size_t>(n), 0.0);
  mp.mu_star.assign(static_cast<std::size_t>(n), 0.0);
  for (double m : m_list) mp.mu_m[m].assign(static_cast<std::size_t>(n), 0.0);
  mp.nu.assign(static_cast<std::size_t>(n), 0.0);

  std::vector<int> nn_found(static_cast<std::size_t>(n), 0);
  auto accumulate = [&](std::int64_t site, double dist2, double c) {
    const auto s = static_cast<std::size_t>(site);
    mp.mu[s] += dist2 * c;
    for (auto& [m, vec] : mp.mu_m)
      vec[s] += std::pow(dist2, m / 2.0) * c;
    mp.mu_star[s] += std::pow(dist2, mp.mu_star_exponent / 2.0) *
                     std::pow(c, mp.mu_star_cpower);
    if (dist2 == 1.0) {
      ++nn_found[s];
      mp.nu[s] += 1.0 / c;
    }
  };

  for (std::int64_t i = 0; i < n; ++i) {
    const Coord x = bx.coord(i);
    for (const auto& nb : env.neighbors(i)) {
      accumulate(i, bx.distance2(x, bx.coord(nb.site)), nb.c);
    }
  }
  for (const auto& e : env.exit_edges()) {
    const bool xin = bx.contains(e.x);
    const Coord& inside = xin ? e.x : e.y;
    const Coord& outside = xin ? e.y : e.x;
    Coord z;
    z.d = bx.dim();
    for (int k = 0; k < bx.dim(); ++k) z[k] = outside[k] - inside[k];
    accumulate(bx.index(inside), z.norm2(), e.c);
  }

  for (std::int64_t i = 0; i < n; ++i) {
    if (nn_found[static_cast<std::size_t>(i)] < 2 * bx.dim()) {
      mp.nu[static_cast<std::size_t>(i)] = std::numeric_limits<double>::infinity();
      mp.nu_infinite_sites.push_back(i);
    }
  }

  // box-scale aggregates over B_halfwidth(0)
  auto big_ball = bx.ball(bx.origin(), bx.half_width());
  mp.mu_norm_p = ball_norm(mp.mu, big_ball, p);
  mp.nu_norm_q = ball_norm(mp.nu, big_ball, q);
  std::vector<double> mu1(mp.mu.size()), nu1(mp.nu.size());
  for (std::size_t i = 0; i < mp.mu.size(); ++i) {
    mu1[i] = std::max(mp.mu[i], 1.0);
    nu1[i] = std::max(mp.nu[i], 1.0);
  }
  mp.m0 = ball_norm(mu1, big_ball, p) * ball_norm(nu1, big_ball, q);
  return mp;
}

double tail(const Environment& env, std::span<const double> u, double R,
            std::int64_t x) {
  if (R < 1) throw std::invalid_argument("tail: R >= 1 required");
  const Box& bx = env.box();
  const Coord xc = bx.coord(x);
  const double r2 = R * R;
  double acc = 0;
  for (const auto& nb : env.neighbors(x)) {
    if (bx.distance2(xc, bx.coord(nb.site)) > r2)
      acc += u[static_cast<std::size_t>(nb.site)] * nb.c;
  }
  return R * R * acc;
}

double maximal_m_factor(const Environment& env, const std::vector<std::int64_t>& ball,
                        double p, double q, double m) {
  MomentProfile mp = moments(env, {m}, p, q);
  std::vector<double> mu1(mp.mu.size()), nu1(mp.nu.size()), mum1(mp.mu.size());
  const auto& mum = mp.mu_m.at(m);
  for (std::size_t i = 0; i < mp.mu.size(); ++i) {
    mu1[i] = std::max(mp.mu[i], 1.0);
    nu1[i] = std::max(mp.nu[i], 1.0);
    mum1[i] = std::max(mum[i], 1.0);
  }
  return ball_norm(mu1, ball, p) * ball_norm(mum1, ball, p) * ball_norm(nu1, ball, q);
}

}  // namespace rcm
