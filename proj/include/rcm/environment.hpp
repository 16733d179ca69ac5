#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcm/lattice.hpp"
#include "rcm/rng.hpp"

namespace rcm {

// Distribution of the i.i.d. weights xi in the polynomial family. Parsed from
// strings like "const:1", "uniform:0,2", "exp:1.5", "bernoulli:0.3".
struct XiSpec {
  enum class Kind { constant, uniform, exponential, bernoulli };
  Kind kind = Kind::constant;
  double a = 1.0;
  double b = 0.0;

  static XiSpec parse(const std::string& s);
  std::string to_string() const;
  double sample(rng::Stream& st) const;
  double mean() const;
  void validate() const;  // rejects anything with negative support
};

struct EnvMeta {
  std::string model;       // "lrp", "poly", "constant_nn", "custom"
  double s = 0.0;
  std::string xi_spec;
  std::uint64_t seed = 0;
  bool non_paper = false;  // set for d = 1 oracle environments
  std::string id;          // short hash of the generation parameters
};

struct EdgeRecord {
  Coord x, y;   // x < y lexicographically
  double c = 0;
};

// Symmetric nonnegative conductance field on a finite box or torus.
// Immutable after construction; shared freely across threads. In box mode the
// field also carries the open edges that leave the box (the walk is killed
// along them), aggregated per interior site into exit_rate.
class Environment {
 public:
  struct Neighbor {
    std::int64_t site;
    double c;
  };

  Environment() = default;

  static Environment from_edges(const Box& box, std::vector<EdgeRecord> edges,
                                EnvMeta meta, double lmax);
  static Environment constant_nn(int d, Boundary boundary, int side, double c = 1.0);

  const Box& box() const { return box_; }
  int dim() const { return box_.dim(); }
  Boundary boundary() const { return box_.boundary(); }
  std::int64_t site_count() const { return box_.site_count(); }
  const EnvMeta& meta() const { return meta_; }
  double jump_cutoff() const { return lmax_; }

  std::span<const Neighbor> neighbors(std::int64_t site) const {
    return std::span<const Neighbor>(adj_.data() + row_[static_cast<std::size_t>(site)],
                                     adj_.data() + row_[static_cast<std::size_t>(site) + 1]);
  }
  double exit_rate(std::int64_t site) const {
    return exit_rate_.empty() ? 0.0 : exit_rate_[static_cast<std::size_t>(site)];
  }
  double pi(std::int64_t site) const { return pi_[static_cast<std::size_t>(site)]; }
  double max_rate() const { return max_rate_; }

  // stored conductance between two in-box sites, 0 if absent
  double conductance(std::int64_t a, std::int64_t b) const;

  // unordered in-box edges, lexicographic by (x, y)
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  // open edges from an in-box site to an outside site (box mode only)
  const std::vector<EdgeRecord>& exit_edges() const { return exit_edges_; }

  // serialization; format is JSON lines (or a binary twin), see io.cpp
  void save_jsonl(const std::string& path) const;
  void save_binary(const std::string& path) const;
  static Environment load(const std::string& path);

  // alias tables for O(1) jump sampling, built on first use
  struct WalkTables;
  const WalkTables& walk_tables() const;

  ~Environment();
  Environment(Environment&&) noexcept;
  Environment& operator=(Environment&&) noexcept;
  Environment(const Environment&);
  Environment& operator=(const Environment&);

 private:
  void finalize();  // builds CSR + pi from edges_ / exit_edges_

  Box box_;
  EnvMeta meta_;
  double lmax_ = 0;
  std::vector<EdgeRecord> edges_;
  std::vector<EdgeRecord> exit_edges_;

  std::vector<std::int64_t> row_;
  std::vector<Neighbor> adj_;
  std::vector<double> exit_rate_;
  std::vector<double> pi_;
  double max_rate_ = 0;

  mutable std::unique_ptr<WalkTables> walk_tables_;
  mutable std::once_flag walk_once_;
};

// P(C_{x,y} = 1) = |x-y|^{-(d+s)}, nearest-neighbor bonds always open.
Environment gen_long_range_percolation(int d, double s, int L, Boundary boundary,
                                       double lmax, std::uint64_t seed);

// C_{x,y} = xi_{x,y} / |x-y|^{d+s} with xi == 1 on nearest-neighbor bonds.
Environment gen_polynomial_conductance(int d, double s, const XiSpec& xi, int L,
                                       Boundary boundary, double lmax,
                                       std::uint64_t seed);

// Expected |z|^2-weighted conductance mass dropped by the cutoff,
// sum_{|z| > lmax} E[C_{0,z}] |z|^2, evaluated for the generated family.
double dropped_mass_estimate(int d, double s, double xi_mean, double lmax,
                             const std::string& model);

// Per-site moment functionals of the conductance field.
struct MomentProfile {
  std::vector<double> mu;        // sum |z|^2 C
  std::vector<double> nu;        // sum_{|z|=1} 1/C, inf if a bond is missing
  std::map<double, std::vector<double>> mu_m;
  std::vector<double> mu_star;   // sum |z|^gamma C^{2p/(p+1)}
  double p = 0, q = 0;
  double mu_star_exponent = 0;   // gamma = (d(p-1)+4p)/(1+p)
  double mu_star_cpower = 0;     // 2p/(p+1)
  double mu_norm_p = 0;          // ||mu||_{p,B}
  double nu_norm_q = 0;          // ||nu||_{q,B}
  double m0 = 0;                 // ||max(mu,1)||_{p,B} * ||max(nu,1)||_{q,B}
  std::vector<std::int64_t> nu_infinite_sites;
};

MomentProfile moments(const Environment& env, const std::vector<double>& m_list,
                      double p, double q);

// Tail(u, R)(x) = R^2 sum_{|y-x| > R} u(y) C_{x,y} over stored in-box edges.
double tail(const Environment& env, std::span<const double> u, double R,
            std::int64_t x);

// normalized ell^p average over an index set (max for p = inf)
double ball_norm(std::span<const double> values,
                 const std::vector<std::int64_t>& sites, double p);

// M_n factor of the maximal inequality over a ball: ||max(mu,1)||_{p,B} *
// ||max(mu_m,1)||_{p,B} * ||max(nu,1)||_{q,B}
double maximal_m_factor(const Environment& env, const std::vector<std::int64_t>& ball,
                        double p, double q, double m);

}  // namespace rcm
