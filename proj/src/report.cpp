#include "rcm/report.hpp"

#include "rcm/hash.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rcm {

std::string hash_hex(const std::string& bytes) { return fnv1a_hex(bytes); }

std::string hash_file_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("hash_file_hex: cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return hash_hex(os.str());
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("atomic_write: write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return "nan";
}

}  // namespace

json to_json(const AssumptionReport& r) {
  json j;
  j["d"] = r.exponents.d;
  j["p"] = finite_or_string(r.exponents.p);
  j["q"] = finite_or_string(r.exponents.q);
  j["moment_condition_11"] = r.moment_condition_11;
  j["strong_condition_first"] = r.strong_first;
  j["strong_condition_second"] = r.strong_second;
  j["sobolev_condition"] = r.sobolev_condition;
  j["rho"] = finite_or_string(r.rho);
  j["rho_infinite"] = r.rho_infinite;
  j["kappa"] = r.kappa;
  j["theta"] = r.theta;
  j["p_star"] = finite_or_string(r.exponents.p_star());
  j["gamma"] = r.exponents.gamma();
  j["gamma0"] = r.exponents.gamma0();
  if (!r.q_infinity_note.empty()) j["q_infinity_note"] = r.q_infinity_note;
  return j;
}

json to_json(const InequalityReport& r) {
  json j;
  j["name"] = r.name;
  j["lhs"] = r.lhs;
  json comps = json::object();
  for (const auto& [k, v] : r.rhs) comps[k] = finite_or_string(v);
  j["rhs_components"] = comps;
  j["implied_constant"] = finite_or_string(r.implied_constant);
  j["ceiling"] = finite_or_string(r.ceiling);
  j["pass"] = r.pass;
  json nums = json::object();
  for (const auto& [k, v] : r.numbers) nums[k] = finite_or_string(v);
  j["inputs"] = nums;
  json notes = json::object();
  for (const auto& [k, v] : r.notes) notes[k] = v;
  j["notes"] = notes;
  return j;
}

json to_json(const OndiagReport& r) {
  json j;
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"t", e.t},
                       {"sup_p", e.sup_p},
                       {"scaled", e.scaled},
                       {"argmax_site", e.argmax_site}});
  }
  j["entries"] = entries;
  j["excluded_t"] = r.excluded;
  j["max_scaled"] = r.max_scaled;
  j["min_scaled"] = r.min_scaled;
  j["ratio"] = finite_or_string(r.ratio);
  j["factor_ceiling"] = r.factor_ceiling;
  j["bounded"] = r.bounded;
  return j;
}

json to_json(const SublinearityReport& r) {
  json j;
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"n", e.n}, {"a", e.a}, {"b", e.b}});
  j["entries"] = entries;
  j["excluded_radii"] = r.excluded_radii;
  j["norm_exponent"] = r.norm_exponent;
  j["a_decreasing"] = r.a_decreasing;
  j["b_decreasing"] = r.b_decreasing;
  return j;
}

json to_json(const HolderReport& r) {
  json j;
  j["radii"] = r.radii;
  j["osc"] = r.osc;
  j["nonincreasing"] = r.nonincreasing;
  j["shrink_base"] = r.shrink_base;
  if (r.beta_defined)
    j["beta_hat"] = r.beta_hat;
  else
    j["beta_hat"] = "undefined";
  return j;
}

json to_json(const LltErrorCurve& c) {
  json j;
  json entries = json::array();
  for (std::size_t i = 0; i < c.n_list.size(); ++i) {
    entries.push_back({{"n", c.n_list[i]},
                       {"E", c.errors[i]},
                       {"escape_estimate", c.escape_estimates[i]}});
  }
  j["entries"] = entries;
  j["verdict"] = c.verdict;
  j["grid"] = {{"R", c.opts.R},
               {"T1", c.opts.T1},
               {"T2", c.opts.T2},
               {"t_step", c.opts.t_step},
               {"escape_threshold", c.opts.escape_threshold},
               {"evolve_tol", c.opts.evolve_tol}};
  return j;
}

json to_json(const EmpiricalKernel& k, const Box& box) {
  json j;
  j["t"] = k.t;
  j["N"] = k.samples;
  j["killed_fraction"] = k.killed_fraction;
  json entries = json::array();
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(k.prob.size()); ++i) {
    if (k.prob[static_cast<std::size_t>(i)] == 0) continue;
    Coord c = box.coord(i);
    json x = json::array();
    for (int kk = 0; kk < box.dim(); ++kk) x.push_back(c[kk]);
    entries.push_back({{"x", x}, {"prob", k.prob[static_cast<std::size_t>(i)]}});
  }
  j["entries"] = entries;
  return j;
}

json moment_summary_json(const MomentProfile& mp) {
  json j;
  j["p"] = finite_or_string(mp.p);
  j["q"] = finite_or_string(mp.q);
  j["mu_star_exponent"] = mp.mu_star_exponent;
  j["mu_star_cpower"] = mp.mu_star_cpower;
  j["mu_norm_p"] = finite_or_string(mp.mu_norm_p);
  j["nu_norm_q"] = finite_or_string(mp.nu_norm_q);
  j["M0"] = finite_or_string(mp.m0);
  j["nu_infinite_sites"] = mp.nu_infinite_sites.size();
  return j;
}

json diffusion_json(const DiffusionMatrix& m, const CorrectorField& chi) {
  json j;
  json rows = json::array();
  for (int i = 0; i < m.m.d; ++i) {
    json row = json::array();
    for (int k = 0; k < m.m.d; ++k) row.push_back(m.m(i, k));
    rows.push_back(row);
  }
  j["M"] = rows;
  j["max_asymmetry"] = m.max_asymmetry;
  j["min_eigenvalue"] = m.min_eigenvalue;
  j["residuals"] = chi.residual;
  j["iterations"] = chi.iterations;
  j["tol"] = chi.tol;
  j["env"] = chi.env_id;
  return j;
}

std::string llt_curve_csv(const LltErrorCurve& c) {
  std::ostringstream os;
  os << "n,E_n,escape_estimate\n";
  for (std::size_t i = 0; i < c.n_list.size(); ++i) {
    os << c.n_list[i] << "," << format_double(c.errors[i]) << ","
       << format_double(c.escape_estimates[i]) << "\n";
  }
  return os.str();
}

std::string llt_long_csv(const std::vector<LltPointRecord>& rows, int d) {
  std::ostringstream os;
  os << "n,t";
  for (int i = 1; i <= d; ++i) os << ",x_" << i;
  os << ",rescaled_p,gaussian,abs_err\n";
  for (const auto& r : rows) {
    os << r.n << "," << format_double(r.t);
    for (int i = 0; i < d; ++i) os << "," << format_double(r.x[static_cast<std::size_t>(i)]);
    os << "," << format_double(r.rescaled_p) << "," << format_double(r.gaussian)
       << "," << format_double(r.abs_err) << "\n";
  }
  return os.str();
}

std::string endpoints_csv(const ScaledEndpoints& pts, int d) {
  std::ostringstream os;
  os << "t,n";
  for (int i = 1; i <= d; ++i) os << ",x_" << i;
  os << "\n";
  for (const auto& p : pts.points) {
    os << format_double(pts.t) << "," << pts.n;
    for (int i = 0; i < d; ++i) os << "," << format_double(p[static_cast<std::size_t>(i)]);
    os << "\n";
  }
  return os.str();
}

std::string field_csv(const LatticeField& f) {
  const Box& bx = f.box();
  std::ostringstream os;
  for (int i = 1; i <= bx.dim(); ++i) os << (i > 1 ? "," : "") << "x_" << i;
  os << ",value\n";
  for (std::int64_t i = 0; i < f.size(); ++i) {
    Coord c = bx.coord(i);
    for (int k = 0; k < bx.dim(); ++k) os << (k ? "," : "") << c[k];
    os << "," << format_double(f[i]) << "\n";
  }
  return os.str();
}

std::string corrector_jsonl(const Environment& env, const CorrectorField& chi) {
  const Box& bx = env.box();
  std::ostringstream os;
  for (std::int64_t i = 0; i < bx.site_count(); ++i) {
    json line;
    Coord c = bx.coord(i);
    json x = json::array();
    for (int k = 0; k < bx.dim(); ++k) x.push_back(c[k]);
    json v = json::array();
    for (int k = 0; k < bx.dim(); ++k)
      v.push_back(chi.chi[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]);
    line["x"] = x;
    line["chi"] = v;
    os << line.dump() << "\n";
  }
  return os.str();
}

}  // namespace rcm
