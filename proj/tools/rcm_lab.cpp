// rcm-lab: generate random conductance environments, run the solvers and
// audits, and emit machine-readable artifacts.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rcm/hash.hpp"
#include "rcm/kernel.hpp"
#include "rcm/parallel.hpp"
#include "rcm/report.hpp"

namespace fs = std::filesystem;
using namespace rcm;

namespace {

constexpr const char* kVersion = "0.1.0";

// exit codes: 0 ok, 2 validation, 3 numeric failure, 4 truncation breach
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitTruncation = 4;

struct Common {
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out = "out";
  std::string env_path;
};

struct RunContext {
  Common common;
  json config;                       // echo of every knob
  std::vector<std::string> reports;  // artifact paths written
  std::string env_file_hash;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

void add_common(CLI::App* cmd, Common& c, bool needs_env) {
  cmd->add_option("--seed", c.seed, "experiment seed");
  cmd->add_option("--threads", c.threads, "worker pool size");
  cmd->add_option("--out", c.out, "output directory");
  auto* env = cmd->add_option("--env", c.env_path, "environment file");
  if (needs_env) env->required();
}

void write_artifact(RunContext& ctx, const std::string& name, const std::string& content) {
  const fs::path p = fs::path(ctx.common.out) / name;
  atomic_write(p.string(), content);
  ctx.reports.push_back(p.string());
}

void write_json(RunContext& ctx, const std::string& name, const json& j) {
  write_artifact(ctx, name, j.dump(2) + "\n");
}

void write_manifest(RunContext& ctx) {
  json m;
  m["version"] = kVersion;
  m["config"] = ctx.config;
  m["config_hash"] = fnv1a_hex(ctx.config.dump());
  if (!ctx.env_file_hash.empty()) m["env_file_hash"] = ctx.env_file_hash;
  // report paths relative to the output directory, so reruns into different
  // directories stay byte-comparable
  json reports = json::array();
  for (const auto& r : ctx.reports)
    reports.push_back(fs::relative(r, ctx.common.out).string());
  m["reports"] = reports;
  // timestamps and execution knobs live in their own field so artifact
  // comparison can drop them
  json runtime;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
  runtime["wall_clock_sec"] = wall;
  runtime["written_at"] =
      static_cast<std::int64_t>(std::chrono::duration_cast<std::chrono::seconds>(
                                    std::chrono::system_clock::now().time_since_epoch())
                                    .count());
  runtime["threads"] = ctx.common.threads;
  runtime["out"] = ctx.common.out;
  m["runtime"] = runtime;
  const fs::path p = fs::path(ctx.common.out) / "manifest.json";
  atomic_write(p.string(), m.dump(2) + "\n");
}

Environment load_env(RunContext& ctx) {
  Environment env = Environment::load(ctx.common.env_path);
  ctx.env_file_hash = hash_file_hex(ctx.common.env_path);
  return env;
}

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return kInf;
  return std::stod(s);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  double v;
  while (is >> v) out.push_back(v);
  return out;
}

LatticeField random_field(const Box& bx, std::uint64_t seed, std::uint64_t trial,
                          double lo = -1.0, double hi = 1.0) {
  LatticeField f(bx);
  for (std::int64_t i = 0; i < bx.site_count(); ++i) {
    rng::Stream st = rng::stream(seed, {rng::tag::kField, trial, static_cast<std::uint64_t>(i)});
    f[i] = st.next_uniform(lo, hi);
  }
  return f;
}

// caloric driver shared by wphi / maximal / holder: killed (or constant)
// boundary data on a centered ball, initial data at the bottom time
SpaceTimeField caloric_field(const Environment& env, double radius, double t_lo,
                             double t_hi, double dt, const std::string& interior,
                             const std::string& exterior, std::uint64_t seed,
                             std::uint64_t trial, double tol) {
  const Box& bx = env.box();
  const auto steps = static_cast<std::int64_t>(std::ceil((t_hi - t_lo) / dt - 1e-12));
  SpaceTimeField ext(bx, t_lo, dt, std::max<std::int64_t>(steps, 1));
  double ext_value = 0;
  if (exterior.rfind("const:", 0) == 0) ext_value = std::stod(exterior.substr(6));
  else if (exterior != "zero")
    throw std::invalid_argument("caloric driver: exterior must be 'zero' or 'const:<v>'");
  for (std::int64_t s = 0; s <= ext.steps(); ++s) {
    auto sl = ext.slice(s);
    std::fill(sl.begin(), sl.end(), ext_value);
  }

  LatticeField init(bx, ext_value);
  if (interior == "delta") {
    for (auto i : bx.ball(bx.origin(), radius)) init[i] = 0.0;
    init[bx.index(bx.origin())] = 1.0;
  } else if (interior == "random") {
    rng::Stream st = rng::stream(seed, {rng::tag::kTrial, trial});
    for (auto i : bx.ball(bx.origin(), radius)) init[i] = st.next_unit();
  } else if (interior.rfind("const:", 0) == 0) {
    const double v = std::stod(interior.substr(6));
    for (auto i : bx.ball(bx.origin(), radius)) init[i] = v;
  } else {
    throw std::invalid_argument(
        "caloric driver: interior must be 'delta', 'random' or 'const:<v>'");
  }

  Cylinder cyl = Cylinder::base(t_hi, bx.index(bx.origin()), t_hi - t_lo, radius);
  return solve_caloric(env, cyl, init, ext, tol);
}

// ----------------------------------------------------------- subcommands

int run_env(RunContext& ctx, const std::string& model, int d, double s, int L,
            const std::string& boundary, double lmax, const std::string& xi,
            const std::string& format) {
  const Boundary b = boundary == "box" ? Boundary::box : Boundary::torus;
  double cutoff = lmax;
  if (cutoff <= 0) cutoff = std::min(16, b == Boundary::box ? 2 * L : L - 1);
  Environment env = [&] {
    if (model == "lrp")
      return gen_long_range_percolation(d, s, L, b, cutoff, ctx.common.seed);
    if (model == "poly")
      return gen_polynomial_conductance(d, s, XiSpec::parse(xi), L, b, cutoff,
                                        ctx.common.seed);
    if (model == "constant")
      return Environment::constant_nn(d, b, b == Boundary::box ? 2 * L + 1 : 2 * L);
    throw std::invalid_argument("env: unknown model " + model);
  }();
  const std::string name = format == "bin" ? "env.bin" : "env.jsonl";
  const fs::path p = fs::path(ctx.common.out) / name;
  if (format == "bin")
    env.save_binary(p.string());
  else
    env.save_jsonl(p.string());
  ctx.reports.push_back(p.string());
  ctx.env_file_hash = hash_file_hex(p.string());

  json info;
  info["env_id"] = env.meta().id;
  info["sites"] = env.site_count();
  info["edges"] = env.edges().size();
  info["exit_edges"] = env.exit_edges().size();
  info["max_rate"] = env.max_rate();
  info["dropped_mass_estimate"] =
      model == "constant"
          ? 0.0
          : dropped_mass_estimate(d, s, model == "poly" ? XiSpec::parse(xi).mean() : 1.0,
                                  cutoff, model);
  write_json(ctx, "env_info.json", info);
  return 0;
}

int run_moments(RunContext& ctx, const std::string& p_s, const std::string& q_s,
                const std::string& m_s) {
  Environment env = load_env(ctx);
  const double p = parse_exponent(p_s), q = parse_exponent(q_s);
  MomentProfile mp = moments(env, parse_list(m_s), p, q);
  json j = moment_summary_json(mp);
  j["env_id"] = env.meta().id;
  ExponentSet es{env.dim(), p, q};
  if (env.dim() >= 2) j["assumptions"] = to_json(check_assumptions(es));
  write_json(ctx, "moments.json", j);
  return 0;
}

int run_walk(RunContext& ctx, const std::string& kind, double t, std::int64_t N,
             int n, std::uint64_t stream) {
  Environment env = load_env(ctx);
  if (kind == "kernel") {
    EmpiricalKernel k = empirical_kernel(env, t, N, ctx.common.seed, stream);
    write_json(ctx, "empirical_kernel.json", to_json(k, env.box()));
  } else if (kind == "endpoints") {
    ScaledEndpoints pts =
        scaled_endpoint_samples(env, n, t, N, ctx.common.seed, stream);
    write_artifact(ctx, "endpoints.csv", endpoints_csv(pts, env.dim()));
    json j;
    j["n"] = pts.n;
    j["t"] = pts.t;
    j["killed"] = pts.killed;
    j["warning"] = pts.warning;
    write_json(ctx, "endpoints_info.json", j);
  } else {
    throw std::invalid_argument("walk: kind must be 'kernel' or 'endpoints'");
  }
  return 0;
}

int run_kernel(RunContext& ctx, const std::string& t_list, const std::string& ondiag,
               double tol) {
  Environment env = load_env(ctx);
  const Box& bx = env.box();
  if (!ondiag.empty()) {
    OndiagReport rep = ondiag_check(env, parse_list(ondiag), 3.0, tol);
    write_json(ctx, "ondiag.json", to_json(rep));
    return 0;
  }
  auto ts = parse_list(t_list);
  std::sort(ts.begin(), ts.end());
  HeatKernelSequence seq(env, bx.index(bx.origin()), tol);
  json info;
  info["tol"] = tol;
  info["t"] = ts;
  json masses = json::array();
  for (double t : ts) {
    const LatticeField& p = seq.advance_to(t);
    char name[64];
    std::snprintf(name, sizeof name, "kernel_t%.6g.csv", t);
    write_artifact(ctx, name, field_csv(p));
    std::snprintf(name, sizeof name, "kernel_t%.6g.json", t);
    json slice;
    slice["t"] = t;
    slice["tol"] = tol;
    json entries = json::array();
    for (std::int64_t i = 0; i < p.size(); ++i) {
      if (p[i] == 0) continue;
      Coord c = bx.coord(i);
      json x = json::array();
      for (int k = 0; k < bx.dim(); ++k) x.push_back(c[k]);
      entries.push_back({{"x", x}, {"value", p[i]}});
    }
    slice["entries"] = entries;
    write_json(ctx, name, slice);
    masses.push_back(p.sum());
  }
  info["mass"] = masses;
  info["env_id"] = env.meta().id;
  write_json(ctx, "kernel_info.json", info);
  return 0;
}

int run_corrector(RunContext& ctx, double tol, std::int64_t max_iter,
                  const std::string& radii, const std::string& p_s) {
  Environment env = load_env(ctx);
  CorrectorField chi = solve_corrector(env, tol, max_iter);
  DiffusionMatrix M = diffusion_matrix(env, chi);
  write_artifact(ctx, "chi.jsonl", corrector_jsonl(env, chi));
  write_json(ctx, "diffusion.json", diffusion_json(M, chi));
  if (!radii.empty()) {
    SublinearityReport rep =
        sublinearity_report(env, chi, parse_list(radii), parse_exponent(p_s));
    write_json(ctx, "sublinearity.json", to_json(rep));
  }
  return 0;
}

int run_sobolev(RunContext& ctx, double R, const std::string& p_s,
                const std::string& q_s, int trials) {
  Environment env = load_env(ctx);
  const double p = parse_exponent(p_s), q = parse_exponent(q_s);
  json per = json::array();
  double max_implied = 0;
  for (int k = 0; k < trials; ++k) {
    LatticeField u = random_field(env.box(), ctx.common.seed, static_cast<std::uint64_t>(k));
    InequalityReport rep = sobolev_audit(env, u, R, p, q);
    max_implied = std::max(max_implied, rep.implied_constant);
    per.push_back(to_json(rep));
  }
  json j;
  j["trials"] = per;
  j["max_implied_constant"] = max_implied;
  j["env_id"] = env.meta().id;
  write_json(ctx, "sobolev.json", j);
  return 0;
}

int run_poincare(RunContext& ctx, double R, const std::string& profile, int trials) {
  Environment env = load_env(ctx);
  std::function<double(double)> Phi;
  if (profile == "one")
    Phi = [](double) { return 1.0; };
  else if (profile == "linear")
    Phi = [R](double r) { return std::max(0.0, 1.0 - r / (R + 1.0)); };
  else if (profile.rfind("plateau:", 0) == 0) {
    const double r0 = std::stod(profile.substr(8));
    Phi = [R, r0](double r) {
      if (r <= r0) return 1.0;
      return std::max(0.0, (R - r) / std::max(R - r0, 1e-9));
    };
  } else {
    throw std::invalid_argument("poincare: profile must be one|linear|plateau:<r0>");
  }
  json per = json::array();
  double max_implied = 0;
  for (int k = 0; k < trials; ++k) {
    LatticeField u = random_field(env.box(), ctx.common.seed, static_cast<std::uint64_t>(k));
    InequalityReport rep = poincare_audit(env, u, R, Phi);
    max_implied = std::max(max_implied, rep.implied_constant);
    per.push_back(to_json(rep));
  }
  json j;
  j["trials"] = per;
  j["max_implied_constant"] = max_implied;
  j["profile"] = profile;
  j["env_id"] = env.meta().id;
  write_json(ctx, "poincare.json", j);
  return 0;
}

int run_wphi(RunContext& ctx, double t0, double r, double R, double dt,
             const std::string& interior, const std::string& exterior,
             const std::string& p_s, double tol) {
  Environment env = load_env(ctx);
  SpaceTimeField u = caloric_field(env, R, -2 * R * R, 2 * R * R, dt, interior,
                                   exterior, ctx.common.seed, 0, tol);
  InequalityReport rep = wphi_report(env, u, t0, r, R, parse_exponent(p_s));
  rep.notes["interior"] = interior;
  rep.notes["exterior"] = exterior;
  write_json(ctx, "wphi.json", to_json(rep));
  return 0;
}

int run_maximal(RunContext& ctx, double n, double m, double theta, double theta_p,
                double dt, const std::string& p_s, const std::string& q_s,
                const std::string& interior, double tol) {
  Environment env = load_env(ctx);
  SpaceTimeField u = caloric_field(env, 2 * n, -4 * n * n, 0.0, dt, interior, "zero",
                                   ctx.common.seed, 0, tol);
  InequalityReport rep = maximal_report(env, u, n, m, theta, theta_p,
                                        parse_exponent(p_s), parse_exponent(q_s));
  write_json(ctx, "maximal.json", to_json(rep));
  return 0;
}

int run_holder(RunContext& ctx, double R, double base, double dt, double warmup,
               const std::string& interior, double tol) {
  Environment env = load_env(ctx);
  SpaceTimeField u = caloric_field(env, R, -R * R / 2 - warmup, R * R / 2, dt,
                                   interior, "zero", ctx.common.seed, 0, tol);
  HolderReport rep = holder_report(env, u, R, base);
  json j = to_json(rep);
  j["env_id"] = env.meta().id;
  j["grid_dt"] = dt;
  j["warmup"] = warmup;
  write_json(ctx, "holder.json", j);
  return 0;
}

int run_llt(RunContext& ctx, const std::string& n_s, const LltOptions& opts,
            const std::string& m_mode, double cg_tol, bool long_csv) {
  Environment env = load_env(ctx);
  SmallMat M;
  if (m_mode == "corrector") {
    CorrectorField chi = solve_corrector(env, cg_tol, 100000);
    M = diffusion_matrix(env, chi).m;
  } else if (m_mode.rfind("iso:", 0) == 0) {
    M = SmallMat::scaled_identity(env.dim(), std::stod(m_mode.substr(4)));
  } else {
    throw std::invalid_argument("llt: --M must be 'corrector' or 'iso:<v>'");
  }
  GaussianKernelParams params = GaussianKernelParams::from_matrix(M);
  std::vector<int> n_list;
  for (double v : parse_list(n_s)) n_list.push_back(static_cast<int>(v));
  std::vector<LltPointRecord> rows;
  LltErrorCurve curve =
      convergence_study(env, params, n_list, opts, long_csv ? &rows : nullptr);
  write_artifact(ctx, "llt_curve.csv", llt_curve_csv(curve));
  json j = to_json(curve);
  j["env_id"] = env.meta().id;
  json mj = json::array();
  for (int i = 0; i < M.d; ++i) {
    json row = json::array();
    for (int k = 0; k < M.d; ++k) row.push_back(M(i, k));
    mj.push_back(row);
  }
  j["M"] = mj;
  write_json(ctx, "llt.json", j);
  if (long_csv) write_artifact(ctx, "llt_long.csv", llt_long_csv(rows, env.dim()));
  return 0;
}

int run_audit_all(RunContext& ctx, const std::string& p_s, const std::string& q_s,
                  double R, int trials) {
  Environment env = load_env(ctx);
  const double p = parse_exponent(p_s), q = parse_exponent(q_s);
  json j;
  j["env_id"] = env.meta().id;
  MomentProfile mp = moments(env, {2.0, env.dim() + 2.0}, p, q);
  j["moments"] = moment_summary_json(mp);
  if (env.dim() >= 2)
    j["assumptions"] = to_json(check_assumptions(ExponentSet{env.dim(), p, q}));
  double sob_max = 0, poi_max = 0;
  for (int k = 0; k < trials; ++k) {
    LatticeField u = random_field(env.box(), ctx.common.seed, static_cast<std::uint64_t>(k));
    if (!std::isinf(q)) {
      sob_max = std::max(sob_max, sobolev_audit(env, u, R, p, q).implied_constant);
    }
    poi_max = std::max(
        poi_max, poincare_audit(env, u, R, [](double) { return 1.0; }).implied_constant);
  }
  j["sobolev_max_implied"] = sob_max;
  j["poincare_max_implied"] = poi_max;
  OndiagReport od = ondiag_check(env, {4, 9, 16, 36, 64});
  j["ondiag"] = to_json(od);
  write_json(ctx, "audit_all.json", j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random conductance model workbench"};
  app.require_subcommand(1);
  app.set_config("--config", "", "config file ([subcommand] sections, flags win)");
  app.allow_config_extras(true);
  app.fallthrough(true);

  RunContext ctx;

  // env
  auto* c_env = app.add_subcommand("env", "generate an environment");
  std::string model = "lrp", boundary = "torus", xi = "const:1", format = "jsonl";
  int d = 2, L = 64;
  double s = 5.0, lmax = 0;
  add_common(c_env, ctx.common, false);
  c_env->add_option("--model", model, "lrp | poly | constant");
  c_env->add_option("--d", d);
  c_env->add_option("--s", s);
  c_env->add_option("--L", L, "half-width; torus side is 2L");
  c_env->add_option("--boundary", boundary, "torus | box");
  c_env->add_option("--lmax", lmax, "jump cutoff (default min(16, geometry bound))");
  c_env->add_option("--xi", xi, "xi distribution for poly");
  c_env->add_option("--format", format, "jsonl | bin");

  // moments
  auto* c_mom = app.add_subcommand("moments", "moment functionals");
  std::string p_s = "3", q_s = "inf", m_s = "2,4";
  add_common(c_mom, ctx.common, true);
  c_mom->add_option("--p", p_s);
  c_mom->add_option("--q", q_s);
  c_mom->add_option("--m", m_s, "comma list of |z|-moment orders");

  // walk
  auto* c_walk = app.add_subcommand("walk", "sample VSRW paths");
  std::string walk_kind = "kernel";
  double walk_t = 1.0;
  std::int64_t walk_N = 10000;
  int walk_n = 1;
  std::uint64_t walk_stream = 0;
  add_common(c_walk, ctx.common, true);
  c_walk->add_option("--kind", walk_kind, "kernel | endpoints");
  c_walk->add_option("--t", walk_t);
  c_walk->add_option("--N", walk_N);
  c_walk->add_option("--n", walk_n, "diffusive scale for endpoints");
  c_walk->add_option("--stream", walk_stream, "base stream id");

  // kernel
  auto* c_ker = app.add_subcommand("kernel", "deterministic heat kernel");
  std::string ker_t = "1", ker_ondiag = "";
  double ker_tol = 1e-12;
  add_common(c_ker, ctx.common, true);
  c_ker->add_option("--t", ker_t, "comma list of times");
  c_ker->add_option("--ondiag", ker_ondiag, "t grid for the on-diagonal check");
  c_ker->add_option("--tol", ker_tol);

  // corrector
  auto* c_cor = app.add_subcommand("corrector", "corrector and diffusion matrix");
  double cor_tol = 1e-10;
  std::int64_t cor_iter = 100000;
  std::string cor_radii = "", cor_p = "3";
  add_common(c_cor, ctx.common, true);
  c_cor->add_option("--tol", cor_tol);
  c_cor->add_option("--max-iter", cor_iter);
  c_cor->add_option("--radii", cor_radii, "sublinearity radii");
  c_cor->add_option("--p", cor_p, "exponent for the 2p/(p-1) norm");

  // sobolev
  auto* c_sob = app.add_subcommand("sobolev", "Sobolev inequality audit");
  double sob_R = 8;
  int sob_trials = 10;
  std::string sob_p = "inf", sob_q = "4";
  add_common(c_sob, ctx.common, true);
  c_sob->add_option("--R", sob_R);
  c_sob->add_option("--p", sob_p);
  c_sob->add_option("--q", sob_q);
  c_sob->add_option("--trials", sob_trials);

  // poincare
  auto* c_poi = app.add_subcommand("poincare", "weighted Poincare audit");
  double poi_R = 8;
  int poi_trials = 10;
  std::string poi_profile = "one";
  add_common(c_poi, ctx.common, true);
  c_poi->add_option("--R", poi_R);
  c_poi->add_option("--profile", poi_profile, "one | linear | plateau:<r0>");
  c_poi->add_option("--trials", poi_trials);

  // wphi
  auto* c_wphi = app.add_subcommand("wphi", "weak parabolic Harnack report");
  double wphi_t0 = 0, wphi_r = 4, wphi_R = 20, wphi_dt = 1.0, wphi_tol = 1e-12;
  std::string wphi_interior = "delta", wphi_exterior = "zero", wphi_p = "3";
  add_common(c_wphi, ctx.common, true);
  c_wphi->add_option("--t0", wphi_t0);
  c_wphi->add_option("--r", wphi_r);
  c_wphi->add_option("--R", wphi_R);
  c_wphi->add_option("--dt", wphi_dt);
  c_wphi->add_option("--interior", wphi_interior, "delta | random | const:<v>");
  c_wphi->add_option("--exterior", wphi_exterior, "zero | const:<v>");
  c_wphi->add_option("--p", wphi_p);
  c_wphi->add_option("--tol", wphi_tol);

  // maximal
  auto* c_max = app.add_subcommand("maximal", "maximal inequality report");
  double max_n = 8, max_m = 4, max_theta = 0.75, max_theta_p = 0.5, max_dt = 0.5,
         max_tol = 1e-12;
  std::string max_p = "3", max_q = "inf", max_interior = "delta";
  add_common(c_max, ctx.common, true);
  c_max->add_option("--n", max_n);
  c_max->add_option("--m", max_m);
  c_max->add_option("--theta", max_theta);
  c_max->add_option("--theta-p", max_theta_p);
  c_max->add_option("--dt", max_dt);
  c_max->add_option("--p", max_p);
  c_max->add_option("--q", max_q);
  c_max->add_option("--interior", max_interior);
  c_max->add_option("--tol", max_tol);

  // holder
  auto* c_hol = app.add_subcommand("holder", "oscillation decay report");
  double hol_R = 16, hol_base = 6, hol_dt = 1.0, hol_warmup = 32, hol_tol = 1e-12;
  std::string hol_interior = "delta";
  add_common(c_hol, ctx.common, true);
  c_hol->add_option("--R", hol_R);
  c_hol->add_option("--base", hol_base);
  c_hol->add_option("--dt", hol_dt);
  c_hol->add_option("--warmup", hol_warmup);
  c_hol->add_option("--interior", hol_interior);
  c_hol->add_option("--tol", hol_tol);

  // llt
  auto* c_llt = app.add_subcommand("llt", "local limit theorem error curve");
  std::string llt_n = "8,16,32", llt_M = "corrector";
  LltOptions llt_opts;
  double llt_cg_tol = 1e-10;
  bool llt_long = false;
  add_common(c_llt, ctx.common, true);
  c_llt->add_option("--n", llt_n, "comma list of scales");
  c_llt->add_option("--R", llt_opts.R);
  c_llt->add_option("--t1", llt_opts.T1);
  c_llt->add_option("--t2", llt_opts.T2);
  c_llt->add_option("--t-step", llt_opts.t_step);
  c_llt->add_option("--escape-threshold", llt_opts.escape_threshold);
  c_llt->add_option("--tol", llt_opts.evolve_tol);
  c_llt->add_option("--M", llt_M, "corrector | iso:<v>");
  c_llt->add_option("--cg-tol", llt_cg_tol);
  c_llt->add_flag("--long", llt_long, "also write the long-format CSV");

  // audit-all
  auto* c_all = app.add_subcommand("audit-all", "moments + audits + on-diagonal");
  std::string all_p = "3", all_q = "4";
  double all_R = 8;
  int all_trials = 10;
  add_common(c_all, ctx.common, true);
  c_all->add_option("--p", all_p);
  c_all->add_option("--q", all_q);
  c_all->add_option("--R", all_R);
  c_all->add_option("--trials", all_trials);

  CLI11_PARSE(app, argc, argv);

  par::set_threads(ctx.common.threads);

  // echo the experiment-defining configuration (hashed into the manifest);
  // execution knobs (threads, out) go into the manifest's runtime field
  ctx.config["seed"] = ctx.common.seed;
  ctx.config["env"] = ctx.common.env_path;

  int rc = 0;
  std::string error;
  int error_code = 0;
  try {
    if (app.got_subcommand(c_env)) {
      ctx.config["cmd"] = "env";
      ctx.config["model"] = model;
      ctx.config["d"] = d;
      ctx.config["s"] = s;
      ctx.config["L"] = L;
      ctx.config["boundary"] = boundary;
      ctx.config["lmax"] = lmax;
      ctx.config["xi"] = xi;
      ctx.config["format"] = format;
      rc = run_env(ctx, model, d, s, L, boundary, lmax, xi, format);
    } else if (app.got_subcommand(c_mom)) {
      ctx.config["cmd"] = "moments";
      ctx.config["p"] = p_s;
      ctx.config["q"] = q_s;
      ctx.config["m"] = m_s;
      rc = run_moments(ctx, p_s, q_s, m_s);
    } else if (app.got_subcommand(c_walk)) {
      ctx.config["cmd"] = "walk";
      ctx.config["kind"] = walk_kind;
      ctx.config["t"] = walk_t;
      ctx.config["N"] = walk_N;
      ctx.config["n"] = walk_n;
      ctx.config["stream"] = walk_stream;
      rc = run_walk(ctx, walk_kind, walk_t, walk_N, walk_n, walk_stream);
    } else if (app.got_subcommand(c_ker)) {
      ctx.config["cmd"] = "kernel";
      ctx.config["t"] = ker_t;
      ctx.config["ondiag"] = ker_ondiag;
      ctx.config["tol"] = ker_tol;
      rc = run_kernel(ctx, ker_t, ker_ondiag, ker_tol);
    } else if (app.got_subcommand(c_cor)) {
      ctx.config["cmd"] = "corrector";
      ctx.config["tol"] = cor_tol;
      ctx.config["max_iter"] = cor_iter;
      ctx.config["radii"] = cor_radii;
      ctx.config["p"] = cor_p;
      rc = run_corrector(ctx, cor_tol, cor_iter, cor_radii, cor_p);
    } else if (app.got_subcommand(c_sob)) {
      ctx.config["cmd"] = "sobolev";
      ctx.config["R"] = sob_R;
      ctx.config["p"] = sob_p;
      ctx.config["q"] = sob_q;
      ctx.config["trials"] = sob_trials;
      rc = run_sobolev(ctx, sob_R, sob_p, sob_q, sob_trials);
    } else if (app.got_subcommand(c_poi)) {
      ctx.config["cmd"] = "poincare";
      ctx.config["R"] = poi_R;
      ctx.config["profile"] = poi_profile;
      ctx.config["trials"] = poi_trials;
      rc = run_poincare(ctx, poi_R, poi_profile, poi_trials);
    } else if (app.got_subcommand(c_wphi)) {
      ctx.config["cmd"] = "wphi";
      ctx.config["t0"] = wphi_t0;
      ctx.config["r"] = wphi_r;
      ctx.config["R"] = wphi_R;
      ctx.config["dt"] = wphi_dt;
      ctx.config["interior"] = wphi_interior;
      ctx.config["exterior"] = wphi_exterior;
      ctx.config["p"] = wphi_p;
      ctx.config["tol"] = wphi_tol;
      rc = run_wphi(ctx, wphi_t0, wphi_r, wphi_R, wphi_dt, wphi_interior,
                    wphi_exterior, wphi_p, wphi_tol);
    } else if (app.got_subcommand(c_max)) {
      ctx.config["cmd"] = "maximal";
      ctx.config["n"] = max_n;
      ctx.config["m"] = max_m;
      ctx.config["theta"] = max_theta;
      ctx.config["theta_p"] = max_theta_p;
      ctx.config["dt"] = max_dt;
      ctx.config["p"] = max_p;
      ctx.config["q"] = max_q;
      ctx.config["interior"] = max_interior;
      ctx.config["tol"] = max_tol;
      rc = run_maximal(ctx, max_n, max_m, max_theta, max_theta_p, max_dt, max_p,
                       max_q, max_interior, max_tol);
    } else if (app.got_subcommand(c_hol)) {
      ctx.config["cmd"] = "holder";
      ctx.config["R"] = hol_R;
      ctx.config["base"] = hol_base;
      ctx.config["dt"] = hol_dt;
      ctx.config["warmup"] = hol_warmup;
      ctx.config["interior"] = hol_interior;
      ctx.config["tol"] = hol_tol;
      rc = run_holder(ctx, hol_R, hol_base, hol_dt, hol_warmup, hol_interior, hol_tol);
    } else if (app.got_subcommand(c_llt)) {
      ctx.config["cmd"] = "llt";
      ctx.config["n"] = llt_n;
      ctx.config["R"] = llt_opts.R;
      ctx.config["t1"] = llt_opts.T1;
      ctx.config["t2"] = llt_opts.T2;
      ctx.config["t_step"] = llt_opts.t_step;
      ctx.config["escape_threshold"] = llt_opts.escape_threshold;
      ctx.config["tol"] = llt_opts.evolve_tol;
      ctx.config["M"] = llt_M;
      ctx.config["cg_tol"] = llt_cg_tol;
      ctx.config["long"] = llt_long;
      rc = run_llt(ctx, llt_n, llt_opts, llt_M, llt_cg_tol, llt_long);
    } else if (app.got_subcommand(c_all)) {
      ctx.config["cmd"] = "audit-all";
      ctx.config["p"] = all_p;
      ctx.config["q"] = all_q;
      ctx.config["R"] = all_R;
      ctx.config["trials"] = all_trials;
      rc = run_audit_all(ctx, all_p, all_q, all_R, all_trials);
    }
  } catch (const std::invalid_argument& e) {
    error = e.what();
    error_code = kExitValidation;
  } catch (const std::runtime_error& e) {
    error = e.what();
    error_code = std::string(e.what()).find("escaped-mass") != std::string::npos
                     ? kExitTruncation
                     : kExitNumeric;
  } catch (const std::exception& e) {
    error = e.what();
    error_code = kExitNumeric;
  }

  if (!error.empty()) {
    json err;
    err["error"] = error;
    err["exit_code"] = error_code;
    err["config"] = ctx.config;
    atomic_write((fs::path(ctx.common.out) / "error.json").string(), err.dump(2) + "\n");
    std::cerr << "rcm-lab: " << error << "\n";
    return error_code;
  }

  write_manifest(ctx);
  return rc;
}
