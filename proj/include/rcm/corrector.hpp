#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rcm/environment.hpp"
#include "rcm/smallmat.hpp"

namespace rcm {

// chi: torus -> R^d with chi(0) = 0, one component field per coordinate.
struct CorrectorField {
  std::vector<std::vector<double>> chi;   // [coord][site]
  std::vector<double> residual;           // pi-weighted relative residual per coord
  std::vector<std::int64_t> iterations;
  double tol = 0;
  std::string env_id;
};

struct DiffusionMatrix {
  SmallMat m;
  double max_asymmetry = 0;
  double min_eigenvalue = 0;
};

// RHS of the corrector equation, g_i(x) = sum_z z_i C_{x,x+z} with z the
// minimal-image displacement. L chi_i = -g_i.
std::vector<std::vector<double>> corrector_rhs(const Environment& env);

/// Preconditioned CG on the Dirichlet quadratic form, one solve per
/// coordinate. Converges to pi-weighted relative residual <= tol; the
/// residual in the result is recomputed from scratch after the solve.
/// Throws (with the residual history in the message) past max_iter.
CorrectorField solve_corrector(const Environment& env, double tol = 1e-10,
                               std::int64_t max_iter = 100000);

/// M_ij = (1/#sites) sum_x sum_z C_{x,x+z} (z_i + grad chi_i)(z_j + grad chi_j),
/// the spatial average standing in for the environment expectation.
DiffusionMatrix diffusion_matrix(const Environment& env, const CorrectorField& chi);

// corrected Dirichlet energy per coordinate: sum_x sum_z C (z_i + grad psi_i)^2;
// the corrector minimizes this among periodic fields
double corrected_energy(const Environment& env,
                        const std::vector<std::vector<double>>& psi, int coord);

struct SublinearityEntry {
  double n;
  double a;  // (1/n) max_{B_n} |chi|_inf over coordinates
  double b;  // (1/n) || |chi|_2 ||_{2p/(p-1), B_n}
};

struct SublinearityReport {
  std::vector<SublinearityEntry> entries;
  std::vector<double> excluded_radii;
  double norm_exponent = 0;  // 2p/(p-1)
  bool a_decreasing = false;
  bool b_decreasing = false;
};

SublinearityReport sublinearity_report(const Environment& env,
                                       const CorrectorField& chi,
                                       const std::vector<double>& radii, double p);

}  // namespace rcm
