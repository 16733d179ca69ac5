#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rcm/lattice.hpp"

namespace rcm {

// Dense symmetric d x d matrix, d <= kMaxDim. Enough linear algebra for
// diffusion matrices: Cholesky, determinant, solves, Jacobi eigenvalues.
struct SmallMat {
  int d = 0;
  std::array<std::array<double, kMaxDim>, kMaxDim> a{};

  static SmallMat zero(int d) {
    SmallMat m;
    m.d = d;
    return m;
  }
  static SmallMat scaled_identity(int d, double s) {
    SmallMat m = zero(d);
    for (int i = 0; i < d; ++i) m.a[i][i] = s;
    return m;
  }

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

  double max_asymmetry() const {
    double m = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m = std::max(m, std::abs(a[i][j] - a[j][i]));
    return m;
  }
  double max_abs() const {
    double m = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m = std::max(m, std::abs(a[i][j]));
    return m;
  }
};

// lower-triangular factor of a positive definite matrix; false if a pivot
// is <= 0
inline bool cholesky(const SmallMat& m, SmallMat& L) {
  L = SmallMat::zero(m.d);
  for (int i = 0; i < m.d; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      if (i == j) {
        if (s <= 0) return false;
        L(i, i) = std::sqrt(s);
      } else {
        L(i, j) = s / L(j, j);
      }
    }
  }
  return true;
}

inline double det_from_cholesky(const SmallMat& L) {
  double d = 1;
  for (int i = 0; i < L.d; ++i) d *= L(i, i) * L(i, i);
  return d;
}

// solves M x = b given the Cholesky factor of M
inline std::array<double, kMaxDim> cholesky_solve(const SmallMat& L,
                                                  const std::array<double, kMaxDim>& b) {
  std::array<double, kMaxDim> y{}, x{};
  for (int i = 0; i < L.d; ++i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int k = 0; k < i; ++k) s -= L(i, k) * y[static_cast<std::size_t>(k)];
    y[static_cast<std::size_t>(i)] = s / L(i, i);
  }
  for (int i = L.d - 1; i >= 0; --i) {
    double s = y[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < L.d; ++k) s -= L(k, i) * x[static_cast<std::size_t>(k)];
    x[static_cast<std::size_t>(i)] = s / L(i, i);
  }
  return x;
}

// eigenvalues of a symmetric matrix by cyclic Jacobi rotations
inline std::vector<double> sym_eigenvalues(SmallMat m) {
  const int d = m.d;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) off += m(i, j) * m(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        if (std::abs(m(p, q)) < 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2 * m(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < d; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < d; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) ev[static_cast<std::size_t>(i)] = m(i, i);
  return ev;
}

}  // namespace rcm
