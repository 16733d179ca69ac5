#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcm {

inline constexpr int kMaxDim = 4;

enum class Boundary { box, torus };

inline std::string to_string(Boundary b) {
  return b == Boundary::box ? "box" : "torus";
}

// Lattice coordinate with runtime dimension d <= kMaxDim.
struct Coord {
  std::array<int, kMaxDim> c{};
  int d = 0;

  int& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  int operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  bool operator==(const Coord& o) const {
    if (d != o.d) return false;
    for (int i = 0; i < d; ++i) if (c[i] != o.c[i]) return false;
    return true;
  }
  bool operator<(const Coord& o) const {  // lexicographic
    for (int i = 0; i < d; ++i) {
      if (c[i] != o.c[i]) return c[i] < o.c[i];
    }
    return false;
  }

  double norm2() const {
    double s = 0;
    for (int i = 0; i < d; ++i) s += double(c[i]) * double(c[i]);
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }
};

inline Coord make_coord(std::initializer_list<int> xs) {
  Coord z;
  z.d = static_cast<int>(xs.size());
  int i = 0;
  for (int v : xs) z.c[i++] = v;
  return z;
}

// Finite piece of Z^d: either the box {-L,...,L}^d (side 2L+1) or a torus of
// side `side` with centered coordinates. Sites are addressed by a linear
// index in row-major order over the coordinate ranges.
class Box {
 public:
  Box() = default;
  Box(int d, Boundary boundary, int side) : d_(d), boundary_(boundary), side_(side) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("Box: d out of range");
    if (side < 2) throw std::invalid_argument("Box: side must be >= 2");
    lo_ = (boundary == Boundary::box) ? -(side - 1) / 2 : -side / 2;
    if (boundary == Boundary::box && side % 2 == 0)
      throw std::invalid_argument("Box: box mode requires odd side (2L+1)");
    n_sites_ = 1;
    for (int i = 0; i < d; ++i) n_sites_ *= side;
  }

  static Box box_of_halfwidth(int d, int L) { return Box(d, Boundary::box, 2 * L + 1); }
  static Box torus_of_side(int d, int side) { return Box(d, Boundary::torus, side); }

  int dim() const { return d_; }
  Boundary boundary() const { return boundary_; }
  int side() const { return side_; }
  // largest |x_i| representable; for torus the usable half-width
  int half_width() const {
    return boundary_ == Boundary::box ? (side_ - 1) / 2 : side_ / 2;
  }
  std::int64_t site_count() const { return n_sites_; }
  int coord_lo() const { return lo_; }
  int coord_hi() const { return lo_ + side_ - 1; }

  bool contains(const Coord& x) const {
    for (int i = 0; i < d_; ++i)
      if (x[i] < lo_ || x[i] > coord_hi()) return false;
    return true;
  }

  std::int64_t index(const Coord& x) const {
    std::int64_t idx = 0;
    for (int i = 0; i < d_; ++i) {
      assert(x[i] >= lo_ && x[i] <= coord_hi());
      idx = idx * side_ + (x[i] - lo_);
    }
    return idx;
  }

  Coord coord(std::int64_t idx) const {
    Coord x;
    x.d = d_;
    for (int i = d_ - 1; i >= 0; --i) {
      x[i] = static_cast<int>(idx % side_) + lo_;
      idx /= side_;
    }
    return x;
  }

  // wraps into the torus range; identity (with range check) in box mode
  Coord wrap(Coord x) const {
    if (boundary_ == Boundary::torus) {
      for (int i = 0; i < d_; ++i) {
        int v = (x[i] - lo_) % side_;
        if (v < 0) v += side_;
        x[i] = v + lo_;
      }
    }
    return x;
  }

  // displacement y - x; torus mode returns the minimal image, mapping each
  // component into (-side/2, side/2]
  Coord displacement(const Coord& x, const Coord& y) const {
    Coord z;
    z.d = d_;
    for (int i = 0; i < d_; ++i) {
      int dz = y[i] - x[i];
      if (boundary_ == Boundary::torus) {
        dz %= side_;
        if (dz < 0) dz += side_;
        if (2 * dz > side_) dz -= side_;
      }
      z[i] = dz;
    }
    return z;
  }

  double distance2(const Coord& x, const Coord& y) const {
    return displacement(x, y).norm2();
  }
  double distance(const Coord& x, const Coord& y) const {
    return std::sqrt(distance2(x, y));
  }
  double distance(std::int64_t a, std::int64_t b) const {
    return distance(coord(a), coord(b));
  }

  // all sites within Euclidean distance R of `center` (minimal image in torus
  // mode), in increasing linear-index order
  std::vector<std::int64_t> ball(const Coord& center, double R) const;
  std::vector<std::int64_t> ball(std::int64_t center, double R) const {
    return ball(coord(center), R);
  }

  Coord origin() const {
    Coord z;
    z.d = d_;
    return z;
  }

  bool operator==(const Box& o) const {
    return d_ == o.d_ && boundary_ == o.boundary_ && side_ == o.side_;
  }

 private:
  int d_ = 0;
  Boundary boundary_ = Boundary::box;
  int side_ = 0;
  int lo_ = 0;
  std::int64_t n_sites_ = 0;
};

// All nonzero offsets z with |z| <= lmax (Euclidean), in lexicographic order.
std::vector<Coord> offsets_in_ball(int d, double lmax);

}  // namespace rcm
