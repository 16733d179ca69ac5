#include "rcm/lattice.hpp"

#include <algorithm>

namespace rcm {

std::vector<std::int64_t> Box::ball(const Coord& center, double R) const {
  std::vector<std::int64_t> out;
  if (R < 0) return out;
  const double r2 = R * R;
  // iterate the offset cube, clip to the geometry
  const int r = static_cast<int>(std::floor(R));
  Coord z;
  z.d = d_;
  std::array<int, kMaxDim> cur{};
  for (int i = 0; i < d_; ++i) cur[i] = -r;
  while (true) {
    for (int i = 0; i < d_; ++i) z[i] = cur[i];
    if (z.norm2() <= r2) {
      Coord y;
      y.d = d_;
      bool ok = true;
      for (int i = 0; i < d_; ++i) y[i] = center[i] + z[i];
      if (boundary_ == Boundary::torus) {
        y = wrap(y);
        // reject offsets that exceed the torus's unambiguous range
        Coord img = displacement(center, y);
        if (img.norm2() > r2 || !(img == z)) ok = (img.norm2() <= r2);
      } else {
        ok = contains(y);
      }
      if (ok) out.push_back(index(y));
    }
    int i = d_ - 1;
    while (i >= 0 && cur[i] == r) {
      cur[i] = -r;
      --i;
    }
    if (i < 0) break;
    ++cur[i];
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Coord> offsets_in_ball(int d, double lmax) {
  std::vector<Coord> out;
  const int r = static_cast<int>(std::floor(lmax));
  const double r2 = lmax * lmax;
  Coord z;
  z.d = d;
  std::array<int, kMaxDim> cur{};
  for (int i = 0; i < d; ++i) cur[i] = -r;
  while (true) {
    for (int i = 0; i < d; ++i) z[i] = cur[i];
    const double n2 = z.norm2();
    if (n2 > 0 && n2 <= r2) out.push_back(z);
    int i = d - 1;
    while (i >= 0 && cur[i] == r) {
      cur[i] = -r;
      --i;
    }
    if (i < 0) break;
    ++cur[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rcm
