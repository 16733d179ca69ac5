#pragma once

#include <cstdint>
#include <cmath>
#include <initializer_list>

namespace rcm::rng {

// SplitMix64 finalizer. Counter-based: the n-th output of a stream keyed by
// `key` is mix(key + n*GOLDEN), so draws depend only on (key, n) and never on
// iteration order or thread scheduling.
inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fold(std::uint64_t h, std::uint64_t v) {
  return mix(h + kGolden + v);
}

// One independent stream per key; keys are derived by folding tags into the
// experiment seed.
class Stream {
 public:
  Stream() = default;
  explicit Stream(std::uint64_t key) : key_(key) {}

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return ctr_; }

  std::uint64_t next_u64() { return mix(key_ + (++ctr_) * kGolden); }

  // uniform in [0, 1), 53-bit resolution
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform in (0, 1], safe for log()
  double next_unit_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double next_exp(double rate) { return -std::log(next_unit_pos()) / rate; }

  double next_uniform(double a, double b) { return a + (b - a) * next_unit(); }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t ctr_ = 0;
};

inline std::uint64_t derive_key(std::uint64_t seed,
                                std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = mix(seed ^ 0x8f1bbcdcbfa53e0bULL);
  for (std::uint64_t t : tags) h = fold(h, t);
  return h;
}

inline Stream stream(std::uint64_t seed,
                     std::initializer_list<std::uint64_t> tags) {
  return Stream(derive_key(seed, tags));
}

// Stable tags for the independent stream families used across the project.
namespace tag {
inline constexpr std::uint64_t kEdge = 0x65646765ULL;      // environment edges
inline constexpr std::uint64_t kWalk = 0x77616c6bULL;      // walk paths
inline constexpr std::uint64_t kField = 0x6669656cULL;     // random test fields
inline constexpr std::uint64_t kTrial = 0x7472696cULL;     // audit trial batches
}  // namespace tag

}  // namespace rcm::rng
