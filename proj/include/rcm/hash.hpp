#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace rcm {

// FNV-1a 64-bit, hex encoded; artifact ids and manifest hashes
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rcm
