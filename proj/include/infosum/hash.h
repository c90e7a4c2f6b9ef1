#pragma once

#include <cstdint>
#include <string_view>

namespace infosum {

// 64-bit FNV-1a. Used for content hashes of lexicons and feature layouts;
// stable across platforms and runs.
class Fnv1a {
 public:
  static constexpr std::uint64_t kOffset = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;

  void update(std::string_view bytes) noexcept {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= kPrime;
    }
  }

  std::uint64_t digest() const noexcept { return state_; }

 private:
  std::uint64_t state_ = kOffset;
};

inline std::uint64_t fnv1a(std::string_view bytes) noexcept {
  Fnv1a h;
  h.update(bytes);
  return h.digest();
}

}  // namespace infosum
