#include "replen/random.hpp"

namespace replen {

RandomStream::RandomStream(std::uint64_t seed) noexcept {
  std::uint64_t z = seed;
  for (auto& word : state_) {
    word = mix64(z);
    z += 0x9e3779b97f4a7c15ULL;
  }
}

RandomStream RandomStream::substream(std::uint64_t seed, std::uint64_t index,
                                     std::uint64_t purpose) noexcept {
  const std::uint64_t key =
      mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL) ^ mix64(~purpose);
  return RandomStream(key);
}

}  // namespace replen
