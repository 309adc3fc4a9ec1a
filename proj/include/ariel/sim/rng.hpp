#pragma once

#include <cstdint>
#include <map>
#include <utility>

namespace ariel {

// splitmix64: tiny, fast, and stable across platforms — the whole
// simulation's determinism rests on it, so no std:: distributions here.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + uniform01() * (hi - lo);
  }
};

inline std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a,
                             std::uint64_t b) {
  SplitMix64 m(seed ^ (a * 0x9E3779B97F4A7C15ull) ^
               (b * 0xC2B2AE3D27D4EB4Full));
  return m.next();
}

// One independent stream per (src, dst) channel, so adding traffic on one
// channel never perturbs delivery decisions on another.
class ChannelRng {
 public:
  explicit ChannelRng(std::uint64_t seed) : seed_(seed) {}

  SplitMix64& channel(std::uint32_t src, std::uint32_t dst) {
    auto key = std::make_pair(src, dst);
    auto it = streams_.find(key);
    if (it == streams_.end())
      it = streams_.emplace(key, SplitMix64(mix_key(seed_, src, dst))).first;
    return it->second;
  }

 private:
  std::uint64_t seed_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, SplitMix64> streams_;
};

}  // namespace ariel
