#pragma once

#include <cstdint>
#include <vector>

#include "ariel/sim/rng.hpp"

namespace ariel {

// Per-node hardware clocks with bounded drift:
//   local(n, t) = (1 + drift_n) * t,   |drift_n| <= rho
// Drifts are drawn from the seed so runs are reproducible.
class ClockModel {
 public:
  ClockModel(std::uint32_t nodes, double rho, std::uint64_t seed) {
    drifts_.reserve(nodes);
    for (std::uint32_t n = 0; n < nodes; ++n) {
      SplitMix64 r(mix_key(seed, 0xC10Cull, n));
      drifts_.push_back(rho == 0.0 ? 0.0 : r.uniform(-rho, rho));
    }
  }

  double local(std::uint32_t node, double global_now) const {
    return (1.0 + drifts_[node]) * global_now;
  }

  // Inverse mapping, used to turn a local deadline into a kernel time.
  double to_global(std::uint32_t node, double local_time) const {
    return local_time / (1.0 + drifts_[node]);
  }

  double drift(std::uint32_t node) const { return drifts_[node]; }

 private:
  std::vector<double> drifts_;
};

}  // namespace ariel
