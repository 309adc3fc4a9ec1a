#pragma once

#include <cstdint>
#include <vector>

#include "ariel/sim/rng.hpp"

namespace ariel {

struct NetParams {
  double d_min = 1.0;
  double d_max = 10.0;
  double p_omit = 0.0;
  double p_late = 0.0;
  double late_factor = 5.0;
};

// Per-send verdict for one datagram.
struct NetDecision {
  bool deliver = true;
  double delay = 0.0;
};

// Lossy-channel model. Each ordered (src,dst) pair draws from its own
// RNG stream so that reordering one channel's traffic cannot perturb
// another's.
class NetModel {
 public:
  NetModel(std::uint64_t seed, NetParams params)
      : rng_(seed), params_(params) {}

  const NetParams& params() const { return params_; }

  NetDecision decide(std::uint32_t src, std::uint32_t dst) {
    SplitMix64& ch = rng_.channel(src, dst);
    NetDecision d;
    if (params_.p_omit > 0.0 && ch.uniform01() < params_.p_omit) {
      d.deliver = false;
      return d;
    }
    if (params_.p_late > 0.0 && ch.uniform01() < params_.p_late) {
      d.delay = params_.d_max * params_.late_factor;
      return d;
    }
    d.delay = ch.uniform(params_.d_min, params_.d_max);
    return d;
  }

 private:
  ChannelRng rng_;
  NetParams params_;
};

// One partition interval: during [start,end) the nodes are split into
// disjoint blocks and traffic only flows within a block.
struct PartitionSpec {
  double start = 0.0;
  double end = 0.0;
  std::vector<std::vector<std::uint32_t>> blocks;
};

class PartitionSchedule {
 public:
  void add(PartitionSpec spec) { specs_.push_back(std::move(spec)); }
  bool empty() const { return specs_.empty(); }
  const std::vector<PartitionSpec>& specs() const { return specs_; }

  // If several intervals are active the latest-starting one wins.
  const PartitionSpec* active_at(double t) const {
    const PartitionSpec* best = nullptr;
    for (const auto& s : specs_)
      if (s.start <= t && t < s.end && (!best || s.start > best->start))
        best = &s;
    return best;
  }

  // true when src and dst may communicate at global time t
  bool connected(double t, std::uint32_t src, std::uint32_t dst) const {
    const PartitionSpec* p = active_at(t);
    if (!p) return true;
    return block_of(*p, src) == block_of(*p, dst);
  }

 private:
  std::vector<PartitionSpec> specs_;

  static int block_of(const PartitionSpec& p, std::uint32_t node) {
    for (std::size_t i = 0; i < p.blocks.size(); ++i)
      for (std::uint32_t n : p.blocks[i])
        if (n == node) return static_cast<int>(i);
    return -1;
  }
};

}  // namespace ariel
