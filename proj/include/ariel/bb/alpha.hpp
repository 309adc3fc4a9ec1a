#pragma once

#include <cmath>
#include <cstdint>

namespace ariel {

// α-count filter: +1 per error judgment, ×K per error-free judgment
// period; a score at or above T classifies the fault as non-transient
// (permanent or intermittent).
struct AlphaCount {
  double score = 0.0;
  double K = 0.9;   // decay, in [0,1)
  double T = 3.0;   // classification threshold, > 0
};

enum class Judgment : std::uint8_t { Error, NoError };

inline AlphaCount alpha_update(AlphaCount a, Judgment j) {
  if (j == Judgment::Error)
    a.score += 1.0;
  else
    a.score *= a.K;
  return a;
}

inline bool alpha_non_transient(const AlphaCount& a) {
  return a.score >= a.T;
}

// Time-grid realization: no-error judgments are issued once per judgment
// period. Rather than running wall timers, the score decays lazily by the
// number of whole periods elapsed since the last update — identical on
// every replica because it only depends on recorded timestamps.
struct AlphaState {
  AlphaCount count;
  std::int64_t last_period = 0;
  bool touched = false;

  static std::int64_t period_index(double local_ms, double period_ms) {
    return static_cast<std::int64_t>(std::floor(local_ms / period_ms));
  }

  void decay_to(double local_ms, double period_ms) {
    std::int64_t idx = period_index(local_ms, period_ms);
    if (!touched) {
      last_period = idx;
      touched = true;
      return;
    }
    for (std::int64_t i = last_period; i < idx; ++i)
      count = alpha_update(count, Judgment::NoError);
    if (idx > last_period) last_period = idx;
  }

  void error_at(double local_ms, double period_ms) {
    decay_to(local_ms, period_ms);
    count = alpha_update(count, Judgment::Error);
  }

  double effective_score(double local_ms, double period_ms) const {
    AlphaState copy = *this;
    copy.decay_to(local_ms, period_ms);
    return copy.count.score;
  }
};

}  // namespace ariel
