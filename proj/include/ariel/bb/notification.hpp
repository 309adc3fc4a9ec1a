#pragma once

#include <cstdint>
#include <string>

#include "ariel/entity.hpp"

namespace ariel {

// Globally unique record id: (origin node, per-node counter). The counter
// is monotone per origin and survives node reboots.
struct Seq {
  std::uint32_t origin = 0;
  std::uint64_t counter = 0;

  auto operator<=>(const Seq&) const = default;
};

inline std::string to_string(Seq s) {
  return std::to_string(s.origin) + ":" + std::to_string(s.counter);
}

enum class ErrorClass : std::uint8_t {
  Crash,
  TransientCandidate,
  Exception,
  WdTimeout,
  MinorityVote,
};

inline const char* to_string(ErrorClass c) {
  switch (c) {
    case ErrorClass::Crash: return "CRASH";
    case ErrorClass::TransientCandidate: return "TRANSIENT_CANDIDATE";
    case ErrorClass::Exception: return "EXCEPTION";
    case ErrorClass::WdTimeout: return "WD_TIMEOUT";
    case ErrorClass::MinorityVote: return "MINORITY_VOTE";
  }
  return "?";
}

struct ErrorNotification {
  Seq seq;
  std::uint32_t detector = 0;  // id of the reporting tool/task
  EntityRef entity;
  ErrorClass error_class = ErrorClass::TransientCandidate;
  double local_time = 0.0;  // origin clock, ms

  bool operator==(const ErrorNotification&) const = default;
};

}  // namespace ariel
