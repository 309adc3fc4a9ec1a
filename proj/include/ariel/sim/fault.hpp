#pragma once

#include <cstdint>

namespace ariel {

enum class FaultKind {
  CrashTask,
  CrashNode,
  HangTask,
  RaiseException,
  CorruptBallot,
};

// Scripted fault, fired at `at` (global ms).
struct FaultSpec {
  double at = 0.0;
  FaultKind kind = FaultKind::CrashTask;
  std::uint32_t target = 0;  // task id, or node id for CrashNode
  // HangTask: duration ms; RaiseException: code; CorruptBallot: value
  std::uint32_t arg = 0;
};

}  // namespace ariel
