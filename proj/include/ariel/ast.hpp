#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "ariel/entity.hpp"

namespace ariel {

enum class PredKind : std::uint8_t {
  Faulty,
  Transient,
  Isolated,
  Restarted,
  Active,
};

struct Guard;
using GuardPtr = std::unique_ptr<Guard>;

struct GuardPred {
  PredKind kind;
  EntityRef entity;
};

struct GuardPhaseEq {
  EntityRef entity;
  std::uint32_t phase;
};

struct GuardAnd {
  GuardPtr lhs, rhs;
};

struct GuardOr {
  GuardPtr lhs, rhs;
};

struct GuardNot {
  GuardPtr expr;
};

struct Guard {
  std::variant<GuardPred, GuardPhaseEq, GuardAnd, GuardOr, GuardNot> node;
};

inline GuardPtr make_guard(Guard g) {
  return std::make_unique<Guard>(std::move(g));
}

enum class ActionVerb : std::uint8_t {
  Restart,
  Terminate,
  Isolate,
  Start,
  Send,
  Warn,
};

inline const char* to_string(ActionVerb v) {
  switch (v) {
    case ActionVerb::Restart: return "RESTART";
    case ActionVerb::Terminate: return "TERMINATE";
    case ActionVerb::Isolate: return "ISOLATE";
    case ActionVerb::Start: return "START";
    case ActionVerb::Send: return "SEND";
    case ActionVerb::Warn: return "WARN";
  }
  return "?";
}

struct ActionStmt;

struct SimpleAction {
  ActionVerb verb;
  EntityRef target;
  std::uint32_t payload{0};  // SEND only
};

// A guarded action; also the form of every nested IF inside a branch.
struct GuardedAction {
  Guard guard;
  std::vector<ActionStmt> then_branch;
  std::vector<ActionStmt> else_branch;
};

struct ActionStmt {
  std::variant<SimpleAction, GuardedAction> node;
};

// Top-level recovery section: the ordered IF clauses of the program.
using RecoverySection = std::vector<GuardedAction>;

struct WatchdogConfig {
  std::uint32_t wid{0};
  EntityRef watched;            // TASK
  std::uint32_t period_ms{0};   // > 0
  EntityRef warn_target;        // TASK
};

struct ReplicatedGroupConfig {
  EntityRef group;
  std::vector<EntityRef> members;  // >= 2 distinct TASK refs, majority voting
};

using BTConfig = std::variant<WatchdogConfig, ReplicatedGroupConfig>;

struct ParsedProgram {
  RecoverySection recovery;
  std::vector<BTConfig> configs;
};

}  // namespace ariel
