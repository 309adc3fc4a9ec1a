#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "ariel/ast.hpp"
#include "ariel/rcode.hpp"

namespace ariel {

// Lowers the recovery section to r-code. Guards become postfix predicate
// sequences (no short-circuit: both operands of AND/OR are evaluated),
// each clause becomes
//
//   <guard> JUMP_IF_FALSE else|after <then> [JUMP after <else>]
//
// with absolute targets, and one END closes the whole program.
class Compiler {
 public:
  RCodeProgram compile(const RecoverySection& recovery) {
    code_.clear();
    for (const GuardedAction& clause : recovery) emit_clause(clause);
    emit(Opcode::End, {});
    return RCodeProgram{std::move(code_)};
  }

 private:
  std::vector<Instruction> code_;

  std::uint32_t here() const {
    return static_cast<std::uint32_t>(code_.size());
  }

  void emit(Opcode op, std::vector<std::uint32_t> operands) {
    code_.push_back(Instruction{op, std::move(operands)});
  }

  void emit_guard(const Guard& g) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, GuardPred>) {
            Opcode op;
            switch (node.kind) {
              case PredKind::Faulty: op = Opcode::PredFaulty; break;
              case PredKind::Transient: op = Opcode::PredTransient; break;
              case PredKind::Isolated: op = Opcode::PredIsolated; break;
              case PredKind::Restarted: op = Opcode::PredRestarted; break;
              case PredKind::Active: op = Opcode::PredActive; break;
            }
            emit(op, {static_cast<std::uint32_t>(node.entity.kind),
                      node.entity.id});
          } else if constexpr (std::is_same_v<T, GuardPhaseEq>) {
            emit(Opcode::PredPhaseEq,
                 {static_cast<std::uint32_t>(node.entity.kind),
                  node.entity.id, node.phase});
          } else if constexpr (std::is_same_v<T, GuardAnd>) {
            emit_guard(*node.lhs);
            emit_guard(*node.rhs);
            emit(Opcode::And, {});
          } else if constexpr (std::is_same_v<T, GuardOr>) {
            emit_guard(*node.lhs);
            emit_guard(*node.rhs);
            emit(Opcode::Or, {});
          } else {
            static_assert(std::is_same_v<T, GuardNot>);
            emit_guard(*node.expr);
            emit(Opcode::Not, {});
          }
        },
        g.node);
  }

  void emit_action(const SimpleAction& a) {
    std::uint32_t kind = static_cast<std::uint32_t>(a.target.kind);
    switch (a.verb) {
      case ActionVerb::Restart:
        emit(Opcode::ActRestart, {kind, a.target.id});
        break;
      case ActionVerb::Terminate:
        emit(Opcode::ActTerminate, {kind, a.target.id});
        break;
      case ActionVerb::Isolate:
        emit(Opcode::ActIsolate, {kind, a.target.id});
        break;
      case ActionVerb::Start:
        emit(Opcode::ActStart, {kind, a.target.id});
        break;
      case ActionVerb::Send:
        emit(Opcode::ActSend, {a.payload, kind, a.target.id});
        break;
      case ActionVerb::Warn:
        emit(Opcode::ActWarn, {kind, a.target.id});
        break;
    }
  }

  void emit_branch(const std::vector<ActionStmt>& body) {
    for (const ActionStmt& stmt : body) {
      if (const auto* simple = std::get_if<SimpleAction>(&stmt.node))
        emit_action(*simple);
      else
        emit_clause(std::get<GuardedAction>(stmt.node));
    }
  }

  void emit_clause(const GuardedAction& clause) {
    emit_guard(clause.guard);
    std::uint32_t jif_at = here();
    emit(Opcode::JumpIfFalse, {0});
    emit_branch(clause.then_branch);
    if (clause.else_branch.empty()) {
      code_[jif_at].operands[0] = here();
    } else {
      std::uint32_t jump_at = here();
      emit(Opcode::Jump, {0});
      code_[jif_at].operands[0] = here();
      emit_branch(clause.else_branch);
      code_[jump_at].operands[0] = here();
    }
  }
};

struct CompiledUnit {
  RCodeProgram rcode;
  std::vector<BTConfig> configs;
};

inline RCodeProgram compile_recovery(const RecoverySection& recovery) {
  Compiler c;
  return c.compile(recovery);
}

inline CompiledUnit compile_program(const ParsedProgram& prog) {
  return CompiledUnit{compile_recovery(prog.recovery), prog.configs};
}

}  // namespace ariel
