#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ariel/errors.hpp"
#include "ariel/rcode.hpp"
#include "ariel/vm/command.hpp"
#include "ariel/vm/snapshot.hpp"

namespace ariel {

// Stack machine over an immutable snapshot. Execution is pure: the only
// output is the command list; faults surface as VmFault(pc, reason).
class Interpreter {
 public:
  // Runs until END, collecting the commands the ACT_* instructions emit.
  static std::vector<RecoveryCommand> run(const RCodeProgram& prog,
                                          const DbSnapshot& snap) {
    std::vector<RecoveryCommand> cmds;
    std::vector<bool> stack;
    std::size_t pc = 0;
    // A hand-built program could loop forever; budget generously instead.
    std::size_t steps = 0;
    constexpr std::size_t kStepLimit = 1'000'000;

    while (true) {
      if (pc >= prog.code.size())
        throw VmFault(pc, "ran off the end of the program");
      if (++steps > kStepLimit) throw VmFault(pc, "step limit exceeded");
      const Instruction& ins = prog.code[pc];
      switch (ins.op) {
        case Opcode::PredFaulty:
        case Opcode::PredTransient:
        case Opcode::PredIsolated:
        case Opcode::PredRestarted:
        case Opcode::PredActive:
        case Opcode::PredPhaseEq:
          stack.push_back(eval_pred(ins, snap, pc));
          ++pc;
          break;
        case Opcode::And:
        case Opcode::Or: {
          bool b = pop(stack, pc);
          bool a = pop(stack, pc);
          stack.push_back(ins.op == Opcode::And ? (a && b) : (a || b));
          ++pc;
          break;
        }
        case Opcode::Not:
          stack.push_back(!pop(stack, pc));
          ++pc;
          break;
        case Opcode::JumpIfFalse: {
          bool cond = pop(stack, pc);
          std::uint32_t target = ins.operands[0];
          if (!cond) {
            check_target(prog, target, pc);
            pc = target;
          } else {
            ++pc;
          }
          break;
        }
        case Opcode::Jump: {
          std::uint32_t target = ins.operands[0];
          check_target(prog, target, pc);
          pc = target;
          break;
        }
        case Opcode::ActRestart:
          cmds.push_back({CommandVerb::Restart, entity_of(ins, 0, pc)});
          ++pc;
          break;
        case Opcode::ActTerminate:
          cmds.push_back({CommandVerb::Terminate, entity_of(ins, 0, pc)});
          ++pc;
          break;
        case Opcode::ActIsolate:
          cmds.push_back({CommandVerb::Isolate, entity_of(ins, 0, pc)});
          ++pc;
          break;
        case Opcode::ActStart:
          cmds.push_back({CommandVerb::Start, entity_of(ins, 0, pc)});
          ++pc;
          break;
        case Opcode::ActSend:
          cmds.push_back({CommandVerb::Send, entity_of(ins, 1, pc),
                          ins.operands[0]});
          ++pc;
          break;
        case Opcode::ActWarn:
          cmds.push_back({CommandVerb::Warn, entity_of(ins, 0, pc)});
          ++pc;
          break;
        case Opcode::End:
          return cmds;
      }
    }
  }

  // Evaluates one guard: starting at start_pc, predicates and boolean ops
  // run, and the stack top is returned at the first non-guard opcode (or
  // at the end of the program if it is guard ops throughout).
  static bool eval_guard(const RCodeProgram& prog, const DbSnapshot& snap,
                         std::size_t start_pc = 0) {
    std::vector<bool> stack;
    std::size_t pc = start_pc;
    while (pc < prog.code.size()) {
      const Instruction& ins = prog.code[pc];
      switch (ins.op) {
        case Opcode::PredFaulty:
        case Opcode::PredTransient:
        case Opcode::PredIsolated:
        case Opcode::PredRestarted:
        case Opcode::PredActive:
        case Opcode::PredPhaseEq:
          stack.push_back(eval_pred(ins, snap, pc));
          ++pc;
          break;
        case Opcode::And:
        case Opcode::Or: {
          bool b = pop(stack, pc);
          bool a = pop(stack, pc);
          stack.push_back(ins.op == Opcode::And ? (a && b) : (a || b));
          ++pc;
          break;
        }
        case Opcode::Not:
          stack.push_back(!pop(stack, pc));
          ++pc;
          break;
        default:
          if (stack.empty()) throw VmFault(pc, "guard left nothing on stack");
          return stack.back();
      }
    }
    if (stack.empty())
      throw VmFault(prog.code.size(), "guard left nothing on stack");
    return stack.back();
  }

 private:
  static bool pop(std::vector<bool>& stack, std::size_t pc) {
    if (stack.empty()) throw VmFault(pc, "stack underflow");
    bool v = stack.back();
    stack.pop_back();
    return v;
  }

  static void check_target(const RCodeProgram& prog, std::uint32_t target,
                           std::size_t pc) {
    if (target >= prog.code.size())
      throw VmFault(pc, "jump target " + std::to_string(target) +
                            " out of range");
  }

  static EntityRef entity_of(const Instruction& ins, std::size_t first,
                             std::size_t pc) {
    std::uint32_t kind = ins.operands[first];
    if (kind > 2)
      throw VmFault(pc, "bad entity kind " + std::to_string(kind));
    return EntityRef{static_cast<EntityKind>(kind), ins.operands[first + 1]};
  }

  static bool eval_pred(const Instruction& ins, const DbSnapshot& snap,
                        std::size_t pc) {
    const EntityState& st = snap.get(entity_of(ins, 0, pc));
    switch (ins.op) {
      case Opcode::PredFaulty: return st.faulty;
      case Opcode::PredTransient: return st.transient;
      case Opcode::PredIsolated: return st.isolated;
      case Opcode::PredRestarted: return st.restarted;
      case Opcode::PredActive: return st.active;
      case Opcode::PredPhaseEq: return st.phase == ins.operands[2];
      default: throw VmFault(pc, "not a predicate");
    }
  }
};

inline std::vector<RecoveryCommand> run_rcode(const RCodeProgram& prog,
                                              const DbSnapshot& snap) {
  return Interpreter::run(prog, snap);
}

inline bool eval_guard(const RCodeProgram& prog, const DbSnapshot& snap,
                       std::size_t start_pc = 0) {
  return Interpreter::eval_guard(prog, snap, start_pc);
}

}  // namespace ariel
