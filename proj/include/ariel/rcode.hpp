#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ariel/entity.hpp"
#include "ariel/errors.hpp"

namespace ariel {

// r-code instruction set. Predicates push a boolean derived from the DB
// snapshot, AND/OR/NOT combine stack values, jumps steer control flow by
// absolute instruction index, ACT_* emit recovery commands, END stops.
enum class Opcode : std::uint8_t {
  PredFaulty = 0x01,
  PredTransient = 0x02,
  PredIsolated = 0x03,
  PredRestarted = 0x04,
  PredActive = 0x05,
  PredPhaseEq = 0x06,
  And = 0x10,
  Or = 0x11,
  Not = 0x12,
  JumpIfFalse = 0x20,
  Jump = 0x21,
  ActRestart = 0x30,
  ActTerminate = 0x31,
  ActIsolate = 0x32,
  ActStart = 0x33,
  ActSend = 0x34,
  ActWarn = 0x35,
  End = 0xFF,
};

// Fixed operand count per opcode; -1 marks an unassigned byte.
// Entity operands are encoded as (kind, id); ACT_SEND carries
// (payload, kind, id); PRED_PHASE_EQ carries (kind, id, phase).
inline int operand_count(std::uint8_t op) {
  switch (static_cast<Opcode>(op)) {
    case Opcode::PredFaulty:
    case Opcode::PredTransient:
    case Opcode::PredIsolated:
    case Opcode::PredRestarted:
    case Opcode::PredActive:
      return 2;
    case Opcode::PredPhaseEq:
      return 3;
    case Opcode::And:
    case Opcode::Or:
    case Opcode::Not:
      return 0;
    case Opcode::JumpIfFalse:
    case Opcode::Jump:
      return 1;
    case Opcode::ActRestart:
    case Opcode::ActTerminate:
    case Opcode::ActIsolate:
    case Opcode::ActStart:
    case Opcode::ActWarn:
      return 2;
    case Opcode::ActSend:
      return 3;
    case Opcode::End:
      return 0;
  }
  return -1;
}

inline const char* mnemonic(Opcode op) {
  switch (op) {
    case Opcode::PredFaulty: return "PRED_FAULTY";
    case Opcode::PredTransient: return "PRED_TRANSIENT";
    case Opcode::PredIsolated: return "PRED_ISOLATED";
    case Opcode::PredRestarted: return "PRED_RESTARTED";
    case Opcode::PredActive: return "PRED_ACTIVE";
    case Opcode::PredPhaseEq: return "PRED_PHASE_EQ";
    case Opcode::And: return "AND";
    case Opcode::Or: return "OR";
    case Opcode::Not: return "NOT";
    case Opcode::JumpIfFalse: return "JUMP_IF_FALSE";
    case Opcode::Jump: return "JUMP";
    case Opcode::ActRestart: return "ACT_RESTART";
    case Opcode::ActTerminate: return "ACT_TERMINATE";
    case Opcode::ActIsolate: return "ACT_ISOLATE";
    case Opcode::ActStart: return "ACT_START";
    case Opcode::ActSend: return "ACT_SEND";
    case Opcode::ActWarn: return "ACT_WARN";
    case Opcode::End: return "END";
  }
  return "?";
}

struct Instruction {
  Opcode op;
  std::vector<std::uint32_t> operands;

  bool operator==(const Instruction&) const = default;
};

struct RCodeProgram {
  std::vector<Instruction> code;

  bool operator==(const RCodeProgram&) const = default;
};

inline constexpr char kRCodeMagic[4] = {'R', 'C', 'O', 'D'};
inline constexpr std::uint16_t kRCodeVersion = 1;

namespace detail {

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xFF));
}

}  // namespace detail

// Serializes to the on-disk r-code container:
//   "RCOD" | version u16 LE | instruction count u32 LE |
//   per instruction: opcode u8 | operand count u8 | operands u32 LE each
inline std::vector<std::uint8_t> encode_rcode(const RCodeProgram& prog) {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), kRCodeMagic, kRCodeMagic + 4);
  detail::put_u16(out, kRCodeVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(prog.code.size()));
  for (const Instruction& ins : prog.code) {
    int want = operand_count(static_cast<std::uint8_t>(ins.op));
    if (want < 0)
      throw std::invalid_argument("encode_rcode: unknown opcode");
    if (static_cast<std::size_t>(want) != ins.operands.size())
      throw std::invalid_argument("encode_rcode: bad operand count for " +
                                  std::string(mnemonic(ins.op)));
    out.push_back(static_cast<std::uint8_t>(ins.op));
    out.push_back(static_cast<std::uint8_t>(want));
    for (std::uint32_t v : ins.operands) detail::put_u32(out, v);
  }
  return out;
}

// Inverse of encode_rcode. The whole buffer must be consumed exactly;
// anything else raises DecodeError with the offending byte offset.
inline RCodeProgram decode_rcode(const std::vector<std::uint8_t>& bytes) {
  std::size_t off = 0;
  auto need = [&](std::size_t n, const char* what) {
    if (bytes.size() - off < n)
      throw DecodeError(off, std::string("truncated ") + what);
  };
  auto get_u16 = [&]() {
    std::uint16_t v = static_cast<std::uint16_t>(
        bytes[off] | (static_cast<std::uint16_t>(bytes[off + 1]) << 8));
    off += 2;
    return v;
  };
  auto get_u32 = [&]() {
    std::uint32_t v = bytes[off] |
                      (static_cast<std::uint32_t>(bytes[off + 1]) << 8) |
                      (static_cast<std::uint32_t>(bytes[off + 2]) << 16) |
                      (static_cast<std::uint32_t>(bytes[off + 3]) << 24);
    off += 4;
    return v;
  };

  need(4, "magic");
  for (int i = 0; i < 4; ++i) {
    if (bytes[off + i] != static_cast<std::uint8_t>(kRCodeMagic[i]))
      throw DecodeError(off + i, "bad magic");
  }
  off += 4;
  need(2, "version");
  std::uint16_t version = get_u16();
  if (version != kRCodeVersion)
    throw DecodeError(off - 2,
                      "unsupported version " + std::to_string(version));
  need(4, "instruction count");
  std::uint32_t count = get_u32();

  RCodeProgram prog;
  prog.code.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    need(2, "instruction header");
    std::uint8_t raw_op = bytes[off];
    std::uint8_t raw_argc = bytes[off + 1];
    int want = operand_count(raw_op);
    if (want < 0)
      throw DecodeError(off, "unknown opcode " + std::to_string(raw_op));
    if (raw_argc != want)
      throw DecodeError(off + 1, "operand count mismatch for " +
                                     std::string(mnemonic(
                                         static_cast<Opcode>(raw_op))));
    off += 2;
    Instruction ins{static_cast<Opcode>(raw_op), {}};
    ins.operands.reserve(static_cast<std::size_t>(want));
    need(static_cast<std::size_t>(want) * 4, "operands");
    for (int a = 0; a < want; ++a) ins.operands.push_back(get_u32());
    prog.code.push_back(std::move(ins));
  }
  if (off != bytes.size())
    throw DecodeError(off, "trailing bytes after last instruction");
  return prog;
}

// Human-readable listing, one instruction per line.
inline std::string disassemble(const RCodeProgram& prog) {
  std::string out;
  auto entity_str = [](std::uint32_t kind, std::uint32_t id) {
    if (kind <= 2)
      return to_string(EntityRef{static_cast<EntityKind>(kind), id});
    return "?" + std::to_string(kind) + ":" + std::to_string(id);
  };
  for (std::size_t i = 0; i < prog.code.size(); ++i) {
    const Instruction& ins = prog.code[i];
    std::string idx = std::to_string(i);
    out += std::string(idx.size() < 4 ? 4 - idx.size() : 0, ' ') + idx;
    out += "  ";
    out += mnemonic(ins.op);
    switch (ins.op) {
      case Opcode::PredFaulty:
      case Opcode::PredTransient:
      case Opcode::PredIsolated:
      case Opcode::PredRestarted:
      case Opcode::PredActive:
      case Opcode::ActRestart:
      case Opcode::ActTerminate:
      case Opcode::ActIsolate:
      case Opcode::ActStart:
      case Opcode::ActWarn:
        out += " " + entity_str(ins.operands[0], ins.operands[1]);
        break;
      case Opcode::PredPhaseEq:
        out += " " + entity_str(ins.operands[0], ins.operands[1]) +
               " == " + std::to_string(ins.operands[2]);
        break;
      case Opcode::JumpIfFalse:
      case Opcode::Jump:
        out += " @" + std::to_string(ins.operands[0]);
        break;
      case Opcode::ActSend:
        out += " " + std::to_string(ins.operands[0]) + " " +
               entity_str(ins.operands[1], ins.operands[2]);
        break;
      case Opcode::And:
      case Opcode::Or:
      case Opcode::Not:
      case Opcode::End:
        break;
    }
    out += "\n";
  }
  return out;
}

}  // namespace ariel
