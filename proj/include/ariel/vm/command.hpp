#pragma once

#include <cstdint>
#include <string>

#include "ariel/entity.hpp"

namespace ariel {

// Recovery commands emitted by ACT_* instructions. Decoupled from the
// source-language verb enum so the runtime does not drag the AST in.
enum class CommandVerb : std::uint8_t {
  Restart,
  Terminate,
  Isolate,
  Start,
  Send,
  Warn,
};

inline const char* to_string(CommandVerb v) {
  switch (v) {
    case CommandVerb::Restart: return "RESTART";
    case CommandVerb::Terminate: return "TERMINATE";
    case CommandVerb::Isolate: return "ISOLATE";
    case CommandVerb::Start: return "START";
    case CommandVerb::Send: return "SEND";
    case CommandVerb::Warn: return "WARN";
  }
  return "?";
}

struct RecoveryCommand {
  CommandVerb verb;
  EntityRef target;
  std::uint32_t payload = 0;      // message id for SEND, unused otherwise
  std::uint32_t origin_node = 0;  // dispatching node, filled by the BB

  bool operator==(const RecoveryCommand&) const = default;
  auto operator<=>(const RecoveryCommand&) const = default;
};

inline std::string to_string(const RecoveryCommand& cmd) {
  std::string s = to_string(cmd.verb);
  s += " ";
  s += to_string(cmd.target);
  if (cmd.verb == CommandVerb::Send)
    s += " payload=" + std::to_string(cmd.payload);
  return s;
}

}  // namespace ariel
