#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ariel {

// Nodes, tasks and groups are the entities recovery guards and actions
// range over. Identity is (kind, id) only; names exist solely at the
// source level and are resolved away by the constant tables.
enum class EntityKind : std::uint8_t { Node = 0, Task = 1, Group = 2 };

struct EntityRef {
  EntityKind kind{EntityKind::Node};
  std::uint32_t id{0};

  auto operator<=>(const EntityRef&) const = default;
};

inline char entity_kind_letter(EntityKind k) {
  switch (k) {
    case EntityKind::Node: return 'N';
    case EntityKind::Task: return 'T';
    case EntityKind::Group: return 'G';
  }
  return '?';
}

inline std::string to_string(EntityRef e) {
  return entity_kind_letter(e.kind) + std::to_string(e.id);
}

inline EntityRef node_ref(std::uint32_t id) { return {EntityKind::Node, id}; }
inline EntityRef task_ref(std::uint32_t id) { return {EntityKind::Task, id}; }
inline EntityRef group_ref(std::uint32_t id) { return {EntityKind::Group, id}; }

// Parses the compact "T7" / "N0" / "G3" form used by scenario files and
// trace details.
inline std::optional<EntityRef> parse_entity(std::string_view text) {
  if (text.size() < 2) return std::nullopt;
  EntityKind kind;
  switch (text[0]) {
    case 'N': kind = EntityKind::Node; break;
    case 'T': kind = EntityKind::Task; break;
    case 'G': kind = EntityKind::Group; break;
    default: return std::nullopt;
  }
  std::uint64_t id = 0;
  for (char c : text.substr(1)) {
    if (c < '0' || c > '9') return std::nullopt;
    id = id * 10 + static_cast<std::uint64_t>(c - '0');
    if (id > 0xFFFFFFFFull) return std::nullopt;
  }
  return EntityRef{kind, static_cast<std::uint32_t>(id)};
}

}  // namespace ariel
