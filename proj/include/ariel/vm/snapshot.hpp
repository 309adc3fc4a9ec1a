#pragma once

#include <cstdint>
#include <map>

#include "ariel/entity.hpp"

namespace ariel {

// Per-entity view the guard predicates read. `transient` is derived at
// snapshot time (faulty and the filtered error score still below the
// threshold), the other flags are folded from the notification DB.
struct EntityState {
  bool faulty = false;
  bool transient = false;
  bool isolated = false;
  bool restarted = false;
  bool active = false;
  std::uint32_t phase = 0;

  bool operator==(const EntityState&) const = default;
};

// Immutable point-in-time copy of the DB an r-code run evaluates against.
// Entities never mentioned read as all-false with phase 0.
struct DbSnapshot {
  std::map<EntityRef, EntityState> states;

  const EntityState& get(EntityRef ref) const {
    static const EntityState kDefault{};
    auto it = states.find(ref);
    return it == states.end() ? kDefault : it->second;
  }

  bool operator==(const DbSnapshot&) const = default;
};

}  // namespace ariel
