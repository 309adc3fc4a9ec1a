#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "ariel/entity.hpp"

namespace ariel {

// Static placement of tasks on nodes plus the group membership map.
// Fixed at scenario load; recovery never migrates tasks.
struct Topology {
  std::uint32_t node_count = 0;
  std::map<std::uint32_t, std::uint32_t> task_home;           // task -> node
  std::map<std::uint32_t, std::vector<std::uint32_t>> groups; // group -> tasks
  std::set<std::uint32_t> spares;  // tasks that start out inactive

  bool has_task(std::uint32_t task) const { return task_home.count(task); }

  std::optional<std::uint32_t> home_of(std::uint32_t task) const {
    auto it = task_home.find(task);
    if (it == task_home.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<std::uint32_t>* members_of(std::uint32_t group) const {
    auto it = groups.find(group);
    return it == groups.end() ? nullptr : &it->second;
  }

  std::vector<std::uint32_t> tasks_on(std::uint32_t node) const {
    std::vector<std::uint32_t> out;
    for (const auto& [task, home] : task_home)
      if (home == node) out.push_back(task);
    return out;
  }

  bool knows(EntityRef e) const {
    switch (e.kind) {
      case EntityKind::Node: return e.id < node_count;
      case EntityKind::Task: return has_task(e.id);
      case EntityKind::Group: return groups.count(e.id) != 0;
    }
    return false;
  }
};

}  // namespace ariel
