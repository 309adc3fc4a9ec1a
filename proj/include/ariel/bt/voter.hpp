#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "ariel/entity.hpp"

namespace ariel {

// One voting round of a replicated group. Members that submitted no
// ballot simply have no entry.
struct VoteRound {
  std::uint32_t group = 0;
  std::uint64_t round = 0;
  std::map<std::uint32_t, std::int64_t> ballots;  // member task -> value
};

struct VoteOutcome {
  std::optional<std::int64_t> winner;
  std::set<std::uint32_t> minority;  // differing or silent members

  bool operator==(const VoteOutcome&) const = default;
};

// Majority adjudication: the winner is the value held by a strict
// majority of the submitted ballots. Minority members are those whose
// ballot differs from the winner or who submitted none; without a strict
// majority every member is reported.
inline VoteOutcome vote(const VoteRound& round,
                        const std::vector<std::uint32_t>& members) {
  std::map<std::int64_t, std::size_t> counts;
  for (const auto& [member, value] : round.ballots) ++counts[value];
  std::size_t submitted = round.ballots.size();

  VoteOutcome out;
  for (const auto& [value, count] : counts) {
    if (2 * count > submitted) {
      out.winner = value;
      break;
    }
  }
  for (std::uint32_t m : members) {
    auto it = round.ballots.find(m);
    bool agrees = out.winner && it != round.ballots.end() &&
                  it->second == *out.winner;
    if (!agrees) out.minority.insert(m);
  }
  return out;
}

}  // namespace ariel
