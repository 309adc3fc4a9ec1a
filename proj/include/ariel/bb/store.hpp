#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ariel/bb/alpha.hpp"
#include "ariel/bb/notification.hpp"
#include "ariel/topology.hpp"
#include "ariel/vm/command.hpp"
#include "ariel/vm/snapshot.hpp"

namespace ariel {

struct AlphaParams {
  double K = 0.9;
  double T = 3.0;
  double period_ms = 1500.0;  // no-error judgment period
};

// A recovery command that was dispatched, kept in the DB so replicas
// converge on entity states and re-elected executors can detect
// already-handled work.
struct CommandRec {
  Seq seq;
  RecoveryCommand cmd;
  Seq trigger;  // the notification whose RINT run emitted this
  double local_time = 0.0;

  bool operator==(const CommandRec&) const = default;
};

// Replicated DB record. The lamport stamp makes the fold causal: a
// command always sorts after the notification that triggered it, even
// across drifting clocks.
struct DbRecord {
  std::uint64_t lamport = 0;
  std::variant<ErrorNotification, CommandRec> body;

  Seq seq() const {
    if (const auto* n = std::get_if<ErrorNotification>(&body)) return n->seq;
    return std::get<CommandRec>(body).seq;
  }
  double local_time() const {
    if (const auto* n = std::get_if<ErrorNotification>(&body))
      return n->local_time;
    return std::get<CommandRec>(body).local_time;
  }
  bool is_notification() const {
    return std::holds_alternative<ErrorNotification>(body);
  }

  bool operator==(const DbRecord&) const = default;
};

// The error-notification database of one BB replica: an append-only set
// of records keyed by seq. Entity states are never stored — they are
// folded from the record set on demand, so any two replicas holding the
// same records agree on every state.
class Db {
 public:
  bool contains(Seq s) const { return recs_.count(s) != 0; }

  // Returns false (and changes nothing) for duplicates.
  bool insert(DbRecord rec) {
    return recs_.emplace(rec.seq(), std::move(rec)).second;
  }

  std::size_t size() const { return recs_.size(); }

  std::set<Seq> digest() const {
    std::set<Seq> out;
    for (const auto& [seq, rec] : recs_) out.insert(seq);
    return out;
  }

  std::vector<DbRecord> missing_for(const std::set<Seq>& peer) const {
    std::vector<DbRecord> out;
    for (const auto& [seq, rec] : recs_)
      if (!peer.count(seq)) out.push_back(rec);
    return out;
  }

  const DbRecord* find(Seq s) const {
    auto it = recs_.find(s);
    return it == recs_.end() ? nullptr : &it->second;
  }

  // True if some stored command matches (verb, target, payload, trigger) —
  // the duplicate-dispatch guard.
  bool has_command(const RecoveryCommand& cmd, Seq trigger) const {
    for (const auto& [seq, rec] : recs_) {
      if (const auto* c = std::get_if<CommandRec>(&rec.body)) {
        if (c->trigger == trigger && c->cmd.verb == cmd.verb &&
            c->cmd.target == cmd.target && c->cmd.payload == cmd.payload)
          return true;
      }
    }
    return false;
  }

  // True if any stored command names `trigger` — i.e. some executor
  // already acted on that notification.
  bool has_any_command_for(Seq trigger) const {
    for (const auto& [seq, rec] : recs_)
      if (const auto* c = std::get_if<CommandRec>(&rec.body))
        if (c->trigger == trigger) return true;
    return false;
  }

  // Content hash over the record set (order-independent by construction:
  // map iteration is seq-sorted). Used for the anti-entropy trace line.
  std::uint64_t state_hash() const {
    std::uint64_t h = 0xCBF29CE484222325ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 0x100000001B3ull;
    };
    for (const auto& [seq, rec] : recs_) {
      mix(seq.origin);
      mix(seq.counter);
      mix(rec.lamport);
      if (const auto* n = std::get_if<ErrorNotification>(&rec.body)) {
        mix(1);
        mix(n->detector);
        mix(static_cast<std::uint64_t>(n->entity.kind));
        mix(n->entity.id);
        mix(static_cast<std::uint64_t>(n->error_class));
      } else {
        const auto& c = std::get<CommandRec>(rec.body);
        mix(2);
        mix(static_cast<std::uint64_t>(c.cmd.verb));
        mix(static_cast<std::uint64_t>(c.cmd.target.kind));
        mix(c.cmd.target.id);
        mix(c.cmd.payload);
        mix(c.trigger.origin);
        mix(c.trigger.counter);
      }
    }
    return h;
  }

  // Canonical fold: records sorted by (lamport, seq) are replayed over the
  // initial topology states; the transient flag is derived last from the
  // α scores at local_now.
  DbSnapshot snapshot(const Topology& topo, const AlphaParams& alpha,
                      double local_now) const {
    DbSnapshot snap = initial_states(topo);
    std::map<EntityRef, AlphaState> alphas;

    std::vector<const DbRecord*> order;
    order.reserve(recs_.size());
    for (const auto& [seq, rec] : recs_) order.push_back(&rec);
    std::sort(order.begin(), order.end(),
              [](const DbRecord* a, const DbRecord* b) {
                if (a->lamport != b->lamport) return a->lamport < b->lamport;
                return a->seq() < b->seq();
              });

    for (const DbRecord* rec : order) {
      if (const auto* n = std::get_if<ErrorNotification>(&rec->body)) {
        EntityState& st = snap.states[n->entity];
        st.faulty = true;
        st.restarted = false;
        auto [it, fresh] = alphas.try_emplace(n->entity);
        if (fresh) it->second.count = AlphaCount{0.0, alpha.K, alpha.T};
        it->second.error_at(n->local_time, alpha.period_ms);
        if (n->error_class == ErrorClass::Crash) {
          st.active = false;
          if (n->entity.kind == EntityKind::Node)
            for (std::uint32_t t : topo.tasks_on(n->entity.id))
              snap.states[task_ref(t)].active = false;
        }
      } else {
        apply_command_effect(std::get<CommandRec>(rec->body).cmd, snap, topo);
      }
    }

    for (auto& [entity, st] : snap.states) {
      if (!st.faulty) continue;
      auto it = alphas.find(entity);
      double score =
          it == alphas.end()
              ? 0.0
              : it->second.effective_score(local_now, alpha.period_ms);
      st.transient = score < alpha.T;
    }
    return snap;
  }

  // The α score an entity would show at local_now (trace/diagnostics).
  double alpha_score(EntityRef entity, const AlphaParams& alpha,
                     double local_now) const {
    AlphaState state;
    state.count = AlphaCount{0.0, alpha.K, alpha.T};
    std::vector<const DbRecord*> order;
    for (const auto& [seq, rec] : recs_) order.push_back(&rec);
    std::sort(order.begin(), order.end(),
              [](const DbRecord* a, const DbRecord* b) {
                if (a->lamport != b->lamport) return a->lamport < b->lamport;
                return a->seq() < b->seq();
              });
    for (const DbRecord* rec : order)
      if (const auto* n = std::get_if<ErrorNotification>(&rec->body))
        if (n->entity == entity) state.error_at(n->local_time, alpha.period_ms);
    return state.effective_score(local_now, alpha.period_ms);
  }

  static DbSnapshot initial_states(const Topology& topo) {
    DbSnapshot snap;
    for (std::uint32_t n = 0; n < topo.node_count; ++n)
      snap.states[node_ref(n)].active = true;
    for (const auto& [task, home] : topo.task_home)
      snap.states[task_ref(task)].active = !topo.spares.count(task);
    for (const auto& [group, members] : topo.groups)
      snap.states[group_ref(group)].active = true;
    return snap;
  }

  static void apply_command_effect(const RecoveryCommand& cmd,
                                   DbSnapshot& snap, const Topology& topo) {
    EntityState& st = snap.states[cmd.target];
    auto restart_effect = [](EntityState& s) {
      s.active = true;
      s.faulty = false;
      s.isolated = false;
      s.restarted = true;
    };
    switch (cmd.verb) {
      case CommandVerb::Restart:
        restart_effect(st);
        if (cmd.target.kind == EntityKind::Node)
          for (std::uint32_t t : topo.tasks_on(cmd.target.id))
            restart_effect(snap.states[task_ref(t)]);
        break;
      case CommandVerb::Terminate:
        st.active = false;
        if (cmd.target.kind == EntityKind::Node)
          for (std::uint32_t t : topo.tasks_on(cmd.target.id))
            snap.states[task_ref(t)].active = false;
        break;
      case CommandVerb::Isolate:
        st.isolated = true;
        st.active = false;
        break;
      case CommandVerb::Start:
        st.active = true;
        st.faulty = false;
        st.isolated = false;
        break;
      case CommandVerb::Send:
      case CommandVerb::Warn:
        break;
    }
  }

 private:
  std::map<Seq, DbRecord> recs_;
};

}  // namespace ariel
