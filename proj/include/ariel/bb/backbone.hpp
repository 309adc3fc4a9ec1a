#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ariel/bb/store.hpp"
#include "ariel/bb/tom.hpp"
#include "ariel/bb/wire.hpp"
#include "ariel/rcode.hpp"
#include "ariel/topology.hpp"
#include "ariel/vm/interpreter.hpp"

namespace ariel {

struct BbParams {
  double hb_period = 40.0;           // BB peer heartbeat cadence
  double hb_timeout = 120.0;         // silence before a peer is presumed dead
  double anti_entropy_period = 200.0;
  AlphaParams alpha;
};

// One BB replica. Holds the replicated DB, watches peer liveness, runs
// anti-entropy, and — when it is the executor — evaluates the recovery
// program after each stored notification and dispatches the commands.
class Backbone {
 public:
  struct Hooks {
    // send a datagram from this node (src_task is never set for BB traffic)
    std::function<void(std::uint32_t dst_node, DatagramBody body,
                       std::optional<std::uint32_t> dst_task)>
        send;
    std::function<void(const char* kind, const std::string& detail)> trace;
    std::function<Seq()> next_seq;  // persistent per-node counter
    // physical command effects
    std::function<void(const RecoveryCommand&)> apply_local_task;
    std::function<void(const RecoveryCommand&)> node_control;
  };

  struct TimerIds {
    std::int64_t hb = 0;
    std::int64_t liveness = 0;
    std::int64_t anti_entropy = 0;
  };

  Backbone(std::uint32_t node, const Topology& topo, BbParams params,
           const RCodeProgram& program, TimeoutManager& tom, TimerIds ids,
           Hooks hooks)
      : node_(node),
        topo_(&topo),
        params_(params),
        program_(&program),
        tom_(&tom),
        ids_(ids),
        hooks_(std::move(hooks)) {}

  void boot() {
    double now = tom_->local_now();
    last_heard_.clear();
    believed_dead_.clear();
    for (std::uint32_t p = 0; p < topo_->node_count; ++p)
      if (p != node_) last_heard_[p] = now;
    tom_->schedule(ids_.hb, now + params_.hb_period, 0, true,
                   params_.hb_period);
    tom_->schedule(ids_.liveness, now + params_.hb_period, 0, true,
                   params_.hb_period);
    tom_->schedule(ids_.anti_entropy, now + params_.anti_entropy_period, 0,
                   true, params_.anti_entropy_period);
    current_executor_ = executor();
    hooks_.trace("EXEC", "executor=" + std::to_string(current_executor_));
  }

  const Db& db() const { return db_; }
  std::uint32_t node() const { return node_; }

  std::uint32_t executor() const {
    std::uint32_t best = node_;
    for (std::uint32_t p = 0; p < topo_->node_count; ++p)
      if (p != node_ && !believed_dead_.count(p) && p < best) best = p;
    return best;
  }

  bool is_executor() const { return executor() == node_; }

  // --- detection-tool entry point -----------------------------------

  void record_local(EntityRef entity, std::uint32_t detector,
                    ErrorClass cls) {
    ErrorNotification n{hooks_.next_seq(), detector, entity, cls,
                        tom_->local_now()};
    DbRecord rec{++lamport_, n};
    db_.insert(rec);
    hooks_.trace("NOTIFY", "seq=" + to_string(n.seq) + " " +
                               to_string(cls) + " " + to_string(entity) +
                               " det=" + std::to_string(detector));
    broadcast(NotifyMsg{rec});
    if (is_executor()) run_rint(n.seq);
  }

  // --- timer ticks ----------------------------------------------------

  void on_hb_tick() { broadcast(BbHeartbeat{node_}); }

  void on_liveness_tick() {
    double now = tom_->local_now();
    std::vector<std::uint32_t> newly_dead;
    for (auto& [peer, heard] : last_heard_) {
      bool presumed_dead = (now - heard) > params_.hb_timeout;
      if (presumed_dead && !believed_dead_.count(peer)) {
        believed_dead_.insert(peer);
        newly_dead.push_back(peer);
        hooks_.trace("PEER_DEAD", "peer=" + std::to_string(peer));
      }
    }
    if (newly_dead.empty()) return;
    // settle the executor role first (the takeover sweep clears any
    // backlog), then record one CRASH per observed death
    refresh_executor();
    for (std::uint32_t peer : newly_dead) maybe_record_crash(peer);
  }

  void on_anti_entropy_tick() {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(db_.state_hash()));
    hooks_.trace("DB_DIGEST",
                 "n=" + std::to_string(db_.size()) + " hash=" + hash);
    broadcast(DigestMsg{node_, db_.digest()});
  }

  // --- datagram entry point (BB-addressed bodies only) ----------------

  void on_datagram(const DatagramBody& body) {
    if (const auto* hb = std::get_if<BbHeartbeat>(&body)) {
      on_peer_heartbeat(hb->from);
    } else if (const auto* nm = std::get_if<NotifyMsg>(&body)) {
      store_remote(nm->rec, /*run_now=*/true);
    } else if (const auto* dg = std::get_if<DigestMsg>(&body)) {
      auto missing = db_.missing_for(dg->digest);
      if (!missing.empty())
        hooks_.send(dg->from, DeltasMsg{node_, std::move(missing)},
                    std::nullopt);
    } else if (const auto* dl = std::get_if<DeltasMsg>(&body)) {
      on_deltas(*dl);
    } else if (const auto* cm = std::get_if<CmdMsg>(&body)) {
      hooks_.trace("CMD_APPLY", to_string(cm->cmd) +
                                    " trigger=" + to_string(cm->trigger));
      hooks_.apply_local_task(cm->cmd);
    }
  }

 private:
  std::uint32_t node_;
  const Topology* topo_;
  BbParams params_;
  const RCodeProgram* program_;
  TimeoutManager* tom_;
  TimerIds ids_;
  Hooks hooks_;

  Db db_;
  std::uint64_t lamport_ = 0;
  std::map<std::uint32_t, double> last_heard_;
  std::set<std::uint32_t> believed_dead_;
  std::uint32_t current_executor_ = 0;
  std::set<Seq> handled_;  // triggers this replica ran RINT for (or saw
                           // commands for) — not replicated, rebuilt on merge

  void broadcast(DatagramBody body) {
    for (std::uint32_t p = 0; p < topo_->node_count; ++p)
      if (p != node_) hooks_.send(p, body, std::nullopt);
  }

  void refresh_executor() {
    std::uint32_t e = executor();
    if (e == current_executor_) return;
    bool took_over = (e == node_ && current_executor_ != node_);
    current_executor_ = e;
    hooks_.trace("EXEC", "executor=" + std::to_string(e));
    if (took_over) takeover_scan();
  }

  // A notification recorded while some unreachable node was believed
  // executor would otherwise never be acted on. On taking over, evaluate
  // every stored notification nobody has handled yet.
  void takeover_scan() {
    std::vector<std::pair<std::uint64_t, Seq>> pending;
    for (Seq s : db_.digest()) {
      const DbRecord* rec = db_.find(s);
      if (rec && rec->is_notification() && !handled_.count(s) &&
          !db_.has_any_command_for(s))
        pending.emplace_back(rec->lamport, s);
    }
    std::sort(pending.begin(), pending.end());
    for (const auto& [lamport, s] : pending) run_rint(s);
  }

  void on_peer_heartbeat(std::uint32_t from) {
    auto it = last_heard_.find(from);
    if (it == last_heard_.end()) return;
    it->second = tom_->local_now();
    if (believed_dead_.erase(from)) {
      hooks_.trace("PEER_ALIVE", "peer=" + std::to_string(from));
      refresh_executor();
    }
  }

  // The executor records one CRASH per observed death, unless the DB
  // already shows the node down (prevents a notification storm when
  // executorship moves around).
  void maybe_record_crash(std::uint32_t peer) {
    if (!is_executor()) return;
    DbSnapshot snap =
        db_.snapshot(*topo_, params_.alpha, tom_->local_now());
    if (!snap.get(node_ref(peer)).active) return;
    record_local(node_ref(peer), node_, ErrorClass::Crash);
  }

  void store_remote(const DbRecord& rec, bool run_now) {
    if (!db_.insert(rec)) {
      hooks_.trace("NOTIFY_DUP", "seq=" + to_string(rec.seq()));
      return;
    }
    lamport_ = std::max(lamport_, rec.lamport);
    if (const auto* n = std::get_if<ErrorNotification>(&rec.body)) {
      hooks_.trace("NOTIFY", "seq=" + to_string(n->seq) + " " +
                                 to_string(n->error_class) + " " +
                                 to_string(n->entity) +
                                 " det=" + std::to_string(n->detector));
      if (run_now && is_executor() && !handled_.count(n->seq) &&
          !db_.has_any_command_for(n->seq))
        run_rint(n->seq);
    } else {
      const auto& c = std::get<CommandRec>(rec.body);
      handled_.insert(c.trigger);  // some executor already acted on it
      hooks_.trace("CMD_MERGE", to_string(c.cmd) +
                                    " trigger=" + to_string(c.trigger));
    }
  }

  void on_deltas(const DeltasMsg& msg) {
    // store everything first so duplicate-command checks see the batch,
    // then run RINT per fresh unhandled notification in arrival order
    std::vector<Seq> fresh;
    std::size_t new_count = 0;
    for (const DbRecord& rec : msg.recs) {
      bool is_new = !db_.contains(rec.seq());
      store_remote(rec, /*run_now=*/false);
      if (is_new) ++new_count;
      if (is_new && rec.is_notification()) fresh.push_back(rec.seq());
    }
    hooks_.trace("DB_MERGE", "from=" + std::to_string(msg.from) + " new=" +
                                 std::to_string(new_count) + "/" +
                                 std::to_string(msg.recs.size()));
    if (is_executor())
      for (Seq s : fresh)
        if (!handled_.count(s) && !db_.has_any_command_for(s)) run_rint(s);
  }

  void run_rint(Seq trigger) {
    handled_.insert(trigger);
    DbSnapshot snap =
        db_.snapshot(*topo_, params_.alpha, tom_->local_now());
    auto cmds = run_rcode(*program_, snap);
    hooks_.trace("RINT_RUN", "trigger=" + to_string(trigger) +
                                 " cmds=" + std::to_string(cmds.size()));
    for (RecoveryCommand cmd : cmds) {
      cmd.origin_node = node_;
      dispatch(cmd, trigger);
    }
  }

  void dispatch(const RecoveryCommand& cmd, Seq trigger) {
    // group state verbs expand to one command per member
    if (cmd.target.kind == EntityKind::Group &&
        cmd.verb != CommandVerb::Send && cmd.verb != CommandVerb::Warn) {
      const auto* members = topo_->members_of(cmd.target.id);
      if (!members) {
        hooks_.trace("CMD_DROP", "unknown " + to_string(cmd.target));
        return;
      }
      for (std::uint32_t m : *members) {
        RecoveryCommand sub = cmd;
        sub.target = task_ref(m);
        dispatch(sub, trigger);
      }
      return;
    }

    if (!topo_->knows(cmd.target)) {
      hooks_.trace("CMD_DROP", "unknown " + to_string(cmd.target));
      return;
    }
    if (db_.has_command(cmd, trigger)) {
      hooks_.trace("CMD_SKIP_DUP",
                   to_string(cmd) + " trigger=" + to_string(trigger));
      return;
    }

    CommandRec rec{hooks_.next_seq(), cmd, trigger, tom_->local_now()};
    db_.insert(DbRecord{++lamport_, rec});
    hooks_.trace("CMD", to_string(cmd) + " trigger=" + to_string(trigger));
    broadcast(NotifyMsg{DbRecord{lamport_, rec}});

    switch (cmd.target.kind) {
      case EntityKind::Task: {
        std::uint32_t home = *topo_->home_of(cmd.target.id);
        if (cmd.verb == CommandVerb::Send || cmd.verb == CommandVerb::Warn) {
          hooks_.send(home,
                      AppMsg{cmd.target.id, cmd.payload,
                             cmd.verb == CommandVerb::Warn},
                      cmd.target.id);
        } else if (home == node_) {
          hooks_.trace("CMD_APPLY",
                       to_string(cmd) + " trigger=" + to_string(trigger));
          hooks_.apply_local_task(cmd);
        } else {
          hooks_.send(home, CmdMsg{cmd, trigger}, std::nullopt);
        }
        break;
      }
      case EntityKind::Node:
        hooks_.node_control(cmd);
        break;
      case EntityKind::Group: {
        // SEND/WARN fan out to every member
        for (std::uint32_t m : *topo_->members_of(cmd.target.id)) {
          std::uint32_t home = *topo_->home_of(m);
          hooks_.send(home,
                      AppMsg{m, cmd.payload, cmd.verb == CommandVerb::Warn},
                      m);
        }
        break;
      }
    }
  }
};

}  // namespace ariel
