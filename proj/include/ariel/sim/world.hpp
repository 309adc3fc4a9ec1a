#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ariel/bb/backbone.hpp"
#include "ariel/bb/tom.hpp"
#include "ariel/bb/wire.hpp"
#include "ariel/bt/voter.hpp"
#include "ariel/bt/watchdog.hpp"
#include "ariel/compiler.hpp"
#include "ariel/errors.hpp"
#include "ariel/sim/clock.hpp"
#include "ariel/sim/fault.hpp"
#include "ariel/sim/kernel.hpp"
#include "ariel/sim/net.hpp"
#include "ariel/sim/scenario.hpp"
#include "ariel/sim/trace.hpp"

namespace ariel {

// The whole simulated system: one kernel, per-node clocks/TOM/BB replicas,
// the recovery program, watchdogs and voters from the script's blocks, a
// lossy network, and the scenario's fault schedule. Deterministic for a
// fixed (scenario, seed).
class World {
 public:
  World(Scenario scn, CompiledUnit unit, std::uint64_t seed)
      : scn_(std::move(scn)),
        unit_(std::move(unit)),
        clock_(scn_.topo.node_count, scn_.rho, seed),
        net_(seed, scn_.net) {
    bb_params_.hb_period = scn_.derived_bb_hb_period();
    bb_params_.hb_timeout = scn_.derived_bb_hb_timeout();
    bb_params_.anti_entropy_period = scn_.derived_anti_entropy_period();
    bb_params_.alpha.K = scn_.alpha_k.value_or(0.9);
    bb_params_.alpha.T = scn_.alpha_t.value_or(3.0);
    bb_params_.alpha.period_ms =
        scn_.alpha_period.value_or(default_alpha_period());

    std::uint32_t n = scn_.topo.node_count;
    alive_.assign(n, false);
    node_isolated_.assign(n, false);
    counters_.assign(n, 0);
    next_tom_id_.assign(n, 10);
    routes_.resize(n);
    toms_.resize(n);
    backbones_.resize(n);
    for (std::uint32_t i = 0; i < n; ++i)
      toms_[i] = std::make_unique<TimeoutManager>(
          kernel_, clock_, i,
          [this, i](std::int64_t id, std::uint64_t) { route_timer(i, id); });

    for (const auto& [tid, home] : scn_.topo.task_home) {
      TaskModel t;
      t.id = tid;
      t.home = home;
      t.alive = !scn_.topo.spares.count(tid);
      tasks_[tid] = t;
    }

    build_bt_tools();

    for (std::uint32_t i = 0; i < n; ++i)
      kernel_.schedule(0.0, i, [this, i] { boot_node(i, false); });
    for (const FaultSpec& f : scn_.faults) {
      std::uint32_t at_node = f.kind == FaultKind::CrashNode
                                  ? f.target
                                  : tasks_.at(f.target).home;
      kernel_.schedule(f.at, at_node, [this, f] { inject(f); });
    }
  }

  // Runs the scenario to `until` (global ms) and returns the trace text.
  const std::string& run(double until) {
    kernel_.run_until(until);
    return trace_.text();
  }

  const TraceWriter& trace() const { return trace_; }
  EventKernel& kernel() { return kernel_; }
  const Backbone& backbone(std::uint32_t node) const {
    return *backbones_[node];
  }
  const AlphaParams& alpha_params() const { return bb_params_.alpha; }

 private:
  struct TaskModel {
    std::uint32_t id = 0;
    std::uint32_t home = 0;
    bool alive = true;
    bool hung = false;
    bool isolated = false;
    double hang_until = 0.0;
    std::optional<std::uint32_t> corrupt_next;

    bool running() const { return alive && !hung; }
  };

  struct WdInstance {
    std::unique_ptr<Watchdog> wd;
    std::uint32_t node = 0;
    std::int64_t fire_id = 0;
    std::int64_t beat_id = 0;  // heartbeat emitter on the watched task
  };

  struct VoterHost {
    std::uint32_t group = 0;
    std::uint32_t node = 0;
    std::vector<std::uint32_t> members;
    std::int64_t eval_id = 0;
    std::map<std::uint32_t, std::int64_t> beat_ids;  // member -> emitter id
    std::map<std::uint64_t, VoteRound> rounds;
  };

  static constexpr double kRoundEps = 1e-3;

  Scenario scn_;
  CompiledUnit unit_;
  EventKernel kernel_;
  ClockModel clock_;
  NetModel net_;
  TraceWriter trace_;
  BbParams bb_params_;

  std::vector<bool> alive_;
  std::vector<bool> node_isolated_;
  std::vector<std::uint64_t> counters_;  // per-node seq, survives reboots
  std::vector<std::int64_t> next_tom_id_;
  std::vector<std::map<std::int64_t, std::function<void()>>> routes_;
  std::vector<std::unique_ptr<TimeoutManager>> toms_;
  std::vector<std::unique_ptr<Backbone>> backbones_;
  std::map<std::uint32_t, TaskModel> tasks_;
  std::vector<WdInstance> watchdogs_;
  std::map<std::uint32_t, std::size_t> wd_by_id_;
  std::map<std::uint32_t, VoterHost> voters_;

  double default_alpha_period() const {
    double shortest = 0.0;
    for (const auto& cfg : unit_.configs)
      if (const auto* wd = std::get_if<WatchdogConfig>(&cfg))
        if (shortest == 0.0 || wd->period_ms < shortest)
          shortest = wd->period_ms;
    return shortest > 0.0 ? 10.0 * shortest : 1500.0;
  }

  std::int64_t alloc_id(std::uint32_t node) { return next_tom_id_[node]++; }

  void route_timer(std::uint32_t node, std::int64_t id) {
    auto it = routes_[node].find(id);
    if (it != routes_[node].end()) it->second();
  }

  // --- construction of script-configured tools -----------------------

  void build_bt_tools() {
    for (const auto& cfg : unit_.configs) {
      if (const auto* wc = std::get_if<WatchdogConfig>(&cfg)) {
        if (!scn_.topo.has_task(wc->watched.id))
          throw ScenarioError(0, "script watchdog " + std::to_string(wc->wid) +
                                     " watches unknown task " +
                                     std::to_string(wc->watched.id));
        if (!scn_.topo.has_task(wc->warn_target.id))
          throw ScenarioError(0, "script watchdog " + std::to_string(wc->wid) +
                                     " warns unknown task " +
                                     std::to_string(wc->warn_target.id));
        if (wd_by_id_.count(wc->wid))
          throw ScenarioError(0, "duplicate watchdog id " +
                                     std::to_string(wc->wid));
        add_watchdog(*wc);
      } else {
        const auto& rg = std::get<ReplicatedGroupConfig>(cfg);
        for (const EntityRef& m : rg.members)
          if (!scn_.topo.has_task(m.id))
            throw ScenarioError(0, "replicated group " +
                                       std::to_string(rg.group.id) +
                                       " lists unknown task " +
                                       std::to_string(m.id));
        if (voters_.count(rg.group.id))
          throw ScenarioError(0, "duplicate replicated group " +
                                     std::to_string(rg.group.id));
        add_voter(rg);
      }
    }
  }

  void add_watchdog(const WatchdogConfig& wc) {
    // co-located with the watched task, so a partition cannot separate them
    std::uint32_t node = *scn_.topo.home_of(wc.watched.id);
    WdInstance inst;
    inst.node = node;
    inst.fire_id = alloc_id(node);
    inst.beat_id = alloc_id(node);
    Watchdog::Hooks hooks;
    std::uint32_t wid = wc.wid;
    std::uint32_t warn = wc.warn_target.id;
    std::uint32_t watched = wc.watched.id;
    hooks.send_alarm = [this, node, wid, watched, warn] {
      send(node, std::nullopt, *scn_.topo.home_of(warn), warn,
           AlarmMsg{wid, watched, warn});
    };
    hooks.notify_timeout = [this, node, wid, watched] {
      backbones_[node]->record_local(task_ref(watched), wid,
                                     ErrorClass::WdTimeout);
    };
    hooks.trace = [this, node](const char* kind, const std::string& detail) {
      trace_.emit(kernel_.now(), node, "wd", kind, detail);
    };
    inst.wd = std::make_unique<Watchdog>(wc, *toms_[node], inst.fire_id,
                                         std::move(hooks));
    std::size_t idx = watchdogs_.size();
    routes_[node][inst.fire_id] = [this, idx] { watchdogs_[idx].wd->on_timeout(); };
    routes_[node][inst.beat_id] = [this, idx] { task_beat(idx); };
    wd_by_id_[wc.wid] = idx;
    watchdogs_.push_back(std::move(inst));
  }

  void add_voter(const ReplicatedGroupConfig& rg) {
    VoterHost host;
    host.group = rg.group.id;
    for (const EntityRef& m : rg.members) host.members.push_back(m.id);
    std::sort(host.members.begin(), host.members.end());
    host.node = *scn_.topo.home_of(host.members.front());
    host.eval_id = alloc_id(host.node);
    std::uint32_t gid = host.group;
    routes_[host.node][host.eval_id] = [this, gid] { voter_eval(gid); };
    for (std::uint32_t m : host.members) {
      std::uint32_t mnode = *scn_.topo.home_of(m);
      std::int64_t id = alloc_id(mnode);
      host.beat_ids[m] = id;
      routes_[mnode][id] = [this, gid, m] { ballot_beat(gid, m); };
    }
    voters_[host.group] = std::move(host);
  }

  // --- node lifecycle -------------------------------------------------

  void boot_node(std::uint32_t n, bool reboot) {
    alive_[n] = true;
    trace_.emit(kernel_.now(), n, "node", "NODE_BOOT",
                reboot ? "reboot" : "initial");
    Backbone::TimerIds ids{1, 2, 3};
    Backbone::Hooks hooks;
    hooks.send = [this, n](std::uint32_t dst, DatagramBody body,
                           std::optional<std::uint32_t> dst_task) {
      send(n, std::nullopt, dst, dst_task, std::move(body));
    };
    hooks.trace = [this, n](const char* kind, const std::string& detail) {
      trace_.emit(kernel_.now(), n, "bb", kind, detail);
    };
    hooks.next_seq = [this, n] { return Seq{n, counters_[n]++}; };
    hooks.apply_local_task = [this](const RecoveryCommand& cmd) {
      apply_task_command(cmd);
    };
    hooks.node_control = [this](const RecoveryCommand& cmd) {
      node_command(cmd);
    };
    backbones_[n] = std::make_unique<Backbone>(n, scn_.topo, bb_params_,
                                               unit_.rcode, *toms_[n], ids,
                                               std::move(hooks));
    routes_[n][1] = [this, n] { backbones_[n]->on_hb_tick(); };
    routes_[n][2] = [this, n] { backbones_[n]->on_liveness_tick(); };
    routes_[n][3] = [this, n] { backbones_[n]->on_anti_entropy_tick(); };
    backbones_[n]->boot();
    if (reboot) backbones_[n]->on_anti_entropy_tick();  // ask peers to refill

    for (std::size_t i = 0; i < watchdogs_.size(); ++i) {
      WdInstance& w = watchdogs_[i];
      if (w.node != n) continue;
      w.wd->reset();
      double cadence = w.wd->config().period_ms / 2.0;
      toms_[n]->schedule(w.beat_id, toms_[n]->local_now() + cadence, 0, true,
                         cadence);
    }
    for (auto& [gid, host] : voters_) {
      if (host.node == n) {
        host.rounds.clear();
        toms_[n]->schedule(host.eval_id,
                           toms_[n]->local_now() + scn_.vote_period, 0, true,
                           scn_.vote_period);
      }
      for (auto& [m, id] : host.beat_ids)
        if (*scn_.topo.home_of(m) == n)
          toms_[n]->schedule(id,
                             toms_[n]->local_now() + 0.25 * scn_.vote_period,
                             0, true, scn_.vote_period);
    }

    if (reboot)
      for (auto& [tid, t] : tasks_)
        if (t.home == n) {
          t.alive = true;
          t.hung = false;
          trace_.emit(kernel_.now(), n, "task", "TASK_RESUME",
                      "T" + std::to_string(tid) + " via=reboot");
        }
  }

  void node_down(std::uint32_t n, const char* why) {
    if (!alive_[n]) return;
    alive_[n] = false;
    toms_[n]->shutdown();
    trace_.emit(kernel_.now(), n, "node", "NODE_DOWN", why);
    for (auto& [tid, t] : tasks_)
      if (t.home == n && t.alive) {
        t.alive = false;
        trace_.emit(kernel_.now(), n, "task", "TASK_CRASH",
                    "T" + std::to_string(tid) + " host-down");
      }
  }

  // --- command effects --------------------------------------------------

  void apply_task_command(const RecoveryCommand& cmd) {
    auto it = tasks_.find(cmd.target.id);
    if (it == tasks_.end()) return;
    TaskModel& t = it->second;
    switch (cmd.verb) {
      case CommandVerb::Restart:
        t.alive = true;
        t.hung = false;
        t.isolated = false;
        trace_.emit(kernel_.now(), t.home, "task", "TASK_RESUME",
                    "T" + std::to_string(t.id) + " via=RESTART");
        break;
      case CommandVerb::Start:
        t.alive = true;
        t.hung = false;
        t.isolated = false;
        trace_.emit(kernel_.now(), t.home, "task", "TASK_RESUME",
                    "T" + std::to_string(t.id) + " via=START");
        break;
      case CommandVerb::Terminate:
        t.alive = false;
        trace_.emit(kernel_.now(), t.home, "task", "TASK_STOP",
                    "T" + std::to_string(t.id) + " via=TERMINATE");
        break;
      case CommandVerb::Isolate:
        t.isolated = true;
        trace_.emit(kernel_.now(), t.home, "task", "TASK_ISOLATED",
                    "T" + std::to_string(t.id));
        break;
      case CommandVerb::Send:
      case CommandVerb::Warn:
        break;  // payloads travel as AppMsg, never through this path
    }
  }

  // Node-targeted verbs act through the world (power/partition control
  // lives outside the node being controlled).
  void node_command(const RecoveryCommand& cmd) {
    std::uint32_t n = cmd.target.id;
    if (n >= scn_.topo.node_count) return;
    switch (cmd.verb) {
      case CommandVerb::Restart: {
        node_down(n, "via=RESTART");
        double at = kernel_.now() + scn_.reboot_delay;
        kernel_.schedule(at, n, [this, n] {
          if (!alive_[n]) boot_node(n, true);
        });
        break;
      }
      case CommandVerb::Terminate:
        node_down(n, "via=TERMINATE");
        break;
      case CommandVerb::Isolate:
        node_isolated_[n] = true;
        trace_.emit(kernel_.now(), n, "node", "NODE_ISOLATED", "");
        break;
      case CommandVerb::Start:
        node_isolated_[n] = false;
        if (!alive_[n]) boot_node(n, true);
        break;
      case CommandVerb::Send:
      case CommandVerb::Warn:
        break;
    }
  }

  // --- periodic emitters -------------------------------------------------

  void task_beat(std::size_t wd_idx) {
    WdInstance& w = watchdogs_[wd_idx];
    const WatchdogConfig& cfg = w.wd->config();
    const TaskModel& t = tasks_.at(cfg.watched.id);
    if (!t.running()) return;
    send(t.home, t.id, w.node, std::nullopt, HbMsg{cfg.wid, t.id});
  }

  void ballot_beat(std::uint32_t gid, std::uint32_t member) {
    TaskModel& t = tasks_.at(member);
    if (!t.running()) return;
    VoterHost& host = voters_.at(gid);
    double lnow = toms_[t.home]->local_now();
    auto r = static_cast<std::uint64_t>(
        std::floor((lnow + kRoundEps) / scn_.vote_period));
    std::int64_t value = static_cast<std::int64_t>(r);
    if (t.corrupt_next) {
      value = static_cast<std::int64_t>(*t.corrupt_next);
      t.corrupt_next.reset();
    }
    send(t.home, member, host.node, std::nullopt,
         BallotMsg{gid, r, value, member});
  }

  void voter_eval(std::uint32_t gid) {
    VoterHost& host = voters_.at(gid);
    double lnow = toms_[host.node]->local_now();
    auto tick = static_cast<std::int64_t>(
        std::floor((lnow + kRoundEps) / scn_.vote_period));
    if (tick < 1) return;
    std::uint64_t r = static_cast<std::uint64_t>(tick - 1);
    VoteRound round;
    round.group = gid;
    round.round = r;
    auto it = host.rounds.find(r);
    if (it != host.rounds.end()) round = it->second;
    VoteOutcome out = vote(round, host.members);

    std::string detail = "g=" + std::to_string(gid) +
                         " r=" + std::to_string(r) + " winner=";
    detail += out.winner ? std::to_string(*out.winner) : std::string("none");
    detail += " minority=";
    if (out.minority.empty()) {
      detail += "-";
    } else {
      bool first = true;
      for (std::uint32_t m : out.minority) {
        if (!first) detail += ",";
        detail += "T" + std::to_string(m);
        first = false;
      }
    }
    trace_.emit(kernel_.now(), host.node, "voter", "VOTE_ROUND", detail);
    for (std::uint32_t m : out.minority)
      backbones_[host.node]->record_local(task_ref(m), gid,
                                          ErrorClass::MinorityVote);
    host.rounds.erase(r);
    // drop stale rounds so the map cannot grow without bound
    while (!host.rounds.empty() && host.rounds.begin()->first < r)
      host.rounds.erase(host.rounds.begin());
  }

  // --- fault injection ----------------------------------------------------

  void inject(const FaultSpec& f) {
    switch (f.kind) {
      case FaultKind::CrashTask: {
        TaskModel& t = tasks_.at(f.target);
        trace_.emit(kernel_.now(), t.home, "fault", "FAULT",
                    "CRASH_TASK T" + std::to_string(f.target));
        if (t.alive) {
          t.alive = false;
          trace_.emit(kernel_.now(), t.home, "task", "TASK_CRASH",
                      "T" + std::to_string(f.target) + " injected");
        }
        break;
      }
      case FaultKind::CrashNode:
        trace_.emit(kernel_.now(), f.target, "fault", "FAULT",
                    "CRASH_NODE N" + std::to_string(f.target));
        node_down(f.target, "injected");
        break;
      case FaultKind::HangTask: {
        TaskModel& t = tasks_.at(f.target);
        trace_.emit(kernel_.now(), t.home, "fault", "FAULT",
                    "HANG_TASK T" + std::to_string(f.target) + " for=" +
                        std::to_string(f.arg));
        if (t.running()) {
          t.hung = true;
          t.hang_until = kernel_.now() + f.arg;
          trace_.emit(kernel_.now(), t.home, "task", "TASK_HANG",
                      "T" + std::to_string(f.target));
          std::uint32_t tid = f.target;
          kernel_.schedule(t.hang_until, t.home, [this, tid] {
            TaskModel& tm = tasks_.at(tid);
            if (tm.hung && kernel_.now() + 1e-9 >= tm.hang_until) {
              tm.hung = false;
              trace_.emit(kernel_.now(), tm.home, "task", "TASK_RESUME",
                          "T" + std::to_string(tid) + " hang-over");
            }
          });
        }
        break;
      }
      case FaultKind::RaiseException: {
        TaskModel& t = tasks_.at(f.target);
        trace_.emit(kernel_.now(), t.home, "fault", "FAULT",
                    "RAISE_EXCEPTION T" + std::to_string(f.target) +
                        " code=" + std::to_string(f.arg));
        // the exception reporter runs inside the task: no task, no report
        if (t.running())
          send(t.home, t.id, t.home, std::nullopt, ExcMsg{f.target, f.arg});
        break;
      }
      case FaultKind::CorruptBallot: {
        TaskModel& t = tasks_.at(f.target);
        trace_.emit(kernel_.now(), t.home, "fault", "FAULT",
                    "CORRUPT_BALLOT T" + std::to_string(f.target) + " value=" +
                        std::to_string(f.arg));
        t.corrupt_next = f.arg;
        break;
      }
    }
  }

  // --- network --------------------------------------------------------

  void send(std::uint32_t src_node, std::optional<std::uint32_t> src_task,
            std::uint32_t dst_node, std::optional<std::uint32_t> dst_task,
            DatagramBody body) {
    if (!alive_[src_node]) return;
    double now = kernel_.now();
    std::string what = describe(body) + " dst=" + std::to_string(dst_node);
    trace_.emit(now, src_node, "net", "SEND", what);
    if ((src_task && tasks_.at(*src_task).isolated) ||
        (dst_task && tasks_.count(*dst_task) &&
         tasks_.at(*dst_task).isolated) ||
        node_isolated_[src_node] || node_isolated_[dst_node]) {
      trace_.emit(now, src_node, "net", "DROP_ISOLATED", what);
      return;
    }
    if (!scn_.partitions.connected(now, src_node, dst_node)) {
      trace_.emit(now, src_node, "net", "DROP_PARTITION", what);
      return;
    }
    NetDecision d = net_.decide(src_node, dst_node);
    if (!d.deliver) {
      trace_.emit(now, src_node, "net", "DROP_OMIT", what);
      return;
    }
    Datagram dg{src_node, dst_node, src_task, dst_task, std::move(body)};
    kernel_.schedule(now + d.delay, dst_node,
                     [this, dg = std::move(dg)] { deliver(dg); });
  }

  void deliver(const Datagram& dg) {
    std::string what = describe(dg.body);
    if (!alive_[dg.dst_node]) {
      trace_.emit(kernel_.now(), dg.dst_node, "net", "DROP_DEAD", what);
      return;
    }
    trace_.emit(kernel_.now(), dg.dst_node, "net", "RECV",
                what + " src=" + std::to_string(dg.src_node));
    if (std::holds_alternative<BbHeartbeat>(dg.body) ||
        std::holds_alternative<NotifyMsg>(dg.body) ||
        std::holds_alternative<DigestMsg>(dg.body) ||
        std::holds_alternative<DeltasMsg>(dg.body) ||
        std::holds_alternative<CmdMsg>(dg.body)) {
      backbones_[dg.dst_node]->on_datagram(dg.body);
    } else if (const auto* hb = std::get_if<HbMsg>(&dg.body)) {
      auto it = wd_by_id_.find(hb->wid);
      if (it != wd_by_id_.end() &&
          watchdogs_[it->second].node == dg.dst_node)
        watchdogs_[it->second].wd->on_heartbeat(hb->from_task);
    } else if (const auto* alarm = std::get_if<AlarmMsg>(&dg.body)) {
      const TaskModel& t = tasks_.at(alarm->to_task);
      if (t.running())
        trace_.emit(kernel_.now(), dg.dst_node, "task", "APP",
                    "T" + std::to_string(alarm->to_task) + " recv ALARM wid=" +
                        std::to_string(alarm->wid));
    } else if (const auto* exc = std::get_if<ExcMsg>(&dg.body)) {
      backbones_[dg.dst_node]->record_local(task_ref(exc->task), exc->task,
                                            ErrorClass::Exception);
    } else if (const auto* ballot = std::get_if<BallotMsg>(&dg.body)) {
      auto it = voters_.find(ballot->group);
      if (it != voters_.end() && it->second.node == dg.dst_node) {
        VoterHost& host = it->second;
        bool member = std::find(host.members.begin(), host.members.end(),
                                ballot->member) != host.members.end();
        if (member) {
          VoteRound& round = host.rounds[ballot->round];
          round.group = ballot->group;
          round.round = ballot->round;
          round.ballots[ballot->member] = ballot->value;
        }
      }
    } else if (const auto* app = std::get_if<AppMsg>(&dg.body)) {
      const TaskModel& t = tasks_.at(app->to_task);
      if (t.running())
        trace_.emit(kernel_.now(), dg.dst_node, "task", "APP",
                    "T" + std::to_string(app->to_task) + " recv " +
                        (app->warn ? "WARN" : "SEND") +
                        " payload=" + std::to_string(app->payload));
    }
  }
};

}  // namespace ariel
