#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ariel/bb/store.hpp"
#include "ariel/entity.hpp"

namespace ariel {

// In-simulation datagram bodies. Byte layout is irrelevant (single
// process); kinds and fields are what the trace reports.

struct BbHeartbeat {
  std::uint32_t from = 0;
};

// Record replication push: sent on first store, and inside DELTAS.
struct NotifyMsg {
  DbRecord rec;
};

struct DigestMsg {
  std::uint32_t from = 0;
  std::set<Seq> digest;
};

struct DeltasMsg {
  std::uint32_t from = 0;
  std::vector<DbRecord> recs;
};

// Task-targeted command effect, sent to the target's home node.
struct CmdMsg {
  RecoveryCommand cmd;
  Seq trigger;
};

// Watchdog heartbeat from the watched task.
struct HbMsg {
  std::uint32_t wid = 0;
  std::uint32_t from_task = 0;
};

// Watchdog alarm to the configured warn target.
struct AlarmMsg {
  std::uint32_t wid = 0;
  std::uint32_t watched_task = 0;
  std::uint32_t to_task = 0;
};

// Exception report from a task to its local BB.
struct ExcMsg {
  std::uint32_t task = 0;
  std::uint32_t code = 0;
};

struct BallotMsg {
  std::uint32_t group = 0;
  std::uint64_t round = 0;
  std::int64_t value = 0;
  std::uint32_t member = 0;
};

// SEND/WARN payload delivered to an application task.
struct AppMsg {
  std::uint32_t to_task = 0;
  std::uint32_t payload = 0;
  bool warn = false;
};

using DatagramBody =
    std::variant<BbHeartbeat, NotifyMsg, DigestMsg, DeltasMsg, CmdMsg, HbMsg,
                 AlarmMsg, ExcMsg, BallotMsg, AppMsg>;

struct Datagram {
  std::uint32_t src_node = 0;
  std::uint32_t dst_node = 0;
  std::optional<std::uint32_t> src_task;  // for isolation filtering
  std::optional<std::uint32_t> dst_task;
  DatagramBody body;
};

inline std::string describe(const DatagramBody& body) {
  struct V {
    std::string operator()(const BbHeartbeat& m) const {
      return "BB_HEARTBEAT from=" + std::to_string(m.from);
    }
    std::string operator()(const NotifyMsg& m) const {
      std::string s = "NOTIFY seq=" + to_string(m.rec.seq());
      if (const auto* n = std::get_if<ErrorNotification>(&m.rec.body))
        s += std::string(" ") + to_string(n->error_class) + " " +
             to_string(n->entity);
      else
        s += " " + to_string(std::get<CommandRec>(m.rec.body).cmd);
      return s;
    }
    std::string operator()(const DigestMsg& m) const {
      return "DIGEST from=" + std::to_string(m.from) +
             " n=" + std::to_string(m.digest.size());
    }
    std::string operator()(const DeltasMsg& m) const {
      return "DELTAS from=" + std::to_string(m.from) +
             " n=" + std::to_string(m.recs.size());
    }
    std::string operator()(const CmdMsg& m) const {
      return "CMD " + to_string(m.cmd) + " trigger=" + to_string(m.trigger);
    }
    std::string operator()(const HbMsg& m) const {
      return "HB wid=" + std::to_string(m.wid) + " from=T" +
             std::to_string(m.from_task);
    }
    std::string operator()(const AlarmMsg& m) const {
      return "ALARM wid=" + std::to_string(m.wid) + " watched=T" +
             std::to_string(m.watched_task) + " to=T" +
             std::to_string(m.to_task);
    }
    std::string operator()(const ExcMsg& m) const {
      return "EXC T" + std::to_string(m.task) +
             " code=" + std::to_string(m.code);
    }
    std::string operator()(const BallotMsg& m) const {
      return "BALLOT g=" + std::to_string(m.group) + " r=" +
             std::to_string(m.round) + " v=" + std::to_string(m.value) +
             " from=T" + std::to_string(m.member);
    }
    std::string operator()(const AppMsg& m) const {
      return std::string(m.warn ? "WARN" : "SEND") + " to=T" +
             std::to_string(m.to_task) +
             " payload=" + std::to_string(m.payload);
    }
  };
  return std::visit(V{}, body);
}

}  // namespace ariel
