#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "ariel/ast.hpp"
#include "ariel/bb/tom.hpp"

namespace ariel {

// Watchdog timer, co-located with the task it watches. Disabled until the
// first heartbeat; each heartbeat renews the deadline; a missed deadline
// emits the alarm plus a WD_TIMEOUT notification (alarm first) and
// disables the watchdog until the next heartbeat.
class Watchdog {
 public:
  struct Hooks {
    std::function<void()> send_alarm;       // ALARM datagram to warn target
    std::function<void()> notify_timeout;   // WD_TIMEOUT via local BB
    std::function<void(const char* kind, const std::string& detail)> trace;
  };

  Watchdog(WatchdogConfig cfg, TimeoutManager& tom, std::int64_t tom_id,
           Hooks hooks)
      : cfg_(cfg), tom_(tom), tom_id_(tom_id), hooks_(std::move(hooks)) {}

  const WatchdogConfig& config() const { return cfg_; }
  bool enabled() const { return enabled_; }

  void on_heartbeat(std::uint32_t from_task) {
    if (from_task != cfg_.watched.id) {
      hooks_.trace("WD_IGNORED",
                   "wid=" + std::to_string(cfg_.wid) + " stray-heartbeat from=T" +
                       std::to_string(from_task));
      return;
    }
    double deadline = tom_.local_now() + cfg_.period_ms;
    if (!enabled_) {
      enabled_ = true;
      tom_.schedule(tom_id_, deadline, 0);
      hooks_.trace("WD_ENABLE", "wid=" + std::to_string(cfg_.wid) +
                                    " watched=T" +
                                    std::to_string(cfg_.watched.id));
    } else {
      tom_.renew(tom_id_, deadline);
    }
  }

  void on_timeout() {
    enabled_ = false;  // single-shot per enable; TOM entry already popped
    hooks_.trace("WD_FIRE", "wid=" + std::to_string(cfg_.wid) + " watched=T" +
                                std::to_string(cfg_.watched.id));
    hooks_.send_alarm();
    hooks_.notify_timeout();
  }

  // Node reboot: back to the pre-first-heartbeat state.
  void reset() {
    if (enabled_ && tom_.armed(tom_id_)) tom_.cancel(tom_id_);
    enabled_ = false;
  }

 private:
  WatchdogConfig cfg_;
  TimeoutManager& tom_;
  std::int64_t tom_id_;
  Hooks hooks_;
  bool enabled_ = false;
};

}  // namespace ariel
