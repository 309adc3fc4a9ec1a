#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <utility>

#include "ariel/errors.hpp"
#include "ariel/sim/clock.hpp"
#include "ariel/sim/kernel.hpp"

namespace ariel {

// TOM, the per-node timeout service. All deadlines are in the owning
// node's local clock. Implementation detail: one pending kernel wakeup
// for the earliest deadline; expired entries fire in (deadline, id)
// order, which pins down the order of same-tick expiries.
class TimeoutManager {
 public:
  using Deliver = std::function<void(std::int64_t id, std::uint64_t tag)>;

  TimeoutManager(EventKernel& kernel, const ClockModel& clock,
                 std::uint32_t node, Deliver deliver)
      : kernel_(kernel), clock_(clock), node_(node),
        deliver_(std::move(deliver)) {}

  double local_now() const { return clock_.local(node_, kernel_.now()); }

  void schedule(std::int64_t id, double deadline, std::uint64_t tag,
                bool cyclic = false, double period = 0.0) {
    if (entries_.count(id))
      throw std::invalid_argument("timeout id already scheduled");
    if (cyclic && period <= 0.0)
      throw std::invalid_argument("cyclic timeout needs a positive period");
    if (deadline <= local_now())
      throw ScheduleInPast(deadline, local_now());
    entries_[id] = Entry{deadline, tag, cyclic, period};
    by_deadline_.insert({deadline, id});
    arm_wakeup();
  }

  void cancel(std::int64_t id) {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw UnknownTimeout(id);
    by_deadline_.erase({it->second.deadline, id});
    entries_.erase(it);
  }

  void renew(std::int64_t id, double new_deadline) {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw UnknownTimeout(id);
    if (new_deadline <= local_now())
      throw ScheduleInPast(new_deadline, local_now());
    by_deadline_.erase({it->second.deadline, id});
    it->second.deadline = new_deadline;
    by_deadline_.insert({new_deadline, id});
    arm_wakeup();
  }

  bool armed(std::int64_t id) const { return entries_.count(id) != 0; }

  // Node crash / shutdown: drop everything; stale wakeups become no-ops.
  void shutdown() {
    entries_.clear();
    by_deadline_.clear();
    wakeup_at_ = -1.0;
    ++generation_;
  }

 private:
  struct Entry {
    double deadline = 0.0;
    std::uint64_t tag = 0;
    bool cyclic = false;
    double period = 0.0;
  };

  static constexpr double kEps = 1e-6;

  EventKernel& kernel_;
  const ClockModel& clock_;
  std::uint32_t node_;
  Deliver deliver_;
  std::map<std::int64_t, Entry> entries_;
  std::set<std::pair<double, std::int64_t>> by_deadline_;
  std::uint64_t generation_ = 0;
  double wakeup_at_ = -1.0;  // local time of the pending wakeup, if any

  void arm_wakeup() {
    if (by_deadline_.empty()) return;
    double earliest = by_deadline_.begin()->first;
    if (wakeup_at_ >= 0.0 && wakeup_at_ <= earliest + kEps) return;
    wakeup_at_ = earliest;
    std::uint64_t gen = ++generation_;
    double global_at =
        std::max(kernel_.now(), clock_.to_global(node_, earliest));
    kernel_.schedule(global_at, node_, [this, gen] { wake(gen); });
  }

  void wake(std::uint64_t gen) {
    if (gen != generation_) return;  // superseded or shut down
    wakeup_at_ = -1.0;
    double now = local_now();
    while (!by_deadline_.empty() &&
           by_deadline_.begin()->first <= now + kEps) {
      auto [deadline, id] = *by_deadline_.begin();
      by_deadline_.erase(by_deadline_.begin());
      auto it = entries_.find(id);
      Entry e = it->second;
      if (e.cyclic) {
        it->second.deadline = deadline + e.period;
        by_deadline_.insert({it->second.deadline, id});
      } else {
        entries_.erase(it);
      }
      deliver_(id, e.tag);   // may schedule/cancel/renew reentrantly
      now = local_now();
    }
    arm_wakeup();
  }
};

}  // namespace ariel
