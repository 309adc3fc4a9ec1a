#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <tuple>

#include "ariel/errors.hpp"

namespace ariel {

// Discrete-event kernel. Events are totally ordered by
// (global time, node, insertion counter) — deterministic by construction.
// Handlers run strictly sequentially and may schedule at times >= now.
class EventKernel {
 public:
  using Handler = std::function<void()>;

  void schedule(double at, std::uint32_t node, Handler h) {
    if (at < now_) throw ScheduleInPast(at, now_);
    queue_.emplace(Key{at, node, counter_++}, std::move(h));
  }

  bool empty() const { return queue_.empty(); }

  double now() const { return now_; }

  double next_time() const {
    if (queue_.empty()) throw EmptyQueue();
    return std::get<0>(queue_.begin()->first);
  }

  // Pops and runs the minimum event; returns its (time, node).
  std::pair<double, std::uint32_t> advance() {
    if (queue_.empty()) throw EmptyQueue();
    auto it = queue_.begin();
    now_ = std::get<0>(it->first);
    std::uint32_t node = std::get<1>(it->first);
    Handler h = std::move(it->second);
    queue_.erase(it);
    h();
    return {now_, node};
  }

  // Runs every event with time <= until, then parks the clock at until.
  void run_until(double until) {
    while (!queue_.empty() && std::get<0>(queue_.begin()->first) <= until)
      advance();
    if (until > now_) now_ = until;
  }

 private:
  using Key = std::tuple<double, std::uint32_t, std::uint64_t>;
  double now_ = 0.0;
  std::uint64_t counter_ = 0;
  std::map<Key, Handler> queue_;
};

}  // namespace ariel
