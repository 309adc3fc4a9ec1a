#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <tuple>
#include <vector>

#include "ariel/errors.hpp"
#include "ariel/sim/clock.hpp"
#include "ariel/sim/kernel.hpp"
#include "ariel/sim/net.hpp"
#include "ariel/sim/rng.hpp"

using namespace ariel;

TEST_CASE("kernel replays events in (time, node, insertion) order") {
  // Oracle: sort the scheduled keys and compare with execution order.
  SplitMix64 rng{0xDE7E12u};
  EventKernel kernel;
  using Key = std::tuple<double, std::uint32_t, std::uint64_t>;
  std::vector<Key> scheduled;
  std::vector<Key> executed;

  for (std::uint64_t i = 0; i < 10000; ++i) {
    // coarse times force plenty of exact collisions
    double at = static_cast<double>(rng.next() % 64);
    auto node = static_cast<std::uint32_t>(rng.next() % 4);
    Key k{at, node, i};
    scheduled.push_back(k);
    kernel.schedule(at, node, [&executed, k] { executed.push_back(k); });
  }

  while (!kernel.empty()) kernel.advance();

  std::sort(scheduled.begin(), scheduled.end());
  CHECK(executed == scheduled);
}

TEST_CASE("handlers may schedule at the current instant but not before") {
  EventKernel kernel;
  int ran = 0;
  kernel.schedule(10.0, 0, [&] {
    kernel.schedule(kernel.now(), 0, [&] { ++ran; });
    CHECK_THROWS_AS(kernel.schedule(9.0, 0, [] {}), ScheduleInPast);
  });
  kernel.run_until(20.0);
  CHECK(ran == 1);
  CHECK(kernel.now() == 20.0);
}

TEST_CASE("draining an empty kernel throws EmptyQueue") {
  EventKernel kernel;
  CHECK_THROWS_AS(kernel.advance(), EmptyQueue);
  CHECK_THROWS_AS(kernel.next_time(), EmptyQueue);
}

TEST_CASE("run_until stops at the boundary inclusively") {
  EventKernel kernel;
  std::vector<double> seen;
  for (double t : {5.0, 10.0, 15.0})
    kernel.schedule(t, 0, [&seen, &kernel] { seen.push_back(kernel.now()); });
  kernel.run_until(10.0);
  CHECK(seen == std::vector<double>{5.0, 10.0});
  CHECK(kernel.next_time() == 15.0);
}

TEST_CASE("clock drift stays within rho and is zero when rho is zero") {
  ClockModel strict{8, 0.0, 99};
  for (std::uint32_t n = 0; n < 8; ++n) {
    CHECK(strict.drift(n) == 0.0);
    CHECK(strict.local(n, 1234.5) == 1234.5);
  }

  ClockModel loose{8, 1e-3, 99};
  bool any_nonzero = false;
  for (std::uint32_t n = 0; n < 8; ++n) {
    CHECK(std::abs(loose.drift(n)) <= 1e-3);
    if (loose.drift(n) != 0.0) any_nonzero = true;
    // local and to_global are inverses
    double t = 5000.0;
    CHECK(loose.to_global(n, loose.local(n, t)) == Catch::Approx(t));
  }
  CHECK(any_nonzero);
}

TEST_CASE("same seed gives the same drifts, different seeds differ") {
  ClockModel a{4, 1e-3, 7}, b{4, 1e-3, 7}, c{4, 1e-3, 8};
  bool differs = false;
  for (std::uint32_t n = 0; n < 4; ++n) {
    CHECK(a.drift(n) == b.drift(n));
    if (a.drift(n) != c.drift(n)) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("delays stay inside [d_min, d_max] without lateness") {
  NetModel net{1, NetParams{2.0, 9.0, 0.0, 0.0, 5.0}};
  for (int i = 0; i < 5000; ++i) {
    auto d = net.decide(0, 1);
    CHECK(d.deliver);
    CHECK(d.delay >= 2.0);
    CHECK(d.delay <= 9.0);
  }
}

TEST_CASE("omission frequency tracks p_omit") {
  NetModel net{123, NetParams{1.0, 10.0, 0.5, 0.0, 5.0}};
  int dropped = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    if (!net.decide(0, 1).deliver) ++dropped;
  double freq = static_cast<double>(dropped) / n;
  CHECK(freq > 0.45);
  CHECK(freq < 0.55);
}

TEST_CASE("late datagrams take d_max * late_factor") {
  NetModel net{5, NetParams{1.0, 10.0, 0.0, 1.0, 5.0}};
  auto d = net.decide(0, 1);
  CHECK(d.deliver);
  CHECK(d.delay == 50.0);
}

TEST_CASE("channels draw from independent streams") {
  // Consuming a draw on channel (0,1) must not change what (1,0) yields.
  NetParams p{1.0, 10.0, 0.0, 0.0, 5.0};
  NetModel a{42, p}, b{42, p};

  (void)a.decide(0, 1);  // extra traffic on the forward channel
  auto a_back = a.decide(1, 0);
  auto b_back = b.decide(1, 0);
  CHECK(a_back.delay == b_back.delay);
}

TEST_CASE("partition blocks contain traffic, gaps restore it") {
  PartitionSchedule sched;
  sched.add({1000.0, 3000.0, {{0, 1}, {2, 3}}});

  CHECK(sched.connected(500.0, 0, 2));    // before
  CHECK(sched.connected(3000.0, 0, 2));   // end is exclusive
  CHECK_FALSE(sched.connected(1000.0, 0, 2));
  CHECK_FALSE(sched.connected(2000.0, 1, 3));
  CHECK(sched.connected(2000.0, 0, 1));   // same block
  CHECK(sched.connected(2000.0, 2, 3));
  CHECK(sched.connected(2000.0, 0, 0));   // self
}

TEST_CASE("overlapping partitions: the latest-starting one wins") {
  PartitionSchedule sched;
  sched.add({1000.0, 5000.0, {{0, 1}, {2, 3}}});
  sched.add({2000.0, 3000.0, {{0, 2}, {1, 3}}});

  // inside the override window the second split applies
  CHECK(sched.connected(2500.0, 0, 2));
  CHECK_FALSE(sched.connected(2500.0, 0, 1));
  // back to the first split once the override ends
  CHECK(sched.connected(3500.0, 0, 1));
  CHECK_FALSE(sched.connected(3500.0, 0, 2));

  const PartitionSpec* p = sched.active_at(2500.0);
  REQUIRE(p != nullptr);
  CHECK(p->start == 2000.0);
}

TEST_CASE("splitmix64 streams are stable across runs") {
  SplitMix64 a{12345}, b{12345};
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  // frozen first value of a known seed: guards the generator itself
  SplitMix64 probe{0};
  CHECK(probe.next() == 0xE220A8397B1DCDAFull);
}

TEST_CASE("uniform01 lands in the half-open unit interval") {
  SplitMix64 rng{777};
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
