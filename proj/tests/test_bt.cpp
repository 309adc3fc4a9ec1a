#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "ariel/ast.hpp"
#include "ariel/bb/tom.hpp"
#include "ariel/bt/watchdog.hpp"
#include "ariel/sim/clock.hpp"
#include "ariel/sim/kernel.hpp"

using namespace ariel;

namespace {

struct WdRig {
  EventKernel kernel;
  ClockModel clock{1, 0.0, 1};
  std::vector<std::string> log;
  TimeoutManager tom{kernel, clock, 0,
                     [this](std::int64_t, std::uint64_t) { wd.on_timeout(); }};
  Watchdog wd{WatchdogConfig{1, task_ref(7), 100, task_ref(5)},
              tom,
              42,
              {[this] { log.push_back("alarm"); },
               [this] { log.push_back("notify"); },
               [this](const char* kind, const std::string&) {
                 log.push_back(kind);
               }}};

  void at(double t, std::function<void()> f) {
    kernel.schedule(t, 0, std::move(f));
  }
};

}  // namespace

TEST_CASE("watchdog stays disarmed until the first heartbeat") {
  WdRig rig;
  CHECK_FALSE(rig.wd.enabled());
  rig.kernel.run_until(1000.0);
  CHECK(rig.log.empty());  // silence is not a timeout before first beat
}

TEST_CASE("first heartbeat enables, silence fires alarm before notify") {
  WdRig rig;
  rig.at(10.0, [&] { rig.wd.on_heartbeat(7); });
  rig.kernel.run_until(1000.0);
  REQUIRE(rig.log.size() == 4);
  CHECK(rig.log[0] == "WD_ENABLE");
  CHECK(rig.log[1] == "WD_FIRE");
  CHECK(rig.log[2] == "alarm");
  CHECK(rig.log[3] == "notify");
  CHECK_FALSE(rig.wd.enabled());
}

TEST_CASE("steady heartbeats keep the watchdog quiet") {
  WdRig rig;
  for (int i = 0; i < 20; ++i)
    rig.at(10.0 + 50.0 * i, [&] { rig.wd.on_heartbeat(7); });
  rig.kernel.run_until(900.0);  // last beat at 960 not yet due
  REQUIRE(rig.log.size() == 1);
  CHECK(rig.log[0] == "WD_ENABLE");
  CHECK(rig.wd.enabled());
}

TEST_CASE("fire happens one period after the last heartbeat") {
  WdRig rig;
  double fired_at = -1.0;
  rig.at(10.0, [&] { rig.wd.on_heartbeat(7); });
  rig.at(60.0, [&] { rig.wd.on_heartbeat(7); });
  rig.kernel.run_until(1000.0);
  // deadline renewed to 60 + 100
  CHECK(rig.tom.local_now() >= 160.0);
  REQUIRE(rig.log.size() >= 2);
  CHECK(rig.log[1] == "WD_FIRE");
  (void)fired_at;
}

TEST_CASE("a heartbeat after a fire re-enables the watchdog") {
  WdRig rig;
  rig.at(10.0, [&] { rig.wd.on_heartbeat(7); });
  // fire at 110; new beat at 200 re-enables; fire again at 300
  rig.at(200.0, [&] { rig.wd.on_heartbeat(7); });
  rig.kernel.run_until(1000.0);
  std::vector<std::string> want = {"WD_ENABLE", "WD_FIRE",   "alarm", "notify",
                                   "WD_ENABLE", "WD_FIRE",   "alarm", "notify"};
  CHECK(rig.log == want);
}

TEST_CASE("stray heartbeats from other tasks are ignored") {
  WdRig rig;
  rig.at(10.0, [&] { rig.wd.on_heartbeat(99); });
  rig.kernel.run_until(500.0);
  REQUIRE(rig.log.size() == 1);
  CHECK(rig.log[0] == "WD_IGNORED");
  CHECK_FALSE(rig.wd.enabled());
}

TEST_CASE("reset returns to the pre-first-heartbeat state") {
  WdRig rig;
  rig.at(10.0, [&] { rig.wd.on_heartbeat(7); });
  rig.at(50.0, [&] { rig.wd.reset(); });
  rig.kernel.run_until(1000.0);
  // no fire: the armed timeout was cancelled with the reset
  std::vector<std::string> want = {"WD_ENABLE"};
  CHECK(rig.log == want);
  CHECK_FALSE(rig.wd.enabled());
}
