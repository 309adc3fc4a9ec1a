#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "ariel/errors.hpp"
#include "ariel/sim/scenario.hpp"

using namespace ariel;

namespace {

Scenario parse(const std::string& text) {
  return ScenarioParser{}.parse(text, "");
}

const std::string kBase = R"([NODES] 2
[TASKS]
10 ON 0
11 ON 1
12 ON 1 SPARE
[GROUPS]
3: 11 12
[SCRIPT] guards.rl
)";

}  // namespace

TEST_CASE("a full scenario parses into topology and knobs") {
  auto scn = parse(R"(# comment line
[NODES] 3

[TASKS]
10 ON 0
11 ON 1
12 ON 2 SPARE

[GROUPS]
3: 10 11
4: 11 12

[NET] d_min=2 d_max=8 p_omit=0.1 rho=0
[NET] vote_period=400

[ALPHA] K=0.8 T=2.5 period=900

[FAULTS]
500 RAISE_EXCEPTION T10 42
1000 CRASH_NODE N2
2000 HANG_TASK 11 300

[PARTITION]
1000 3000 0,1|2

[SCRIPT]
guards.rl

[CONSTANTS]
defs_a.h
defs_b.h
)");

  CHECK(scn.topo.node_count == 3);
  CHECK(scn.topo.task_home.at(10) == 0);
  CHECK(scn.topo.task_home.at(12) == 2);
  CHECK(scn.topo.spares == std::set<std::uint32_t>{12});
  CHECK(scn.topo.groups.at(3) == std::vector<std::uint32_t>{10, 11});

  CHECK(scn.net.d_min == 2.0);
  CHECK(scn.net.d_max == 8.0);
  CHECK(scn.net.p_omit == 0.1);
  CHECK(scn.rho == 0.0);
  CHECK(scn.vote_period == 400.0);

  CHECK(scn.alpha_k == 0.8);
  CHECK(scn.alpha_t == 2.5);
  CHECK(scn.alpha_period == 900.0);

  REQUIRE(scn.faults.size() == 3);
  CHECK(scn.faults[0].kind == FaultKind::RaiseException);
  CHECK(scn.faults[0].target == 10);
  CHECK(scn.faults[0].arg == 42);
  CHECK(scn.faults[1].kind == FaultKind::CrashNode);
  CHECK(scn.faults[1].target == 2);
  CHECK(scn.faults[2].kind == FaultKind::HangTask);
  CHECK(scn.faults[2].arg == 300);

  REQUIRE(scn.partitions.specs().size() == 1);
  CHECK_FALSE(scn.partitions.connected(1500.0, 0, 2));
  CHECK(scn.partitions.connected(1500.0, 0, 1));

  CHECK(scn.script_path == "guards.rl");
  CHECK(scn.constant_paths ==
        std::vector<std::string>{"defs_a.h", "defs_b.h"});
}

TEST_CASE("cadence defaults derive from d_max") {
  auto scn = parse(kBase);
  CHECK(scn.derived_bb_hb_period() == 40.0);     // 4 x d_max
  CHECK(scn.derived_bb_hb_timeout() == 120.0);   // 3 x period
  CHECK(scn.derived_anti_entropy_period() == 200.0);  // 20 x d_max

  auto tuned = parse(kBase + "[NET] bb_hb_period=50 anti_entropy=500\n");
  CHECK(tuned.derived_bb_hb_period() == 50.0);
  CHECK(tuned.derived_bb_hb_timeout() == 150.0);
  CHECK(tuned.derived_anti_entropy_period() == 500.0);
}

TEST_CASE("section entries may sit on the header line or below it") {
  auto a = parse("[NODES] 1\n[SCRIPT] g.rl\n");
  auto b = parse("[NODES]\n1\n[SCRIPT]\ng.rl\n");
  CHECK(a.topo.node_count == b.topo.node_count);
  CHECK(a.script_path == b.script_path);
}

TEST_CASE("missing NODES or SCRIPT is rejected") {
  CHECK_THROWS_AS(parse("[SCRIPT] g.rl\n"), ScenarioError);
  CHECK_THROWS_AS(parse("[NODES] 2\n"), ScenarioError);
}

TEST_CASE("malformed input names the offending line") {
  try {
    parse("[NODES] 2\n[TASKS]\n10 AT 0\n[SCRIPT] g.rl\n");
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("ON") != std::string::npos);
  }
}

TEST_CASE("unknown sections and keys are rejected") {
  CHECK_THROWS_AS(parse("[JUNK] 1\n"), ScenarioError);
  CHECK_THROWS_AS(parse(kBase + "[NET] warp=9\n"), ScenarioError);
  CHECK_THROWS_AS(parse(kBase + "[ALPHA] Q=1\n"), ScenarioError);
  CHECK_THROWS_AS(parse("x\n"), ScenarioError);  // content before any header
}

TEST_CASE("duplicate definitions are rejected") {
  CHECK_THROWS_AS(parse(kBase + "[NODES] 2\n"), ScenarioError);
  CHECK_THROWS_AS(parse(kBase + "[TASKS] 10 ON 1\n"), ScenarioError);
  CHECK_THROWS_AS(parse(kBase + "[GROUPS] 3: 10\n"), ScenarioError);
  CHECK_THROWS_AS(parse(kBase + "[SCRIPT] other.rl\n"), ScenarioError);
}

TEST_CASE("placement and membership must reference known entities") {
  // task on a node that does not exist
  CHECK_THROWS_AS(parse("[NODES] 1\n[TASKS] 10 ON 3\n[SCRIPT] g.rl\n"),
                  ScenarioError);
  // group member that does not exist
  CHECK_THROWS_AS(parse("[NODES] 1\n[GROUPS] 3: 99\n[SCRIPT] g.rl\n"),
                  ScenarioError);
}

TEST_CASE("fault validation") {
  // unknown task
  CHECK_THROWS_AS(parse(kBase + "[FAULTS] 100 CRASH_TASK T99\n"),
                  ScenarioError);
  // unknown node
  CHECK_THROWS_AS(parse(kBase + "[FAULTS] 100 CRASH_NODE N9\n"),
                  ScenarioError);
  // unknown kind
  CHECK_THROWS_AS(parse(kBase + "[FAULTS] 100 EXPLODE T10\n"), ScenarioError);
  // missing argument
  CHECK_THROWS_AS(parse(kBase + "[FAULTS] 100 RAISE_EXCEPTION T10\n"),
                  ScenarioError);
  // argument where none belongs
  CHECK_THROWS_AS(parse(kBase + "[FAULTS] 100 CRASH_TASK T10 5\n"),
                  ScenarioError);
  // zero-length hang
  CHECK_THROWS_AS(parse(kBase + "[FAULTS] 100 HANG_TASK T10 0\n"),
                  ScenarioError);
  // wrong target kind letter
  CHECK_THROWS_AS(parse(kBase + "[FAULTS] 100 CRASH_TASK N0\n"),
                  ScenarioError);
}

TEST_CASE("partition validation") {
  // must cover every node
  CHECK_THROWS_AS(parse("[NODES] 3\n[SCRIPT] g.rl\n[PARTITION] 100 200 0|1\n"),
                  ScenarioError);
  // node in two blocks
  CHECK_THROWS_AS(parse(kBase + "[PARTITION] 100 200 0,1|1\n"),
                  ScenarioError);
  // unknown node
  CHECK_THROWS_AS(parse(kBase + "[PARTITION] 100 200 0|5\n"), ScenarioError);
  // at least two blocks
  CHECK_THROWS_AS(parse(kBase + "[PARTITION] 100 200 0,1\n"), ScenarioError);
  // start before end
  CHECK_THROWS_AS(parse(kBase + "[PARTITION] 300 200 0|1\n"), ScenarioError);
  // a valid split for reference
  auto ok = parse(kBase + "[PARTITION] 100 200 0|1\n");
  CHECK(ok.partitions.specs().size() == 1);
}

TEST_CASE("missing scenario file reports cleanly") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/file.scn"), ScenarioError);
}
