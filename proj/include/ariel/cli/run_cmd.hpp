#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "ariel/cli/compile_cmd.hpp"
#include "ariel/errors.hpp"
#include "ariel/sim/scenario.hpp"
#include "ariel/sim/world.hpp"

namespace ariel {

struct RunOptions {
  std::string scenario;
  std::uint64_t seed = 1;
  double until = 10000.0;
  std::string trace_path;  // defaults to scenario with .trace extension
};

// exit 0 = ran, 2 = scenario/script problem, 3 = r-code fault (harness bug)
inline int run_run(const RunOptions& opt, std::ostream& out,
                   std::ostream& err) {
  Scenario scn;
  CompiledUnit unit;
  try {
    scn = load_scenario(opt.scenario);
    unit = compile_source_file(scn.script_path, scn.constant_paths);
  } catch (const ScenarioError& e) {
    err << "error: " << opt.scenario << ": " << e.what() << "\n";
    return 2;
  } catch (const LexError& e) {
    err << "error: " << e.line << ":" << e.column << ": " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.line << ": " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  std::string trace_path = opt.trace_path;
  if (trace_path.empty())
    trace_path = std::filesystem::path(opt.scenario)
                     .replace_extension(".trace")
                     .string();

  std::string text;
  try {
    World world(std::move(scn), std::move(unit), opt.seed);
    text = world.run(opt.until);
  } catch (const VmFault& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const ScenarioError& e) {
    // script/scenario mismatch found while building the world
    err << "error: " << e.what() << "\n";
    return 2;
  }

  std::ofstream tf(trace_path, std::ios::binary);
  if (!tf) {
    err << "error: cannot write " << trace_path << "\n";
    return 2;
  }
  tf << text;
  out << "wrote " << trace_path << "\n";
  return 0;
}

}  // namespace ariel
