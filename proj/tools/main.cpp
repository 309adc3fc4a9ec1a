#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ariel/cli/check_cmd.hpp"
#include "ariel/cli/compile_cmd.hpp"
#include "ariel/cli/run_cmd.hpp"

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ARIEL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring bad ARIEL_SEED '" << env << "'\n";
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recovery-language toolchain: compile scripts, run scenarios, "
               "check traces"};
  app.require_subcommand(1);

  ariel::CompileOptions copt;
  CLI::App* compile = app.add_subcommand("compile", "compile a script");
  compile->add_option("source", copt.source, "script source file")
      ->required();
  compile->add_option("-c,--constants", copt.constants,
                      "definitions file(s) with #define lines");
  compile->add_option("-o,--output", copt.output,
                      "output bytecode path (default: source with .rcod)");
  compile->add_option("--config", copt.config,
                      "config file path (default: source with .cfg)");
  compile->add_flag("--disasm", copt.disasm, "print disassembly");

  ariel::RunOptions ropt;
  ropt.seed = default_seed();
  CLI::App* run = app.add_subcommand("run", "run a scenario");
  run->add_option("scenario", ropt.scenario, "scenario file")->required();
  run->add_option("--seed", ropt.seed, "simulation seed");
  run->add_option("--until", ropt.until, "run until this global time (ms)");
  run->add_option("--trace", ropt.trace_path,
                  "trace output path (default: scenario with .trace)");

  std::string trace_path, assertions_path;
  CLI::App* check = app.add_subcommand("check", "check a trace");
  check->add_option("trace", trace_path, "trace file")->required();
  check->add_option("assertions", assertions_path, "assertions file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (compile->parsed())
    return ariel::run_compile(copt, std::cout, std::cerr);
  if (run->parsed()) return ariel::run_run(ropt, std::cout, std::cerr);
  if (check->parsed()) {
    std::string trace_text, assertions_text;
    try {
      trace_text = ariel::read_text_file(trace_path);
      assertions_text = ariel::read_text_file(assertions_path);
    } catch (const std::runtime_error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    return ariel::run_check(trace_text, assertions_text, std::cout,
                            std::cerr);
  }
  return 1;
}
