#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ariel/compiler.hpp"
#include "ariel/constants.hpp"
#include "ariel/errors.hpp"
#include "ariel/lexer.hpp"
#include "ariel/parser.hpp"
#include "ariel/rcode.hpp"

namespace ariel {

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_binary_file(const std::string& path,
                              const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

// INCLUDE paths resolve relative to the including source's directory,
// then the working directory.
inline IncludeLoader make_include_loader(const std::string& source_path) {
  std::string dir =
      std::filesystem::path(source_path).parent_path().string();
  return [dir](const std::string& name) -> std::optional<std::string> {
    std::filesystem::path p(name);
    if (!p.is_absolute() && !dir.empty()) {
      std::filesystem::path joined = std::filesystem::path(dir) / p;
      if (std::filesystem::exists(joined)) {
        return read_text_file(joined.string());
      }
    }
    if (std::filesystem::exists(p)) return read_text_file(p.string());
    return std::nullopt;
  };
}

// Shared front-end: constants files, then lex/parse/compile.
inline CompiledUnit compile_source_file(
    const std::string& source_path,
    const std::vector<std::string>& constant_paths) {
  ConstantTable constants;
  for (const auto& cp : constant_paths)
    merge_constants(constants, read_text_file(cp));
  std::string source = read_text_file(source_path);
  auto tokens = tokenize(source);
  ParsedProgram prog = parse(std::move(tokens), std::move(constants),
                             make_include_loader(source_path));
  return compile_program(prog);
}

// Normative config-file records, one per BT block in script order.
inline std::string render_config(const std::vector<BTConfig>& configs) {
  std::string out;
  for (const auto& cfg : configs) {
    if (const auto* wd = std::get_if<WatchdogConfig>(&cfg)) {
      out += "WATCHDOG " + std::to_string(wd->wid) + " " +
             std::to_string(wd->watched.id) + " " +
             std::to_string(wd->period_ms) + " " +
             std::to_string(wd->warn_target.id) + "\n";
    } else {
      const auto& rg = std::get<ReplicatedGroupConfig>(cfg);
      out += "RGROUP " + std::to_string(rg.group.id);
      for (const EntityRef& m : rg.members)
        out += " " + std::to_string(m.id);
      out += "\n";
    }
  }
  return out;
}

struct CompileOptions {
  std::string source;
  std::vector<std::string> constants;
  std::string output;  // defaults to source with .rcod extension
  std::string config;  // defaults to source with .cfg extension
  bool disasm = false;
};

inline int run_compile(const CompileOptions& opt, std::ostream& out,
                       std::ostream& err) {
  std::string rcod_path = opt.output;
  if (rcod_path.empty())
    rcod_path = std::filesystem::path(opt.source)
                    .replace_extension(".rcod")
                    .string();
  std::string cfg_path = opt.config;
  if (cfg_path.empty())
    cfg_path =
        std::filesystem::path(opt.source).replace_extension(".cfg").string();

  CompiledUnit unit;
  try {
    unit = compile_source_file(opt.source, opt.constants);
  } catch (const LexError& e) {
    err << "error: " << opt.source << ":" << e.line << ":" << e.column << ": "
        << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    err << "error: " << opt.source << ":" << e.line << ": " << e.what()
        << " (expected " << e.expected << ")\n";
    return 1;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  write_binary_file(rcod_path, encode_rcode(unit.rcode));
  std::ofstream cfg(cfg_path, std::ios::binary);
  if (!cfg) {
    err << "error: cannot write " << cfg_path << "\n";
    return 1;
  }
  cfg << render_config(unit.configs);
  out << "wrote " << rcod_path << " (" << unit.rcode.code.size()
      << " instructions), " << cfg_path << "\n";
  if (opt.disasm) out << disassemble(unit.rcode);
  return 0;
}

}  // namespace ariel
