#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ariel/errors.hpp"
#include "ariel/sim/fault.hpp"
#include "ariel/sim/net.hpp"
#include "ariel/topology.hpp"

namespace ariel {

// Everything a world run needs, as read from one scenario file.
struct Scenario {
  Topology topo;
  NetParams net;
  double rho = 1e-3;  // clock drift bound

  // world cadences (defaults derived from d_max unless overridden)
  std::optional<double> bb_hb_period;
  std::optional<double> bb_hb_timeout;
  std::optional<double> anti_entropy_period;
  double reboot_delay = 100.0;
  double vote_period = 200.0;

  // alpha-count overrides ([ALPHA]); period falls back to
  // 10 x shortest watchdog period, or 1500 ms with no watchdogs
  std::optional<double> alpha_k;
  std::optional<double> alpha_t;
  std::optional<double> alpha_period;

  std::vector<FaultSpec> faults;
  PartitionSchedule partitions;

  std::string script_path;                  // resolved
  std::vector<std::string> constant_paths;  // resolved, in order

  double derived_bb_hb_period() const {
    return bb_hb_period.value_or(4.0 * net.d_max);
  }
  double derived_bb_hb_timeout() const {
    return bb_hb_timeout.value_or(3.0 * derived_bb_hb_period());
  }
  double derived_anti_entropy_period() const {
    return anti_entropy_period.value_or(20.0 * net.d_max);
  }
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

inline std::uint32_t parse_u32(const std::string& w, std::size_t line,
                               const char* what) {
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(w, &pos);
    if (pos != w.size() || v > 0xFFFFFFFFull) throw std::invalid_argument(w);
    return static_cast<std::uint32_t>(v);
  } catch (const std::exception&) {
    throw ScenarioError(line, std::string("expected ") + what + ", got '" +
                                  w + "'");
  }
}

inline double parse_num(const std::string& w, std::size_t line,
                        const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(w, &pos);
    if (pos != w.size()) throw std::invalid_argument(w);
    return v;
  } catch (const std::exception&) {
    throw ScenarioError(line, std::string("expected ") + what + ", got '" +
                                  w + "'");
  }
}

// accepts "7", "T7" or "N2" (the letter must match `prefix` when present)
inline std::uint32_t parse_target(const std::string& w, char prefix,
                                  std::size_t line) {
  std::string body = w;
  if (!w.empty() && (w[0] == 'T' || w[0] == 'N' || w[0] == 'G')) {
    if (w[0] != prefix)
      throw ScenarioError(line, "target '" + w + "' has the wrong kind");
    body = w.substr(1);
  }
  return parse_u32(body, line, "target id");
}

}  // namespace detail

class ScenarioParser {
 public:
  // `text` is the file body; `base_dir` resolves [SCRIPT]/[CONSTANTS] paths
  Scenario parse(const std::string& text, const std::string& base_dir) {
    base_dir_ = base_dir;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    section_ = "";
    while (std::getline(in, raw)) {
      ++lineno;
      std::string line = strip(raw);
      if (line.empty() || line[0] == '#') continue;
      if (line[0] == '[') {
        std::size_t close = line.find(']');
        if (close == std::string::npos)
          throw ScenarioError(lineno, "unterminated section header");
        section_ = line.substr(1, close - 1);
        if (!known_section(section_))
          throw ScenarioError(lineno, "unknown section [" + section_ + "]");
        std::string rest = strip(line.substr(close + 1));
        if (!rest.empty()) entry(rest, lineno);
        continue;
      }
      if (section_.empty())
        throw ScenarioError(lineno, "content before any section header");
      entry(line, lineno);
    }
    validate();
    return std::move(scn_);
  }

  Scenario parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(0, "cannot open scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(),
                 std::filesystem::path(path).parent_path().string());
  }

 private:
  Scenario scn_;
  std::string section_;
  std::string base_dir_;
  bool saw_nodes_ = false;

  static std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static bool known_section(const std::string& s) {
    static const char* names[] = {"NODES",  "TASKS",     "GROUPS",
                                  "NET",    "ALPHA",     "FAULTS",
                                  "PARTITION", "SCRIPT", "CONSTANTS"};
    return std::find_if(std::begin(names), std::end(names),
                        [&](const char* n) { return s == n; }) !=
           std::end(names);
  }

  std::string resolve(const std::string& p) const {
    std::filesystem::path fp(p);
    if (fp.is_absolute() || base_dir_.empty()) return p;
    std::filesystem::path joined = std::filesystem::path(base_dir_) / fp;
    if (std::filesystem::exists(joined)) return joined.string();
    return p;  // fall back to CWD-relative
  }

  void entry(const std::string& line, std::size_t ln) {
    auto words = detail::split_ws(line);
    if (section_ == "NODES") {
      if (saw_nodes_) throw ScenarioError(ln, "duplicate [NODES]");
      if (words.size() != 1)
        throw ScenarioError(ln, "[NODES] takes exactly one count");
      scn_.topo.node_count = detail::parse_u32(words[0], ln, "node count");
      if (scn_.topo.node_count == 0)
        throw ScenarioError(ln, "node count must be positive");
      saw_nodes_ = true;
    } else if (section_ == "TASKS") {
      // <task-id> ON <node-id> [SPARE]
      bool spare = !words.empty() && words.back() == "SPARE";
      std::size_t n = words.size() - (spare ? 1 : 0);
      if (n != 3 || words[1] != "ON")
        throw ScenarioError(ln, "expected '<task-id> ON <node-id>'");
      std::uint32_t tid = detail::parse_u32(words[0], ln, "task id");
      std::uint32_t nid = detail::parse_u32(words[2], ln, "node id");
      if (scn_.topo.task_home.count(tid))
        throw ScenarioError(ln, "duplicate task " + std::to_string(tid));
      scn_.topo.task_home[tid] = nid;
      if (spare) scn_.topo.spares.insert(tid);
    } else if (section_ == "GROUPS") {
      // <group-id>: <task-id>...
      std::string head = words.empty() ? "" : words[0];
      if (head.size() < 2 || head.back() != ':')
        throw ScenarioError(ln, "expected '<group-id>: <task-id>...'");
      std::uint32_t gid = detail::parse_u32(
          head.substr(0, head.size() - 1), ln, "group id");
      if (scn_.topo.groups.count(gid))
        throw ScenarioError(ln, "duplicate group " + std::to_string(gid));
      if (words.size() < 2)
        throw ScenarioError(ln, "group needs at least one member");
      std::vector<std::uint32_t> members;
      for (std::size_t i = 1; i < words.size(); ++i)
        members.push_back(detail::parse_u32(words[i], ln, "task id"));
      scn_.topo.groups[gid] = std::move(members);
    } else if (section_ == "NET") {
      for (const auto& w : words) kv(w, ln);
    } else if (section_ == "ALPHA") {
      for (const auto& w : words) alpha_kv(w, ln);
    } else if (section_ == "FAULTS") {
      fault_entry(words, ln);
    } else if (section_ == "PARTITION") {
      partition_entry(words, ln);
    } else if (section_ == "SCRIPT") {
      if (!scn_.script_path.empty())
        throw ScenarioError(ln, "duplicate [SCRIPT]");
      scn_.script_path = resolve(line);
    } else if (section_ == "CONSTANTS") {
      scn_.constant_paths.push_back(resolve(line));
    }
  }

  void kv(const std::string& w, std::size_t ln) {
    std::size_t eq = w.find('=');
    if (eq == std::string::npos)
      throw ScenarioError(ln, "expected key=value, got '" + w + "'");
    std::string key = w.substr(0, eq);
    double val = detail::parse_num(w.substr(eq + 1), ln, "number");
    if (key == "d_min") scn_.net.d_min = val;
    else if (key == "d_max") scn_.net.d_max = val;
    else if (key == "p_omit") scn_.net.p_omit = val;
    else if (key == "p_late") scn_.net.p_late = val;
    else if (key == "late_factor") scn_.net.late_factor = val;
    else if (key == "rho") scn_.rho = val;
    else if (key == "bb_hb_period") scn_.bb_hb_period = val;
    else if (key == "bb_hb_timeout") scn_.bb_hb_timeout = val;
    else if (key == "anti_entropy") scn_.anti_entropy_period = val;
    else if (key == "reboot_delay") scn_.reboot_delay = val;
    else if (key == "vote_period") scn_.vote_period = val;
    else throw ScenarioError(ln, "unknown [NET] key '" + key + "'");
  }

  void alpha_kv(const std::string& w, std::size_t ln) {
    std::size_t eq = w.find('=');
    if (eq == std::string::npos)
      throw ScenarioError(ln, "expected key=value, got '" + w + "'");
    std::string key = w.substr(0, eq);
    double val = detail::parse_num(w.substr(eq + 1), ln, "number");
    if (key == "K") scn_.alpha_k = val;
    else if (key == "T") scn_.alpha_t = val;
    else if (key == "period") scn_.alpha_period = val;
    else throw ScenarioError(ln, "unknown [ALPHA] key '" + key + "'");
  }

  void fault_entry(const std::vector<std::string>& words, std::size_t ln) {
    if (words.size() < 3)
      throw ScenarioError(ln, "expected '<at-ms> <kind> <target> [arg]'");
    FaultSpec f;
    f.at = detail::parse_num(words[0], ln, "time");
    if (f.at < 0) throw ScenarioError(ln, "fault time must be >= 0");
    const std::string& kind = words[1];
    bool want_arg = false;
    char prefix = 'T';
    if (kind == "CRASH_TASK") {
      f.kind = FaultKind::CrashTask;
    } else if (kind == "CRASH_NODE") {
      f.kind = FaultKind::CrashNode;
      prefix = 'N';
    } else if (kind == "HANG_TASK") {
      f.kind = FaultKind::HangTask;
      want_arg = true;
    } else if (kind == "RAISE_EXCEPTION") {
      f.kind = FaultKind::RaiseException;
      want_arg = true;
    } else if (kind == "CORRUPT_BALLOT") {
      f.kind = FaultKind::CorruptBallot;
      want_arg = true;
    } else {
      throw ScenarioError(ln, "unknown fault kind '" + kind + "'");
    }
    f.target = detail::parse_target(words[2], prefix, ln);
    if (want_arg) {
      if (words.size() != 4)
        throw ScenarioError(ln, kind + " needs one argument");
      f.arg = detail::parse_u32(words[3], ln, "fault argument");
    } else if (words.size() != 3) {
      throw ScenarioError(ln, kind + " takes no argument");
    }
    scn_.faults.push_back(f);
  }

  void partition_entry(const std::vector<std::string>& words,
                       std::size_t ln) {
    if (words.size() != 3)
      throw ScenarioError(ln, "expected '<start> <end> <blocks>'");
    PartitionSpec p;
    p.start = detail::parse_num(words[0], ln, "start time");
    p.end = detail::parse_num(words[1], ln, "end time");
    if (!(p.start < p.end))
      throw ScenarioError(ln, "partition start must precede end");
    std::istringstream bs(words[2]);
    std::string block;
    while (std::getline(bs, block, '|')) {
      std::vector<std::uint32_t> nodes;
      std::istringstream ns(block);
      std::string id;
      while (std::getline(ns, id, ','))
        nodes.push_back(detail::parse_u32(id, ln, "node id"));
      if (nodes.empty()) throw ScenarioError(ln, "empty partition block");
      p.blocks.push_back(std::move(nodes));
    }
    if (p.blocks.size() < 2)
      throw ScenarioError(ln, "partition needs at least two blocks");
    partition_lines_.push_back(ln);
    scn_.partitions.add(std::move(p));
  }

  void validate() {
    if (!saw_nodes_) throw ScenarioError(0, "missing [NODES] section");
    if (scn_.script_path.empty())
      throw ScenarioError(0, "missing [SCRIPT] section");
    for (const auto& [tid, nid] : scn_.topo.task_home)
      if (nid >= scn_.topo.node_count)
        throw ScenarioError(0, "task " + std::to_string(tid) +
                                   " placed on unknown node " +
                                   std::to_string(nid));
    for (const auto& [gid, members] : scn_.topo.groups)
      for (std::uint32_t m : members)
        if (!scn_.topo.has_task(m))
          throw ScenarioError(0, "group " + std::to_string(gid) +
                                     " references unknown task " +
                                     std::to_string(m));
    for (const auto& f : scn_.faults) {
      if (f.kind == FaultKind::CrashNode) {
        if (f.target >= scn_.topo.node_count)
          throw ScenarioError(0, "fault targets unknown node " +
                                     std::to_string(f.target));
      } else if (!scn_.topo.has_task(f.target)) {
        throw ScenarioError(0, "fault targets unknown task " +
                                   std::to_string(f.target));
      }
      if (f.kind == FaultKind::HangTask && f.arg == 0)
        throw ScenarioError(0, "HANG_TASK duration must be positive");
    }
    std::size_t pi = 0;
    for (const auto& p : scn_.partitions.specs()) {
      std::size_t ln = partition_lines_[pi++];
      std::set<std::uint32_t> seen;
      for (const auto& block : p.blocks)
        for (std::uint32_t n : block) {
          if (n >= scn_.topo.node_count)
            throw ScenarioError(ln, "partition references unknown node " +
                                        std::to_string(n));
          if (!seen.insert(n).second)
            throw ScenarioError(ln, "node " + std::to_string(n) +
                                        " appears in two blocks");
        }
      if (seen.size() != scn_.topo.node_count)
        throw ScenarioError(ln, "partition must cover every node");
    }
  }

  std::vector<std::size_t> partition_lines_;
};

inline Scenario load_scenario(const std::string& path) {
  return ScenarioParser{}.parse_file(path);
}

}  // namespace ariel
