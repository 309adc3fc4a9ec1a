#pragma once

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ariel/errors.hpp"

namespace ariel {

struct TraceLine {
  std::size_t lineno = 0;
  double time = 0.0;
  std::string node;
  std::string component;
  std::string kind;
  std::string detail;
  std::string raw;
};

// error raised for malformed assertion or trace input (exit 2)
class CheckInputError : public std::runtime_error {
 public:
  CheckInputError(std::size_t line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        line(line) {}
  std::size_t line;
};

inline std::vector<TraceLine> parse_trace(const std::string& text) {
  std::vector<TraceLine> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (raw.empty()) continue;
    TraceLine tl;
    tl.lineno = lineno;
    tl.raw = raw;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= raw.size(); ++i) {
      if (i == raw.size() || raw[i] == '\t') {
        fields.push_back(raw.substr(start, i - start));
        start = i + 1;
      }
    }
    if (fields.size() != 5)
      throw CheckInputError(lineno, "trace line needs 5 tab-separated fields");
    try {
      tl.time = std::stod(fields[0]);
    } catch (const std::exception&) {
      throw CheckInputError(lineno, "bad timestamp '" + fields[0] + "'");
    }
    tl.node = fields[1];
    tl.component = fields[2];
    tl.kind = fields[3];
    tl.detail = fields[4];
    out.push_back(std::move(tl));
  }
  return out;
}

// pattern := <event-kind> (node=<id> | component=<name> | detail~"substr")*
struct EventPattern {
  std::string kind;
  std::optional<std::string> node;
  std::optional<std::string> component;
  std::optional<std::string> detail_substr;

  bool matches(const TraceLine& tl) const {
    if (tl.kind != kind) return false;
    if (node && tl.node != *node) return false;
    if (component && tl.component != *component) return false;
    if (detail_substr && tl.detail.find(*detail_substr) == std::string::npos)
      return false;
    return true;
  }

  std::string str() const {
    std::string s = kind;
    if (node) s += " node=" + *node;
    if (component) s += " component=" + *component;
    if (detail_substr) s += " detail~\"" + *detail_substr + "\"";
    return s;
  }
};

enum class AssertKind { Occurs, Absent, OrderedPair, WithinMs };

struct TraceAssertion {
  AssertKind kind = AssertKind::Occurs;
  EventPattern first;
  EventPattern second;  // ORDERED_PAIR / WITHIN_MS only
  double bound_ms = 0.0;
  std::size_t lineno = 0;
  std::string text;
};

namespace detail {

// splits on spaces, but detail~"..." stays one token (quotes may hold spaces)
inline std::vector<std::string> split_assertion(const std::string& line,
                                                std::size_t lineno) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    bool in_quote = false;
    while (i < line.size() && (in_quote || (line[i] != ' ' && line[i] != '\t'))) {
      if (line[i] == '"') in_quote = !in_quote;
      ++i;
    }
    if (in_quote) throw CheckInputError(lineno, "unterminated quote");
    out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline EventPattern parse_pattern(const std::vector<std::string>& words,
                                  std::size_t begin, std::size_t end,
                                  std::size_t lineno) {
  if (begin >= end) throw CheckInputError(lineno, "missing event pattern");
  EventPattern p;
  p.kind = words[begin];
  for (std::size_t i = begin + 1; i < end; ++i) {
    const std::string& w = words[i];
    if (w.rfind("node=", 0) == 0) {
      p.node = w.substr(5);
    } else if (w.rfind("component=", 0) == 0) {
      p.component = w.substr(10);
    } else if (w.rfind("detail~\"", 0) == 0 && w.size() >= 9 &&
               w.back() == '"') {
      p.detail_substr = w.substr(8, w.size() - 9);
    } else {
      throw CheckInputError(lineno, "bad pattern field '" + w + "'");
    }
  }
  return p;
}

inline std::size_t find_then(const std::vector<std::string>& words,
                             std::size_t lineno) {
  for (std::size_t i = 0; i < words.size(); ++i)
    if (words[i] == "THEN") return i;
  throw CheckInputError(lineno, "missing THEN");
}

}  // namespace detail

inline std::vector<TraceAssertion> parse_assertions(const std::string& text) {
  std::vector<TraceAssertion> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    auto words = detail::split_assertion(line, lineno);
    TraceAssertion a;
    a.lineno = lineno;
    a.text = line.substr(b);
    const std::string& op = words[0];
    if (op == "EVENT_OCCURS") {
      a.kind = AssertKind::Occurs;
      a.first = detail::parse_pattern(words, 1, words.size(), lineno);
    } else if (op == "EVENT_ABSENT") {
      a.kind = AssertKind::Absent;
      a.first = detail::parse_pattern(words, 1, words.size(), lineno);
    } else if (op == "ORDERED_PAIR") {
      a.kind = AssertKind::OrderedPair;
      std::size_t then = detail::find_then(words, lineno);
      a.first = detail::parse_pattern(words, 1, then, lineno);
      a.second = detail::parse_pattern(words, then + 1, words.size(), lineno);
    } else if (op == "WITHIN_MS") {
      a.kind = AssertKind::WithinMs;
      if (words.size() < 2)
        throw CheckInputError(lineno, "WITHIN_MS needs a bound");
      try {
        a.bound_ms = std::stod(words[1]);
      } catch (const std::exception&) {
        throw CheckInputError(lineno, "bad bound '" + words[1] + "'");
      }
      std::size_t then = detail::find_then(words, lineno);
      a.first = detail::parse_pattern(words, 2, then, lineno);
      a.second = detail::parse_pattern(words, then + 1, words.size(), lineno);
    } else {
      throw CheckInputError(lineno, "unknown assertion '" + op + "'");
    }
    out.push_back(std::move(a));
  }
  return out;
}

struct CheckResult {
  bool pass = true;
  std::string violation;  // human-readable, mentions the first violating line
};

inline CheckResult check_assertion(const TraceAssertion& a,
                                   const std::vector<TraceLine>& trace) {
  auto first_match = [&](const EventPattern& p,
                         std::size_t from) -> std::optional<std::size_t> {
    for (std::size_t i = from; i < trace.size(); ++i)
      if (p.matches(trace[i])) return i;
    return std::nullopt;
  };
  CheckResult r;
  switch (a.kind) {
    case AssertKind::Occurs: {
      if (!first_match(a.first, 0)) {
        r.pass = false;
        r.violation = "no event matches " + a.first.str();
      }
      break;
    }
    case AssertKind::Absent: {
      auto hit = first_match(a.first, 0);
      if (hit) {
        r.pass = false;
        r.violation = "line " + std::to_string(trace[*hit].lineno) + ": " +
                      trace[*hit].raw;
      }
      break;
    }
    case AssertKind::OrderedPair: {
      auto ia = first_match(a.first, 0);
      auto ib = first_match(a.second, 0);
      if (!ia) {
        r.pass = false;
        r.violation = "no event matches " + a.first.str();
      } else if (!ib) {
        r.pass = false;
        r.violation = "no event matches " + a.second.str();
      } else if (*ib < *ia) {
        r.pass = false;
        r.violation = "line " + std::to_string(trace[*ib].lineno) + ": " +
                      trace[*ib].raw + " (second pattern occurs first)";
      }
      break;
    }
    case AssertKind::WithinMs: {
      bool any = false;
      for (std::size_t i = 0; i < trace.size(); ++i) {
        if (!a.first.matches(trace[i])) continue;
        any = true;
        bool ok = false;
        for (std::size_t j = i + 1; j < trace.size(); ++j) {
          if (!a.second.matches(trace[j])) continue;
          if (trace[j].time - trace[i].time <= a.bound_ms) ok = true;
          break;  // only the first follower counts
        }
        if (!ok) {
          r.pass = false;
          r.violation = "line " + std::to_string(trace[i].lineno) + ": " +
                        trace[i].raw + " (no match within " +
                        std::to_string(a.bound_ms) + " ms)";
          return r;
        }
      }
      if (!any) {
        r.pass = false;
        r.violation = "no event matches " + a.first.str();
      }
      break;
    }
  }
  return r;
}

// exit 0 = all pass, 1 = some assertion failed, 2 = malformed input
inline int run_check(const std::string& trace_text,
                     const std::string& assertions_text, std::ostream& out,
                     std::ostream& err) {
  std::vector<TraceLine> trace;
  std::vector<TraceAssertion> assertions;
  try {
    trace = parse_trace(trace_text);
    assertions = parse_assertions(assertions_text);
  } catch (const CheckInputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  int failures = 0;
  for (const auto& a : assertions) {
    CheckResult r = check_assertion(a, trace);
    if (r.pass) {
      out << "PASS  " << a.text << "\n";
    } else {
      ++failures;
      out << "FAIL  " << a.text << "\n      " << r.violation << "\n";
    }
  }
  out << (failures == 0 ? "all assertions passed"
                        : std::to_string(failures) + " assertion(s) failed")
      << " (" << assertions.size() << " total)\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace ariel
