#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ariel {

// All front-end errors carry a 1-based source position so the CLI can
// print "line:col: message" diagnostics.

class LexError : public std::runtime_error {
 public:
  LexError(std::size_t line, std::size_t column, std::string what_arg)
      : std::runtime_error(std::move(what_arg)), line(line), column(column) {}
  std::size_t line;
  std::size_t column;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string expected, std::string what_arg)
      : std::runtime_error(std::move(what_arg)),
        line(line),
        expected(std::move(expected)) {}
  std::size_t line;
  std::string expected;  // human-readable expected-set
};

class UnresolvedConstant : public ParseError {
 public:
  UnresolvedConstant(std::size_t line, std::string name)
      : ParseError(line, "defined constant",
                   "unresolved constant {" + name + "}"),
        name(std::move(name)) {}
  std::string name;
};

// Recognized keywords with no implemented semantics (RETRY, CONSENSUS).
class UnsupportedConstruct : public ParseError {
 public:
  UnsupportedConstruct(std::size_t line, std::string keyword)
      : ParseError(line, "supported construct",
                   keyword + " blocks are recognized but not supported"),
        keyword(std::move(keyword)) {}
  std::string keyword;
};

class DuplicateConstant : public std::runtime_error {
 public:
  DuplicateConstant(std::string name, std::size_t line)
      : std::runtime_error("duplicate constant definition: " + name),
        name(std::move(name)),
        line(line) {}
  std::string name;
  std::size_t line;
};

class MalformedDefine : public std::runtime_error {
 public:
  MalformedDefine(std::size_t line, std::string what_arg)
      : std::runtime_error(std::move(what_arg)), line(line) {}
  std::size_t line;
};

class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::size_t offset, std::string reason)
      : std::runtime_error("decode error at offset " + std::to_string(offset) +
                           ": " + reason),
        offset(offset),
        reason(std::move(reason)) {}
  std::size_t offset;
  std::string reason;
};

class VmFault : public std::runtime_error {
 public:
  VmFault(std::size_t pc, std::string reason)
      : std::runtime_error("vm fault at pc " + std::to_string(pc) + ": " +
                           reason),
        pc(pc),
        reason(std::move(reason)) {}
  std::size_t pc;
  std::string reason;
};

class UnknownTimeout : public std::runtime_error {
 public:
  explicit UnknownTimeout(std::int64_t id)
      : std::runtime_error("unknown timeout id " + std::to_string(id)),
        id(id) {}
  std::int64_t id;
};

class ScheduleInPast : public std::runtime_error {
 public:
  ScheduleInPast(double at, double now)
      : std::runtime_error("schedule at " + std::to_string(at) +
                           " before now " + std::to_string(now)) {}
};

class EmptyQueue : public std::runtime_error {
 public:
  EmptyQueue() : std::runtime_error("event queue exhausted") {}
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::size_t line, std::string what_arg)
      : std::runtime_error("scenario line " + std::to_string(line) + ": " +
                           what_arg),
        line(line) {}
  std::size_t line;
};

}  // namespace ariel
