#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ariel/ast.hpp"
#include "ariel/constants.hpp"
#include "ariel/errors.hpp"
#include "ariel/lexer.hpp"
#include "ariel/token.hpp"

namespace ariel {

// Loads the contents of an INCLUDE'd definitions file. Returns nullopt if
// the file cannot be found; the parser reports that as a ParseError.
using IncludeLoader =
    std::function<std::optional<std::string>(const std::string& path)>;

// Recursive-descent parser for the recovery/configuration language.
//
//   program    := { INCLUDE string | if-clause | watchdog-block
//                 | replicated-block }
//   if-clause  := IF '[' guard ']' THEN { action | if-clause }
//                 [ ELSE { action | if-clause } ] FI
//   guard      := term { OR term }
//   term       := factor { AND factor }
//   factor     := NOT factor | '(' guard ')' | predicate
//   predicate  := (FAULTY|TRANSIENT|ISOLATED|RESTARTED|ACTIVE) entity
//               | PHASE entity '==' integer
//   entity     := (NODE|TASK|GROUP) intref | N integer | T integer
//               | G integer
//   intref     := integer | '{' identifier '}'
//   action     := (RESTART|TERMINATE|ISOLATE|START) entity
//               | SEND intref entity | WARN entity
//   watchdog-block   := WATCHDOG intref WATCHES TASK intref
//                       HEARTBEATS EVERY intref MS
//                       ON ERROR WARN TASK intref END WATCHDOG
//   replicated-block := REPLICATED entity { entity } END REPLICATED
//                       (first entity names the group, the rest its
//                        member tasks)
//
// INCLUDE statements are resolved in source order, so a {NAME} reference
// is legal only after the statement that defines NAME. RETRY and
// CONSENSUS are reserved and rejected with UnsupportedConstruct.
class Parser {
 public:
  Parser(std::vector<Token> tokens, ConstantTable constants,
         IncludeLoader loader = {})
      : tokens_(std::move(tokens)),
        constants_(std::move(constants)),
        loader_(std::move(loader)) {}

  ParsedProgram parse_program() {
    ParsedProgram out;
    while (!at_end()) {
      const Token& tok = peek();
      if (tok.is_keyword("INCLUDE")) {
        parse_include();
      } else if (tok.is_keyword("IF")) {
        out.recovery.push_back(parse_if_clause());
      } else if (tok.is_keyword("WATCHDOG")) {
        out.configs.push_back(parse_watchdog_block());
      } else if (tok.is_keyword("REPLICATED")) {
        out.configs.push_back(parse_replicated_block());
      } else if (tok.is_keyword("RETRY") || tok.is_keyword("CONSENSUS")) {
        throw UnsupportedConstruct(tok.line, tok.lexeme);
      } else {
        fail("INCLUDE, IF, WATCHDOG or REPLICATED");
      }
    }
    return out;
  }

  const ConstantTable& constants() const { return constants_; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  ConstantTable constants_;
  IncludeLoader loader_;

  bool at_end() const { return pos_ >= tokens_.size(); }

  const Token& peek() const { return tokens_[pos_]; }

  std::size_t here_line() const {
    if (!at_end()) return peek().line;
    return tokens_.empty() ? 1 : tokens_.back().line;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    std::string got = at_end() ? "end of input" : "'" + peek().lexeme + "'";
    throw ParseError(here_line(), expected,
                     "expected " + expected + ", got " + got);
  }

  const Token& advance() {
    if (at_end()) fail("more input");
    return tokens_[pos_++];
  }

  const Token& expect_keyword(const char* kw) {
    if (at_end() || !peek().is_keyword(kw)) fail(std::string("'") + kw + "'");
    return advance();
  }

  const Token& expect_symbol(const char* sym) {
    if (at_end() || !peek().is_symbol(sym)) fail(std::string("'") + sym + "'");
    return advance();
  }

  std::uint32_t to_entity_id(std::int64_t v, std::size_t line) {
    if (v < 0 || v > 0xFFFFFFFFll)
      throw ParseError(line, "non-negative integer id",
                       "id " + std::to_string(v) + " out of range");
    return static_cast<std::uint32_t>(v);
  }

  std::uint32_t parse_bare_integer() {
    if (at_end() || peek().kind != TokenKind::Integer) fail("integer");
    const Token& tok = advance();
    return to_entity_id(std::stoll(tok.lexeme), tok.line);
  }

  // integer | '{' identifier '}'
  std::uint32_t parse_intref() {
    if (!at_end() && peek().kind == TokenKind::Integer)
      return parse_bare_integer();
    if (!at_end() && peek().is_symbol("{")) {
      advance();
      if (at_end() || peek().kind != TokenKind::Identifier)
        fail("constant name");
      const Token& name = advance();
      expect_symbol("}");
      auto it = constants_.find(name.lexeme);
      if (it == constants_.end())
        throw UnresolvedConstant(name.line, name.lexeme);
      return to_entity_id(it->second, name.line);
    }
    if (!at_end() && peek().kind == TokenKind::Real)
      throw ParseError(peek().line, "integer",
                       "real literals are not valid here");
    fail("integer or {NAME}");
  }

  EntityRef parse_entity() {
    if (at_end()) fail("entity");
    const Token& tok = peek();
    if (tok.is_keyword("NODE")) {
      advance();
      return node_ref(parse_intref());
    }
    if (tok.is_keyword("TASK")) {
      advance();
      return task_ref(parse_intref());
    }
    if (tok.is_keyword("GROUP")) {
      advance();
      return group_ref(parse_intref());
    }
    if (tok.is_keyword("N")) {
      advance();
      return node_ref(parse_bare_integer());
    }
    if (tok.is_keyword("T")) {
      advance();
      return task_ref(parse_bare_integer());
    }
    if (tok.is_keyword("G")) {
      advance();
      return group_ref(parse_bare_integer());
    }
    fail("NODE, TASK, GROUP, N, T or G");
  }

  void parse_include() {
    expect_keyword("INCLUDE");
    if (at_end() || peek().kind != TokenKind::String) fail("file name string");
    const Token& path_tok = advance();
    std::string path = string_token_value(path_tok);
    std::optional<std::string> contents =
        loader_ ? loader_(path) : std::nullopt;
    if (!contents)
      throw ParseError(path_tok.line, "readable definitions file",
                       "cannot resolve INCLUDE \"" + path + "\"");
    merge_constants(constants_, *contents);
  }

  Guard parse_guard() {
    Guard lhs = parse_term();
    while (!at_end() && peek().is_keyword("OR")) {
      advance();
      Guard rhs = parse_term();
      lhs = Guard{GuardOr{make_guard(std::move(lhs)),
                          make_guard(std::move(rhs))}};
    }
    return lhs;
  }

  Guard parse_term() {
    Guard lhs = parse_factor();
    while (!at_end() && peek().is_keyword("AND")) {
      advance();
      Guard rhs = parse_factor();
      lhs = Guard{GuardAnd{make_guard(std::move(lhs)),
                           make_guard(std::move(rhs))}};
    }
    return lhs;
  }

  Guard parse_factor() {
    if (at_end()) fail("guard");
    if (peek().is_keyword("NOT")) {
      advance();
      return Guard{GuardNot{make_guard(parse_factor())}};
    }
    if (peek().is_symbol("(")) {
      advance();
      Guard inner = parse_guard();
      expect_symbol(")");
      return inner;
    }
    return parse_predicate();
  }

  Guard parse_predicate() {
    static const std::pair<const char*, PredKind> kPreds[] = {
        {"FAULTY", PredKind::Faulty},       {"TRANSIENT", PredKind::Transient},
        {"ISOLATED", PredKind::Isolated},   {"RESTARTED", PredKind::Restarted},
        {"ACTIVE", PredKind::Active},
    };
    if (at_end()) fail("predicate");
    for (const auto& [kw, kind] : kPreds) {
      if (peek().is_keyword(kw)) {
        advance();
        return Guard{GuardPred{kind, parse_entity()}};
      }
    }
    if (peek().is_keyword("PHASE")) {
      advance();
      EntityRef e = parse_entity();
      expect_symbol("==");
      std::uint32_t phase = parse_bare_integer();
      return Guard{GuardPhaseEq{e, phase}};
    }
    fail("FAULTY, TRANSIENT, ISOLATED, RESTARTED, ACTIVE or PHASE");
  }

  std::vector<ActionStmt> parse_branch_body(bool& saw_else) {
    std::vector<ActionStmt> body;
    saw_else = false;
    while (!at_end()) {
      const Token& tok = peek();
      if (tok.is_keyword("FI")) return body;
      if (tok.is_keyword("ELSE")) {
        saw_else = true;
        return body;
      }
      if (tok.is_keyword("IF")) {
        body.push_back(ActionStmt{parse_if_clause()});
        continue;
      }
      body.push_back(ActionStmt{parse_action()});
    }
    fail("action, IF, ELSE or FI");
  }

  GuardedAction parse_if_clause() {
    expect_keyword("IF");
    expect_symbol("[");
    Guard guard = parse_guard();
    expect_symbol("]");
    expect_keyword("THEN");
    GuardedAction clause{std::move(guard), {}, {}};
    bool saw_else = false;
    clause.then_branch = parse_branch_body(saw_else);
    if (saw_else) {
      expect_keyword("ELSE");
      bool nested_else = false;
      clause.else_branch = parse_branch_body(nested_else);
      if (nested_else) fail("FI");
    }
    expect_keyword("FI");
    return clause;
  }

  SimpleAction parse_action() {
    static const std::pair<const char*, ActionVerb> kVerbs[] = {
        {"RESTART", ActionVerb::Restart},
        {"TERMINATE", ActionVerb::Terminate},
        {"ISOLATE", ActionVerb::Isolate},
        {"START", ActionVerb::Start},
    };
    if (at_end()) fail("action");
    std::size_t line = peek().line;
    for (const auto& [kw, verb] : kVerbs) {
      if (peek().is_keyword(kw)) {
        advance();
        EntityRef target = parse_entity();
        if (verb == ActionVerb::Isolate &&
            target.kind == EntityKind::Group)
          throw ParseError(line, "task or node",
                           "ISOLATE cannot target a group");
        return SimpleAction{verb, target};
      }
    }
    if (peek().is_keyword("SEND")) {
      advance();
      std::uint32_t payload = parse_intref();
      EntityRef target = parse_entity();
      if (target.kind == EntityKind::Node)
        throw ParseError(line, "task or group",
                         "SEND cannot target a node");
      return SimpleAction{ActionVerb::Send, target, payload};
    }
    if (peek().is_keyword("WARN")) {
      advance();
      EntityRef target = parse_entity();
      if (target.kind == EntityKind::Node)
        throw ParseError(line, "task or group",
                         "WARN cannot target a node");
      return SimpleAction{ActionVerb::Warn, target};
    }
    fail("RESTART, TERMINATE, ISOLATE, START, SEND or WARN");
  }

  BTConfig parse_watchdog_block() {
    std::size_t line = peek().line;
    expect_keyword("WATCHDOG");
    WatchdogConfig wd;
    wd.wid = parse_intref();
    expect_keyword("WATCHES");
    expect_keyword("TASK");
    wd.watched = task_ref(parse_intref());
    expect_keyword("HEARTBEATS");
    expect_keyword("EVERY");
    wd.period_ms = parse_intref();
    expect_keyword("MS");
    expect_keyword("ON");
    expect_keyword("ERROR");
    expect_keyword("WARN");
    expect_keyword("TASK");
    wd.warn_target = task_ref(parse_intref());
    expect_keyword("END");
    expect_keyword("WATCHDOG");
    if (wd.period_ms == 0)
      throw ParseError(line, "positive heartbeat period",
                       "watchdog period must be > 0 ms");
    return wd;
  }

  BTConfig parse_replicated_block() {
    std::size_t line = peek().line;
    expect_keyword("REPLICATED");
    ReplicatedGroupConfig rg;
    rg.group = parse_entity();
    if (rg.group.kind != EntityKind::Group)
      throw ParseError(line, "group entity",
                       "REPLICATED must name a group first");
    while (!at_end() && !peek().is_keyword("END"))
      rg.members.push_back(parse_entity());
    expect_keyword("END");
    expect_keyword("REPLICATED");
    std::set<std::uint32_t> ids;
    for (EntityRef m : rg.members) {
      if (m.kind != EntityKind::Task)
        throw ParseError(line, "task members",
                         "replicated group members must be tasks");
      ids.insert(m.id);
    }
    if (rg.members.size() < 2 || ids.size() != rg.members.size())
      throw ParseError(line, ">= 2 distinct member tasks",
                       "replicated group needs at least 2 distinct members");
    return rg;
  }
};

inline ParsedProgram parse(std::vector<Token> tokens, ConstantTable constants,
                           IncludeLoader loader = {}) {
  Parser p(std::move(tokens), std::move(constants), std::move(loader));
  return p.parse_program();
}

}  // namespace ariel
