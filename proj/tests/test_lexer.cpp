#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "ariel/lexer.hpp"

using namespace ariel;

TEST_CASE("guard line tokenizes into keywords, symbols and identifier") {
  auto toks = ariel::tokenize("IF [ FAULTY TASK {MYTASK} ]");
  REQUIRE(toks.size() == 8);
  CHECK(toks[0].is_keyword("IF"));
  CHECK(toks[1].is_symbol("["));
  CHECK(toks[2].is_keyword("FAULTY"));
  CHECK(toks[3].is_keyword("TASK"));
  CHECK(toks[4].is_symbol("{"));
  CHECK(toks[5].kind == TokenKind::Identifier);
  CHECK(toks[5].lexeme == "MYTASK");
  CHECK(toks[6].is_symbol("}"));
  CHECK(toks[7].is_symbol("]"));
}

TEST_CASE("keywords are case sensitive") {
  auto toks = ariel::tokenize("IF if If");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].kind == TokenKind::Keyword);
  CHECK(toks[1].kind == TokenKind::Identifier);
  CHECK(toks[2].kind == TokenKind::Identifier);
}

TEST_CASE("numbers split into integers and reals") {
  auto toks = ariel::tokenize("42 0 3.5 0.25");
  REQUIRE(toks.size() == 4);
  CHECK(toks[0].kind == TokenKind::Integer);
  CHECK(toks[1].kind == TokenKind::Integer);
  CHECK(toks[2].kind == TokenKind::Real);
  CHECK(toks[2].lexeme == "3.5");
  CHECK(toks[3].kind == TokenKind::Real);
}

TEST_CASE("string literals keep their quotes in the lexeme") {
  auto toks = ariel::tokenize("INCLUDE \"mydefinitions.h\"");
  REQUIRE(toks.size() == 2);
  CHECK(toks[1].kind == TokenKind::String);
  CHECK(toks[1].lexeme == "\"mydefinitions.h\"");
  CHECK(string_token_value(toks[1]) == "mydefinitions.h");
}

TEST_CASE("comments run to end of line") {
  auto toks = ariel::tokenize("IF # the guard\nFI");
  REQUIRE(toks.size() == 2);
  CHECK(toks[0].is_keyword("IF"));
  CHECK(toks[1].is_keyword("FI"));
  CHECK(toks[1].line == 2);
}

TEST_CASE("line and column are 1-based") {
  auto toks = ariel::tokenize("IF\n  TASK 3");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].line == 1);
  CHECK(toks[0].column == 1);
  CHECK(toks[1].line == 2);
  CHECK(toks[1].column == 3);
  CHECK(toks[2].column == 8);
}

TEST_CASE("double equals is one symbol, lone equals is an error") {
  auto toks = ariel::tokenize("PHASE T 3 == 2");
  REQUIRE(toks.size() == 5);
  CHECK(toks[3].is_symbol("=="));
  REQUIRE_THROWS_AS(ariel::tokenize("PHASE T 3 = 2"), LexError);
}

TEST_CASE("unterminated string raises LexError with position") {
  try {
    ariel::tokenize("INCLUDE \"oops");
    FAIL("expected LexError");
  } catch (const LexError& e) {
    CHECK(e.line == 1);
    CHECK(e.column == 9);
  }
}

TEST_CASE("unexpected character raises LexError") {
  REQUIRE_THROWS_AS(ariel::tokenize("IF $ FI"), LexError);
  REQUIRE_THROWS_AS(ariel::tokenize("SEND 1;"), LexError);
}

TEST_CASE("retokenizing the joined lexemes reproduces the token stream") {
  const char* src =
      "INCLUDE \"defs.h\"  # setup\n"
      "IF [ FAULTY TASK {MYTASK} AND NOT TRANSIENT TASK {MYTASK} ]\n"
      "THEN ISOLATE TASK {MYTASK} START TASK 12 SEND 9 GROUP 3\n"
      "ELSE RESTART TASK {MYTASK}\n"
      "FI\n"
      "WATCHDOG 1 WATCHES TASK 7 HEARTBEATS EVERY 150 MS\n"
      "ON ERROR WARN TASK 2 END WATCHDOG\n";
  auto first = ariel::tokenize(src);
  std::string joined;
  for (const Token& t : first) {
    joined += t.lexeme;
    joined += ' ';
  }
  auto second = ariel::tokenize(joined);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].kind == second[i].kind);
    CHECK(first[i].lexeme == second[i].lexeme);
  }
}
