#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ariel/errors.hpp"
#include "ariel/token.hpp"

namespace ariel {

namespace detail {

// Keywords are case-sensitive upper-case. N/T/G are the short entity
// prefixes, so single upper-case letters are not valid identifiers.
inline constexpr std::array<std::string_view, 37> kKeywords = {
    "ACTIVE",   "AND",       "CONSENSUS", "ELSE",    "END",     "ERROR",
    "EVERY",    "FAULTY",    "FI",        "G",       "GROUP",   "HEARTBEATS",
    "IF",       "INCLUDE",   "ISOLATE",   "ISOLATED", "MS",     "N",
    "NODE",     "NOT",       "ON",        "OR",      "PHASE",   "REPLICATED",
    "RESTART",  "RESTARTED", "RETRY",     "SEND",    "START",   "T",
    "TASK",     "TERMINATE", "THEN",      "TRANSIENT", "WARN",  "WATCHDOG",
    "WATCHES",
};

inline bool is_keyword(std::string_view word) {
  for (auto kw : kKeywords)
    if (kw == word) return true;
  return false;
}

inline bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
inline bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace detail

// Shell-like surface syntax: '#' comments to end of line, "..." strings,
// '{NAME}' constant references lex as '{' IDENT '}'. Every byte of the
// source is consumed as a token, whitespace or comment; anything else is
// a LexError.
inline std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  const std::size_t n = source.size();

  auto push = [&](TokenKind kind, std::size_t start, std::size_t len,
                  std::size_t tok_col) {
    tokens.push_back(
        {kind, std::string(source.substr(start, len)), line, tok_col});
  };

  while (i < n) {
    char c = source[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (c == '#') {  // comment to end of line
      while (i < n && source[i] != '\n') {
        ++i;
        ++col;
      }
      continue;
    }
    std::size_t tok_col = col;
    if (detail::is_ident_start(c)) {
      std::size_t start = i;
      while (i < n && detail::is_ident_char(source[i])) {
        ++i;
        ++col;
      }
      std::string_view word = source.substr(start, i - start);
      push(detail::is_keyword(word) ? TokenKind::Keyword
                                    : TokenKind::Identifier,
           start, i - start, tok_col);
      continue;
    }
    if (detail::is_digit(c)) {
      std::size_t start = i;
      while (i < n && detail::is_digit(source[i])) {
        ++i;
        ++col;
      }
      bool real = false;
      if (i + 1 < n && source[i] == '.' && detail::is_digit(source[i + 1])) {
        real = true;
        ++i;
        ++col;
        while (i < n && detail::is_digit(source[i])) {
          ++i;
          ++col;
        }
      }
      push(real ? TokenKind::Real : TokenKind::Integer, start, i - start,
           tok_col);
      continue;
    }
    if (c == '"') {
      std::size_t start = i;
      ++i;
      ++col;
      while (i < n && source[i] != '"' && source[i] != '\n') {
        ++i;
        ++col;
      }
      if (i >= n || source[i] != '"')
        throw LexError(line, tok_col, "unterminated string literal");
      ++i;
      ++col;
      push(TokenKind::String, start, i - start, tok_col);
      continue;
    }
    if (c == '[' || c == ']' || c == '{' || c == '}' || c == '(' ||
        c == ')') {
      push(TokenKind::Symbol, i, 1, tok_col);
      ++i;
      ++col;
      continue;
    }
    if (c == '=') {
      if (i + 1 < n && source[i + 1] == '=') {
        push(TokenKind::Symbol, i, 2, tok_col);
        i += 2;
        col += 2;
        continue;
      }
      throw LexError(line, tok_col, "expected '==' after '='");
    }
    throw LexError(line, tok_col,
                   std::string("character '") + c + "' starts no token");
  }
  return tokens;
}

// Unquoted value of a String token.
inline std::string string_token_value(const Token& tok) {
  return tok.lexeme.substr(1, tok.lexeme.size() - 2);
}

}  // namespace ariel
