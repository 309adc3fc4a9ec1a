#pragma once

#include <cstddef>
#include <string>

namespace ariel {

enum class TokenKind { Keyword, Identifier, Integer, Real, String, Symbol };

// lexeme is the exact source spelling (for String tokens it includes the
// quotes), so that tokens plus the skipped whitespace/comments reassemble
// the original buffer.
struct Token {
  TokenKind kind;
  std::string lexeme;
  std::size_t line;    // 1-based
  std::size_t column;  // 1-based, bytes

  bool is_keyword(const char* kw) const {
    return kind == TokenKind::Keyword && lexeme == kw;
  }
  bool is_symbol(const char* sym) const {
    return kind == TokenKind::Symbol && lexeme == sym;
  }
};

}  // namespace ariel
