#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "ariel/errors.hpp"

namespace ariel {

// Symbolic constants imported from C-style header files. Only
// "#define NAME <integer>" lines contribute; everything else is ignored.
using ConstantTable = std::map<std::string, std::int64_t>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline void merge_constants(ConstantTable& into, std::string_view header) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= header.size()) {
    std::size_t eol = header.find('\n', pos);
    std::string_view line = header.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos
                                           : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? header.size() + 1 : eol + 1;

    std::string_view t = detail::trim(line);
    constexpr std::string_view kDefine = "#define";
    if (t.substr(0, kDefine.size()) != kDefine) continue;
    t = detail::trim(t.substr(kDefine.size()));
    std::size_t name_end = 0;
    while (name_end < t.size() && t[name_end] != ' ' && t[name_end] != '\t')
      ++name_end;
    std::string name(t.substr(0, name_end));
    std::string_view value = detail::trim(t.substr(name_end));
    if (name.empty() || value.empty())
      throw MalformedDefine(line_no, "#define needs a name and a value");

    std::int64_t v = 0;
    bool neg = false;
    std::size_t vi = 0;
    if (value[0] == '-') {
      neg = true;
      vi = 1;
    }
    if (vi >= value.size())
      throw MalformedDefine(line_no, "non-integer #define value");
    for (; vi < value.size(); ++vi) {
      char c = value[vi];
      if (c < '0' || c > '9')
        throw MalformedDefine(line_no, "non-integer #define value '" +
                                           std::string(value) + "'");
      v = v * 10 + (c - '0');
    }
    if (neg) v = -v;

    if (into.count(name)) throw DuplicateConstant(name, line_no);
    into.emplace(std::move(name), v);
  }
}

inline ConstantTable extract_constants(std::string_view header) {
  ConstantTable table;
  merge_constants(table, header);
  return table;
}

}  // namespace ariel
