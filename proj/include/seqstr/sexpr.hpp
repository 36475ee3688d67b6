// Minimal SMT-LIB s-expression reader.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seqstr/alphabet.hpp"

namespace seqstr {

/// Raised on malformed input; carries the byte offset and a line:column
/// rendering of it.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, size_t offset, size_t line = 0, size_t column = 0);
  size_t offset() const { return offset_; }
  size_t line() const { return line_; }
  size_t column() const { return column_; }

 private:
  size_t offset_;
  size_t line_;
  size_t column_;
};

struct SExpr {
  enum class Kind { Symbol, String, Numeral, List };
  Kind kind = Kind::List;
  std::string text;  // symbol name or numeral digits
  Word str;          // decoded string literal
  std::vector<SExpr> items;
  size_t offset = 0;

  bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
  bool is_list() const { return kind == Kind::List; }
  /// Head symbol of a list, or "" when absent.
  std::string_view head() const;
};

/// Parses every top-level s-expression in `src`. Comments start with ';'.
std::vector<SExpr> parse_sexprs(std::string_view src);

/// Builds a ParseError for `offset` in `src` with line/column filled in.
ParseError make_parse_error(std::string_view src, size_t offset, const std::string& msg);

/// Renders a word as an SMT-LIB 2.6 string literal (non-printables as \u{..}).
std::string smtlib_string_literal(std::u32string_view w);

}  // namespace seqstr
