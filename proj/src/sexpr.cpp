#include "seqstr/sexpr.hpp"

#include <cctype>
#include <sstream>

namespace seqstr {

ParseError::ParseError(const std::string& msg, size_t offset, size_t line, size_t column)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + msg : msg),
      offset_(offset),
      line_(line),
      column_(column) {}

ParseError make_parse_error(std::string_view src, size_t offset, const std::string& msg) {
  size_t line = 1;
  size_t col = 1;
  for (size_t i = 0; i < offset && i < src.size(); ++i) {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return ParseError(msg, offset, line, col);
}

std::string_view SExpr::head() const {
  if (kind != Kind::List || items.empty() || items[0].kind != Kind::Symbol) return {};
  return items[0].text;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view src) : src_(src) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip();
    while (pos_ < src_.size()) {
      out.push_back(read());
      skip();
    }
    return out;
  }

 private:
  void skip() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip();
    if (pos_ >= src_.size()) throw make_parse_error(src_, pos_, "unexpected end of input");
    SExpr e;
    e.offset = pos_;
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      e.kind = SExpr::Kind::List;
      skip();
      while (pos_ < src_.size() && src_[pos_] != ')') {
        e.items.push_back(read());
        skip();
      }
      if (pos_ >= src_.size()) throw make_parse_error(src_, e.offset, "unbalanced '('");
      ++pos_;
      return e;
    }
    if (c == ')') throw make_parse_error(src_, pos_, "unexpected ')'");
    if (c == '"') {
      e.kind = SExpr::Kind::String;
      e.str = read_string();
      return e;
    }
    if (c == '|') {
      size_t end = src_.find('|', pos_ + 1);
      if (end == std::string_view::npos) throw make_parse_error(src_, pos_, "unterminated quoted symbol");
      e.kind = SExpr::Kind::Symbol;
      e.text = std::string(src_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return e;
    }
    size_t start = pos_;
    while (pos_ < src_.size()) {
      char d = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == '"' || d == ';') break;
      ++pos_;
    }
    e.text = std::string(src_.substr(start, pos_ - start));
    bool numeral = !e.text.empty();
    for (char d : e.text) numeral = numeral && std::isdigit(static_cast<unsigned char>(d));
    e.kind = numeral ? SExpr::Kind::Numeral : SExpr::Kind::Symbol;
    return e;
  }

  // SMT-LIB 2.6 literal: "" is a quote; \u{h..h} and \uhhhh are codepoints.
  Word read_string() {
    size_t start = pos_;
    ++pos_;
    std::string raw;
    while (true) {
      if (pos_ >= src_.size()) throw make_parse_error(src_, start, "unterminated string literal");
      char c = src_[pos_];
      if (c == '"') {
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '"') {
          raw.push_back('"');
          pos_ += 2;
          continue;
        }
        ++pos_;
        break;
      }
      raw.push_back(c);
      ++pos_;
    }
    Word decoded;
    Word w = from_utf8(raw);
    for (size_t i = 0; i < w.size(); ++i) {
      if (w[i] == '\\' && i + 1 < w.size() && w[i + 1] == 'u') {
        size_t j = i + 2;
        std::string hex;
        bool braced = j < w.size() && w[j] == '{';
        if (braced) {
          ++j;
          while (j < w.size() && w[j] != '}' && hex.size() < 6) hex.push_back(static_cast<char>(w[j++]));
          if (j < w.size() && w[j] == '}' && !hex.empty() && is_hex(hex)) {
            decoded.push_back(static_cast<Symbol>(std::stoul(hex, nullptr, 16)));
            i = j;
            continue;
          }
        } else {
          while (j < w.size() && hex.size() < 4) hex.push_back(static_cast<char>(w[j++]));
          if (hex.size() == 4 && is_hex(hex)) {
            decoded.push_back(static_cast<Symbol>(std::stoul(hex, nullptr, 16)));
            i = j - 1;
            continue;
          }
        }
      }
      decoded.push_back(w[i]);
    }
    for (Symbol c : decoded)
      if (c > kMaxChar) throw make_parse_error(src_, start, "codepoint out of range in string literal");
    return decoded;
  }

  static bool is_hex(const std::string& s) {
    for (char c : s)
      if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
    return true;
  }

  std::string_view src_;
  size_t pos_ = 0;
};

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view src) { return Reader(src).read_all(); }

std::string smtlib_string_literal(std::u32string_view w) {
  std::string out = "\"";
  for (Symbol c : w) {
    if (c == '"') {
      out += "\"\"";
    } else if (c == '\\') {
      // A backslash followed by 'u' would be read back as an escape.
      out += "\\u{5c}";
    } else if (c >= 0x20 && c < 0x7F) {
      out.push_back(static_cast<char>(c));
    } else {
      std::ostringstream hex;
      hex << std::hex << static_cast<uint32_t>(c);
      out += "\\u{" + hex.str() + "}";
    }
  }
  out += "\"";
  return out;
}

}  // namespace seqstr
