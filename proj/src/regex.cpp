#include "seqstr/regex.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace seqstr {

struct Regex::Node {
  RegexKind kind = RegexKind::Empty;
  Symbol lo = 0;
  Symbol hi = 0;
  Regex left;
  Regex right;
  Node() = default;
};

Regex::Regex() : node_(nullptr) {}

Regex Regex::empty() { return Regex(); }

Regex Regex::epsilon() {
  auto n = std::make_shared<Node>();
  n->kind = RegexKind::Epsilon;
  return Regex(n);
}

Regex Regex::range(Symbol lo, Symbol hi) {
  if (lo > hi) throw std::invalid_argument("regex range with lo > hi");
  if (hi > kMaxChar) throw std::invalid_argument("regex range outside the alphabet");
  auto n = std::make_shared<Node>();
  n->kind = RegexKind::Range;
  n->lo = lo;
  n->hi = hi;
  return Regex(n);
}

Regex Regex::union_of(Regex a, Regex b) {
  auto n = std::make_shared<Node>();
  n->kind = RegexKind::Union;
  n->left = std::move(a);
  n->right = std::move(b);
  return Regex(n);
}

Regex Regex::concat(Regex a, Regex b) {
  auto n = std::make_shared<Node>();
  n->kind = RegexKind::Concat;
  n->left = std::move(a);
  n->right = std::move(b);
  return Regex(n);
}

Regex Regex::star(Regex a) {
  auto n = std::make_shared<Node>();
  n->kind = RegexKind::Star;
  n->left = std::move(a);
  return Regex(n);
}

Regex Regex::complement(Regex a) {
  auto n = std::make_shared<Node>();
  n->kind = RegexKind::Complement;
  n->left = std::move(a);
  return Regex(n);
}

Regex Regex::literal(std::u32string_view w) {
  if (w.empty()) return epsilon();
  Regex r = symbol(w[0]);
  for (size_t i = 1; i < w.size(); ++i) r = concat(r, symbol(w[i]));
  return r;
}

Regex Regex::intersection(Regex a, Regex b) {
  return complement(union_of(complement(std::move(a)), complement(std::move(b))));
}

Regex Regex::loop(const Regex& a, int lo, int hi) {
  if (lo < 0 || (hi >= 0 && hi < lo)) throw std::invalid_argument("invalid loop bounds");
  Regex result = epsilon();
  bool first = true;
  auto append = [&](const Regex& r) {
    result = first ? r : concat(result, r);
    first = false;
  };
  for (int i = 0; i < lo; ++i) append(a);
  if (hi < 0) {
    append(star(a));
  } else if (hi > lo) {
    // a? (a? (...)) nested so the optional copies are ordered.
    Regex tail = opt(a);
    for (int i = lo + 1; i < hi; ++i) tail = opt(concat(a, tail));
    append(tail);
  }
  return result;
}

Regex Regex::char_class(const std::vector<CharRange>& ranges) {
  std::vector<CharRange> sorted;
  for (const auto& r : ranges)
    if (!r.empty()) sorted.push_back(r);
  std::sort(sorted.begin(), sorted.end());
  std::vector<CharRange> merged;
  for (const auto& r : sorted) {
    if (!merged.empty() && r.lo <= merged.back().hi + 1) {
      merged.back().hi = std::max(merged.back().hi, r.hi);
    } else {
      merged.push_back(r);
    }
  }
  if (merged.empty()) return empty();
  Regex out = range(merged[0].lo, merged[0].hi);
  for (size_t i = 1; i < merged.size(); ++i) out = union_of(out, range(merged[i].lo, merged[i].hi));
  return out;
}

RegexKind Regex::kind() const { return node_ ? node_->kind : RegexKind::Empty; }
Symbol Regex::lo() const { return node_ ? node_->lo : 0; }
Symbol Regex::hi() const { return node_ ? node_->hi : 0; }

const Regex& Regex::left() const {
  if (!node_) throw std::logic_error("Regex::left on a leaf");
  return node_->left;
}

const Regex& Regex::right() const {
  if (!node_) throw std::logic_error("Regex::right on a leaf");
  return node_->right;
}

int Regex::depth() const {
  switch (kind()) {
    case RegexKind::Empty:
    case RegexKind::Epsilon:
    case RegexKind::Range:
      return 0;
    case RegexKind::Star:
    case RegexKind::Complement:
      return 1 + left().depth();
    case RegexKind::Union:
    case RegexKind::Concat:
      return 1 + std::max(left().depth(), right().depth());
  }
  return 0;
}

bool Regex::nullable() const {
  switch (kind()) {
    case RegexKind::Empty:
    case RegexKind::Range:
      return false;
    case RegexKind::Epsilon:
    case RegexKind::Star:
      return true;
    case RegexKind::Union:
      return left().nullable() || right().nullable();
    case RegexKind::Concat:
      return left().nullable() && right().nullable();
    case RegexKind::Complement:
      return !left().nullable();
  }
  return false;
}

bool operator==(const Regex& a, const Regex& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case RegexKind::Empty:
    case RegexKind::Epsilon:
      return true;
    case RegexKind::Range:
      return a.lo() == b.lo() && a.hi() == b.hi();
    case RegexKind::Star:
    case RegexKind::Complement:
      return a.left() == b.left();
    case RegexKind::Union:
    case RegexKind::Concat:
      return a.left() == b.left() && a.right() == b.right();
  }
  return false;
}

// ---------------------------------------------------------------------------
// Classic printer

namespace {

bool is_special(Symbol c) {
  static const std::u32string specials = U"\\()[]{}|*+?.~^$-";
  return specials.find(c) != std::u32string::npos;
}

void print_symbol(std::string& out, Symbol c, bool in_class) {
  if (c < 0x20 || c == 0x7F || c > 0x7E) {
    if (c > 0x7E && c != 0x7F) {
      // Printable non-ASCII is emitted as UTF-8 unless it is a separator.
      if (c <= kMaxChar && c >= 0xA0) {
        append_utf8(out, c);
        return;
      }
    }
    std::ostringstream hex;
    hex << std::hex << static_cast<uint32_t>(c);
    out += "\\x{" + hex.str() + "}";
    return;
  }
  if (is_special(c) || (in_class && c == ' ')) {
    out.push_back('\\');
  }
  out.push_back(static_cast<char>(c));
}

void print_classic(const Regex& r, std::string& out);

void print_wrapped(const Regex& r, std::string& out, bool wrap) {
  if (wrap) out.push_back('(');
  print_classic(r, out);
  if (wrap) out.push_back(')');
}

void print_classic(const Regex& r, std::string& out) {
  switch (r.kind()) {
    case RegexKind::Empty:
      out += "[]";
      return;
    case RegexKind::Epsilon:
      out += "()";
      return;
    case RegexKind::Range:
      if (r.lo() == r.hi()) {
        print_symbol(out, r.lo(), false);
      } else {
        out.push_back('[');
        print_symbol(out, r.lo(), true);
        out.push_back('-');
        print_symbol(out, r.hi(), true);
        out.push_back(']');
      }
      return;
    case RegexKind::Union:
      print_wrapped(r.left(), out, false);
      out.push_back('|');
      print_wrapped(r.right(), out, r.right().kind() == RegexKind::Union);
      return;
    case RegexKind::Concat:
      print_wrapped(r.left(), out, r.left().kind() == RegexKind::Union);
      print_wrapped(r.right(), out,
                    r.right().kind() == RegexKind::Union || r.right().kind() == RegexKind::Concat);
      return;
    case RegexKind::Star:
      print_wrapped(r.left(), out,
                    r.left().kind() == RegexKind::Union || r.left().kind() == RegexKind::Concat ||
                        r.left().kind() == RegexKind::Complement);
      out.push_back('*');
      return;
    case RegexKind::Complement:
      out += "~(";
      print_classic(r.left(), out);
      out.push_back(')');
      return;
  }
}

void print_smtlib(const Regex& r, std::string& out) {
  switch (r.kind()) {
    case RegexKind::Empty:
      out += "re.none";
      return;
    case RegexKind::Epsilon:
      out += "(str.to_re \"\")";
      return;
    case RegexKind::Range:
      if (r.lo() == r.hi()) {
        out += "(str.to_re " + smtlib_string_literal(std::u32string(1, r.lo())) + ")";
      } else {
        out += "(re.range " + smtlib_string_literal(std::u32string(1, r.lo())) + " " +
               smtlib_string_literal(std::u32string(1, r.hi())) + ")";
      }
      return;
    case RegexKind::Union:
    case RegexKind::Concat:
      out += r.kind() == RegexKind::Union ? "(re.union " : "(re.++ ";
      print_smtlib(r.left(), out);
      out.push_back(' ');
      print_smtlib(r.right(), out);
      out.push_back(')');
      return;
    case RegexKind::Star:
    case RegexKind::Complement:
      out += r.kind() == RegexKind::Star ? "(re.* " : "(re.comp ";
      print_smtlib(r.left(), out);
      out.push_back(')');
      return;
  }
}

}  // namespace

std::string Regex::to_string() const {
  std::string out;
  print_classic(*this, out);
  return out;
}

std::string Regex::to_smtlib() const {
  std::string out;
  print_smtlib(*this, out);
  return out;
}

// ---------------------------------------------------------------------------
// Classic parser

namespace {

std::vector<CharRange> complement_ranges(std::vector<CharRange> ranges) {
  std::sort(ranges.begin(), ranges.end());
  std::vector<CharRange> out;
  Symbol next = 0;
  for (const auto& r : ranges) {
    if (r.lo > next) out.push_back({next, r.lo - 1});
    if (r.hi + 1 > next) next = r.hi + 1;
  }
  if (next <= kMaxChar) out.push_back({next, kMaxChar});
  return out;
}

const std::vector<CharRange>& digit_ranges() {
  static const std::vector<CharRange> r{{'0', '9'}};
  return r;
}
const std::vector<CharRange>& word_ranges() {
  static const std::vector<CharRange> r{{'0', '9'}, {'A', 'Z'}, {'_', '_'}, {'a', 'z'}};
  return r;
}
const std::vector<CharRange>& space_ranges() {
  static const std::vector<CharRange> r{{'\t', '\r'}, {' ', ' '}};
  return r;
}

class ClassicParser {
 public:
  explicit ClassicParser(std::string_view src) : src_(src), text_(from_utf8(src)) {}

  Regex parse() {
    Regex r = parse_alt();
    if (pos_ < text_.size()) fail("unexpected '" + to_utf8(text_.substr(pos_, 1)) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    // Report byte offsets: re-encode the consumed prefix.
    size_t bytes = to_utf8(std::u32string_view(text_).substr(0, pos_)).size();
    throw make_parse_error(src_, bytes, "regex: " + msg);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  Symbol peek() const { return text_[pos_]; }

  Regex parse_alt() {
    Regex r = parse_concat();
    while (!at_end() && peek() == '|') {
      ++pos_;
      r = Regex::union_of(r, parse_concat());
    }
    return r;
  }

  Regex parse_concat() {
    std::optional<Regex> r;
    while (!at_end() && peek() != '|' && peek() != ')') {
      Regex next = parse_repeat();
      r = r ? Regex::concat(*r, next) : next;
    }
    return r ? *r : Regex::epsilon();
  }

  Regex parse_repeat() {
    Regex r = parse_prefix();
    while (!at_end()) {
      Symbol c = peek();
      if (c == '*') {
        ++pos_;
        r = Regex::star(r);
      } else if (c == '+') {
        ++pos_;
        r = Regex::plus(r);
      } else if (c == '?') {
        ++pos_;
        r = Regex::opt(r);
      } else if (c == '{') {
        size_t save = pos_;
        ++pos_;
        int lo = parse_int();
        int hi = lo;
        if (!at_end() && peek() == ',') {
          ++pos_;
          hi = (!at_end() && peek() == '}') ? -1 : parse_int();
        }
        if (at_end() || peek() != '}') {
          pos_ = save;
          fail("malformed repetition");
        }
        ++pos_;
        if (hi >= 0 && hi < lo) {
          pos_ = save;
          fail("repetition bounds out of order");
        }
        r = Regex::loop(r, lo, hi);
      } else {
        break;
      }
    }
    return r;
  }

  int parse_int() {
    if (at_end() || peek() < '0' || peek() > '9') fail("expected a number");
    int v = 0;
    while (!at_end() && peek() >= '0' && peek() <= '9') {
      v = v * 10 + static_cast<int>(peek() - '0');
      if (v > 10000) fail("repetition bound too large");
      ++pos_;
    }
    return v;
  }

  Regex parse_prefix() {
    if (!at_end() && peek() == '~') {
      ++pos_;
      return Regex::complement(parse_prefix());
    }
    return parse_atom();
  }

  Regex parse_atom() {
    if (at_end()) fail("unexpected end of regex");
    Symbol c = peek();
    switch (c) {
      case '(': {
        ++pos_;
        Regex r = parse_alt();
        if (at_end() || peek() != ')') fail("missing ')'");
        ++pos_;
        return r;
      }
      case '[':
        return parse_class();
      case '.':
        ++pos_;
        return Regex::any_char();
      case '\\': {
        std::vector<CharRange> ranges = parse_escape(false);
        return Regex::char_class(ranges);
      }
      case '*':
      case '+':
      case '?':
      case '{':
        fail("repetition without operand");
      case ')':
      case '|':
        fail("unexpected '" + std::string(1, static_cast<char>(c)) + "'");
      default:
        ++pos_;
        return Regex::symbol(c);
    }
  }

  // Returns the ranges denoted by an escape starting at '\'.
  std::vector<CharRange> parse_escape(bool in_class) {
    (void)in_class;
    ++pos_;
    if (at_end()) fail("dangling '\\'");
    Symbol c = peek();
    ++pos_;
    switch (c) {
      case 'd':
        return digit_ranges();
      case 'D':
        return complement_ranges(digit_ranges());
      case 'w':
        return word_ranges();
      case 'W':
        return complement_ranges(word_ranges());
      case 's':
        return space_ranges();
      case 'S':
        return complement_ranges(space_ranges());
      case 'n':
        return {{'\n', '\n'}};
      case 't':
        return {{'\t', '\t'}};
      case 'r':
        return {{'\r', '\r'}};
      case 'f':
        return {{'\f', '\f'}};
      case 'v':
        return {{'\v', '\v'}};
      case 'x':
      case 'u': {
        std::string hex;
        if (!at_end() && peek() == '{') {
          ++pos_;
          while (!at_end() && peek() != '}') hex.push_back(static_cast<char>(text_[pos_++]));
          if (at_end()) fail("unterminated \\x{...}");
          ++pos_;
        } else {
          size_t n = c == 'x' ? 2 : 4;
          while (!at_end() && hex.size() < n) hex.push_back(static_cast<char>(text_[pos_++]));
        }
        if (hex.empty() || hex.size() > 6 ||
            !std::all_of(hex.begin(), hex.end(), [](char h) { return std::isxdigit(static_cast<unsigned char>(h)); }))
          fail("malformed hexadecimal escape");
        unsigned long v = std::stoul(hex, nullptr, 16);
        if (v > kMaxChar) fail("codepoint out of range");
        Symbol s = static_cast<Symbol>(v);
        return {{s, s}};
      }
      default:
        return {{c, c}};
    }
  }

  // A single class member symbol (literal or single-symbol escape).
  std::optional<Symbol> class_symbol(std::vector<CharRange>& multi) {
    if (peek() == '\\') {
      auto r = parse_escape(true);
      if (r.size() == 1 && r[0].lo == r[0].hi) return r[0].lo;
      multi.insert(multi.end(), r.begin(), r.end());
      return std::nullopt;
    }
    return text_[pos_++];
  }

  Regex parse_class() {
    size_t start = pos_;
    ++pos_;
    bool negate = false;
    if (!at_end() && peek() == '^') {
      negate = true;
      ++pos_;
    }
    std::vector<CharRange> ranges;
    while (true) {
      if (at_end()) {
        pos_ = start;
        fail("unterminated character class");
      }
      if (peek() == ']') {
        ++pos_;
        break;
      }
      size_t item_start = pos_;
      std::vector<CharRange> multi;
      std::optional<Symbol> lo = class_symbol(multi);
      if (!lo) {
        ranges.insert(ranges.end(), multi.begin(), multi.end());
        continue;
      }
      if (!at_end() && peek() == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] != ']') {
        ++pos_;
        std::vector<CharRange> multi_hi;
        std::optional<Symbol> hi = class_symbol(multi_hi);
        if (!hi) {
          pos_ = item_start;
          fail("class range bound must be a single symbol");
        }
        if (*lo > *hi) {
          pos_ = item_start;
          fail("range with lo > hi");
        }
        ranges.push_back({*lo, *hi});
      } else {
        ranges.push_back({*lo, *lo});
      }
    }
    if (negate) ranges = complement_ranges(ranges);
    return Regex::char_class(ranges);
  }

  std::string_view src_;
  Word text_;
  size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// SMT-LIB regex terms

class SmtRegexBuilder {
 public:
  SmtRegexBuilder(std::string_view src, const std::function<std::optional<Regex>(const std::string&)>& lookup)
      : src_(src), lookup_(lookup) {}

  Regex build(const SExpr& e) {
    if (e.kind == SExpr::Kind::Symbol) {
      if (e.text == "re.none" || e.text == "re.nostr") return Regex::empty();
      if (e.text == "re.all") return Regex::all();
      if (e.text == "re.allchar") return Regex::any_char();
      if (lookup_) {
        if (auto r = lookup_(e.text)) return *r;
      }
      throw make_parse_error(src_, e.offset, "unknown regex '" + e.text + "'");
    }
    if (!e.is_list() || e.items.empty()) throw make_parse_error(src_, e.offset, "expected a regex term");
    const SExpr& head = e.items[0];
    if (head.is_list()) {
      // Indexed operators: ((_ re.loop i j) r) and ((_ re.^ n) r)
      if (head.items.size() >= 3 && head.items[0].is_symbol("_") && e.items.size() == 2) {
        const std::string& op = head.items[1].text;
        auto num = [&](const SExpr& n) {
          if (n.kind != SExpr::Kind::Numeral) throw make_parse_error(src_, n.offset, "expected numeral");
          return std::stoi(n.text);
        };
        Regex body = build(e.items[1]);
        if (op == "re.loop" && head.items.size() == 4) {
          int lo = num(head.items[2]);
          int hi = num(head.items[3]);
          if (hi < lo) return Regex::empty();
          return Regex::loop(body, lo, hi);
        }
        if (op == "re.^" && head.items.size() == 3) {
          int n = num(head.items[2]);
          return Regex::loop(body, n, n);
        }
      }
      throw make_parse_error(src_, e.offset, "unsupported indexed regex operator");
    }
    std::string_view op = head.text;
    auto args = [&](size_t min) {
      if (e.items.size() - 1 < min)
        throw make_parse_error(src_, e.offset, "too few arguments to " + std::string(op));
    };
    if (op == "str.to_re" || op == "str.to.re") {
      args(1);
      const SExpr& s = e.items[1];
      if (s.kind != SExpr::Kind::String) throw make_parse_error(src_, s.offset, "str.to_re expects a literal");
      return Regex::literal(s.str);
    }
    if (op == "re.range") {
      args(2);
      const SExpr& a = e.items[1];
      const SExpr& b = e.items[2];
      if (a.kind != SExpr::Kind::String || b.kind != SExpr::Kind::String)
        throw make_parse_error(src_, e.offset, "re.range expects literals");
      if (a.str.size() != 1 || b.str.size() != 1) return Regex::empty();
      if (a.str[0] > b.str[0]) throw make_parse_error(src_, e.offset, "range with lo > hi");
      return Regex::range(a.str[0], b.str[0]);
    }
    if (op == "re.union" || op == "re.++" || op == "re.inter") {
      args(1);
      Regex r = build(e.items[1]);
      for (size_t i = 2; i < e.items.size(); ++i) {
        Regex next = build(e.items[i]);
        if (op == "re.union") r = Regex::union_of(r, next);
        else if (op == "re.++") r = Regex::concat(r, next);
        else r = Regex::intersection(r, next);
      }
      return r;
    }
    if (op == "re.diff") {
      args(2);
      return Regex::difference(build(e.items[1]), build(e.items[2]));
    }
    if (op == "re.*" || op == "re.+" || op == "re.opt" || op == "re.comp") {
      args(1);
      Regex body = build(e.items[1]);
      if (op == "re.*") return Regex::star(body);
      if (op == "re.+") return Regex::plus(body);
      if (op == "re.opt") return Regex::opt(body);
      return Regex::complement(body);
    }
    if (op == "re.loop" && e.items.size() == 4) {
      // Older two-argument form (re.loop r lo hi).
      Regex body = build(e.items[1]);
      return Regex::loop(body, std::stoi(e.items[2].text), std::stoi(e.items[3].text));
    }
    throw make_parse_error(src_, e.offset, "unknown regex operator '" + std::string(op) + "'");
  }

 private:
  std::string_view src_;
  const std::function<std::optional<Regex>(const std::string&)>& lookup_;
};

}  // namespace

Regex regex_from_sexpr(const SExpr& e, std::string_view src,
                       const std::function<std::optional<Regex>(const std::string&)>& lookup) {
  return SmtRegexBuilder(src, lookup).build(e);
}

Regex parse_regex(std::string_view src, RegexDialect dialect) {
  if (dialect == RegexDialect::Classic) return ClassicParser(src).parse();
  auto exprs = parse_sexprs(src);
  if (exprs.size() != 1) throw make_parse_error(src, 0, "expected exactly one regex term");
  return regex_from_sexpr(exprs[0], src);
}

}  // namespace seqstr
