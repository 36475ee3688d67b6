// Regular-expression syntax trees and their two concrete dialects.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqstr/alphabet.hpp"
#include "seqstr/sexpr.hpp"

namespace seqstr {

enum class RegexKind { Empty, Epsilon, Range, Union, Concat, Star, Complement };

/// Immutable regular expression over the user alphabet Σ. Only the core
/// constructors exist; sugar (plus, option, intersection, loops, literals)
/// is desugared by the static builders.
class Regex {
 public:
  Regex();  // Empty

  static Regex empty();
  static Regex epsilon();
  /// Throws std::invalid_argument unless lo <= hi <= kMaxChar.
  static Regex range(Symbol lo, Symbol hi);
  static Regex symbol(Symbol c) { return range(c, c); }
  static Regex union_of(Regex a, Regex b);
  static Regex concat(Regex a, Regex b);
  static Regex star(Regex a);
  /// Complement relative to Σ*.
  static Regex complement(Regex a);

  static Regex plus(Regex a) { return concat(a, star(a)); }
  static Regex opt(Regex a) { return union_of(std::move(a), epsilon()); }
  static Regex literal(std::u32string_view w);
  static Regex any_char() { return range(0, kMaxChar); }
  static Regex all() { return star(any_char()); }
  static Regex intersection(Regex a, Regex b);
  static Regex difference(Regex a, Regex b) { return intersection(std::move(a), complement(std::move(b))); }
  /// a{lo,hi}; hi < 0 means unbounded.
  static Regex loop(const Regex& a, int lo, int hi);
  /// Union of the given ranges (Empty when none).
  static Regex char_class(const std::vector<CharRange>& ranges);

  RegexKind kind() const;
  Symbol lo() const;
  Symbol hi() const;
  const Regex& left() const;   // Union, Concat, Star, Complement
  const Regex& right() const;  // Union, Concat

  /// Nesting depth; leaves have depth 0.
  int depth() const;
  bool nullable() const;

  /// Prints in the classic dialect; parse_regex(to_string(), Classic)
  /// rebuilds a structurally equal tree.
  std::string to_string() const;
  /// Prints as an SMT-LIB re.* term.
  std::string to_smtlib() const;

  friend bool operator==(const Regex& a, const Regex& b);

 private:
  struct Node;
  explicit Regex(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class RegexDialect { Classic, SmtLib };

/// Parses `src` in the given dialect. Errors are ParseError with the byte
/// offset of the offending token.
Regex parse_regex(std::string_view src, RegexDialect dialect);

/// Converts an SMT-LIB regex term. `lookup` resolves named regexes
/// (define-fun of sort RegLan); it may be empty.
Regex regex_from_sexpr(const SExpr& e, std::string_view src,
                       const std::function<std::optional<Regex>(const std::string&)>& lookup = {});

}  // namespace seqstr
