// Symbols, words and character ranges shared by every automaton type.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace seqstr {

/// A symbol is a Unicode codepoint, or the reserved separator.
using Symbol = char32_t;
using Word = std::u32string;

inline constexpr Symbol kMaxChar = 0x10FFFF;
/// The sequence-element separator. Lies outside the Unicode range so that it
/// can never occur in a user string.
inline constexpr Symbol kSeparator = 0x110000;

/// Closed interval of symbols.
struct CharRange {
  Symbol lo = 0;
  Symbol hi = 0;

  bool contains(Symbol c) const { return lo <= c && c <= hi; }
  bool empty() const { return lo > hi; }
  friend bool operator==(const CharRange&, const CharRange&) = default;
  friend auto operator<=>(const CharRange&, const CharRange&) = default;
};

inline CharRange intersect(CharRange a, CharRange b) {
  return {a.lo > b.lo ? a.lo : b.lo, a.hi < b.hi ? a.hi : b.hi};
}

/// The set of words an operation quantifies over: Σ* or (Σ ∪ {†})*.
enum class Universe { Sigma, SigmaSep };

inline CharRange universe_range(Universe u) {
  return {0, u == Universe::Sigma ? kMaxChar : kSeparator};
}

inline constexpr CharRange kSigma{0, kMaxChar};
inline constexpr CharRange kSepRange{kSeparator, kSeparator};

/// UTF-8 conversion. The separator is rendered as U+2020 ('†') on output.
std::string to_utf8(std::u32string_view w);
void append_utf8(std::string& out, Symbol c);
/// Decodes UTF-8; throws std::invalid_argument on malformed input.
Word from_utf8(std::string_view s);
/// Like from_utf8, but maps U+2020 to the separator. Convenient for tests and
/// debug input where sequences are written in their encoded form.
Word from_utf8_sep(std::string_view s);

/// Picks a readable representative of a range: a lowercase letter, a digit
/// or an uppercase letter when one is available, otherwise the lower bound.
Symbol representative(CharRange r);

/// Splits the universe into maximal blocks such that every given range is a
/// union of blocks. Blocks not covered by any input range are omitted.
std::vector<CharRange> refine_ranges(const std::vector<CharRange>& ranges);

}  // namespace seqstr
