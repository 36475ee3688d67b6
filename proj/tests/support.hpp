// Shared helpers for the test binaries: word enumeration, random regexes and
// a direct recursive regex matcher used as an independent oracle.
#pragma once

#include <functional>
#include <random>
#include <vector>

#include "seqstr/alphabet.hpp"
#include "seqstr/regex.hpp"

namespace seqstr::testing {

inline void all_words(const std::vector<Symbol>& alpha, size_t max_len, const std::function<void(const Word&)>& f) {
  std::vector<Word> layer{Word()};
  for (size_t len = 0; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      f(w);
      if (len < max_len)
        for (Symbol c : alpha) next.push_back(w + c);
    }
    layer.swap(next);
  }
}

/// Random regex over {a, b} with the given maximum depth.
inline Regex random_regex(std::mt19937& rng, int depth, bool allow_complement = true) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : allow_complement ? 8 : 7);
  switch (pick(rng)) {
    case 0:
      return Regex::symbol('a');
    case 1:
      return Regex::symbol('b');
    case 2:
      return Regex::range('a', 'b');
    case 3:
      return std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? Regex::epsilon() : Regex::symbol('a');
    case 4:
    case 5:
      return Regex::concat(random_regex(rng, depth - 1, allow_complement),
                           random_regex(rng, depth - 1, allow_complement));
    case 6:
      return Regex::union_of(random_regex(rng, depth - 1, allow_complement),
                             random_regex(rng, depth - 1, allow_complement));
    case 7:
      return Regex::star(random_regex(rng, depth - 1, allow_complement));
    default:
      return Regex::complement(random_regex(rng, depth - 1, allow_complement));
  }
}

/// Whether `e` matches all of `w`, by structural recursion on `e`.
inline bool regex_matches(const Regex& e, std::u32string_view w) {
  switch (e.kind()) {
    case RegexKind::Empty:
      return false;
    case RegexKind::Epsilon:
      return w.empty();
    case RegexKind::Range:
      return w.size() == 1 && e.lo() <= w[0] && w[0] <= e.hi();
    case RegexKind::Union:
      return regex_matches(e.left(), w) || regex_matches(e.right(), w);
    case RegexKind::Concat:
      for (size_t i = 0; i <= w.size(); ++i)
        if (regex_matches(e.left(), w.substr(0, i)) && regex_matches(e.right(), w.substr(i))) return true;
      return false;
    case RegexKind::Star:
      if (w.empty()) return true;
      for (size_t i = 1; i <= w.size(); ++i)
        if (regex_matches(e.left(), w.substr(0, i)) && regex_matches(e, w.substr(i))) return true;
      return false;
    case RegexKind::Complement:
      return !regex_matches(e.left(), w);
  }
  return false;
}

}  // namespace seqstr::testing
