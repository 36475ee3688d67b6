#include "seqstr/alphabet.hpp"

#include <algorithm>
#include <stdexcept>

namespace seqstr {

void append_utf8(std::string& out, Symbol c) {
  if (c == kSeparator) c = 0x2020;
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

std::string to_utf8(std::u32string_view w) {
  std::string out;
  out.reserve(w.size());
  for (Symbol c : w) append_utf8(out, c);
  return out;
}

Word from_utf8(std::string_view s) {
  Word out;
  size_t i = 0;
  while (i < s.size()) {
    auto b = static_cast<unsigned char>(s[i]);
    int extra = 0;
    Symbol c = 0;
    if (b < 0x80) {
      c = b;
    } else if ((b & 0xE0) == 0xC0) {
      c = b & 0x1F;
      extra = 1;
    } else if ((b & 0xF0) == 0xE0) {
      c = b & 0x0F;
      extra = 2;
    } else if ((b & 0xF8) == 0xF0) {
      c = b & 0x07;
      extra = 3;
    } else {
      throw std::invalid_argument("malformed UTF-8 at byte " + std::to_string(i));
    }
    for (int k = 1; k <= extra; ++k) {
      if (i + k >= s.size()) throw std::invalid_argument("truncated UTF-8 at byte " + std::to_string(i));
      auto cont = static_cast<unsigned char>(s[i + k]);
      if ((cont & 0xC0) != 0x80) throw std::invalid_argument("malformed UTF-8 at byte " + std::to_string(i + k));
      c = (c << 6) | (cont & 0x3F);
    }
    out.push_back(c);
    i += extra + 1;
  }
  return out;
}

Word from_utf8_sep(std::string_view s) {
  Word w = from_utf8(s);
  for (auto& c : w)
    if (c == 0x2020) c = kSeparator;
  return w;
}

Symbol representative(CharRange r) {
  for (auto [lo, hi] : {std::pair<Symbol, Symbol>{'a', 'z'}, {'0', '9'}, {'A', 'Z'}}) {
    CharRange i = intersect(r, {lo, hi});
    if (!i.empty()) return i.lo;
  }
  CharRange printable = intersect(r, {0x21, 0x7E});
  if (!printable.empty()) return printable.lo;
  return r.lo;
}

std::vector<CharRange> refine_ranges(const std::vector<CharRange>& ranges) {
  // Boundaries: every lo starts a block, every hi+1 starts a block.
  std::vector<Symbol> cuts;
  cuts.reserve(ranges.size() * 2);
  for (const auto& r : ranges) {
    if (r.empty()) continue;
    cuts.push_back(r.lo);
    cuts.push_back(r.hi + 1);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<CharRange> blocks;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    CharRange b{cuts[i], cuts[i + 1] - 1};
    bool covered = std::any_of(ranges.begin(), ranges.end(),
                               [&](const CharRange& r) { return !r.empty() && r.lo <= b.lo && b.hi <= r.hi; });
    if (covered) blocks.push_back(b);
  }
  return blocks;
}

}  // namespace seqstr
