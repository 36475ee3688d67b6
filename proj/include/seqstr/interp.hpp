// Reference semantics of every SeqStr operation, model checking and a
// bounded brute-force satisfiability oracle.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqstr/frontend.hpp"
#include "seqstr/nfa.hpp"

namespace seqstr {

struct Value {
  enum class Kind { Int, Str, Seq };
  Kind kind = Kind::Int;
  Int i = 0;
  Word s;
  std::vector<Word> seq;

  static Value of_int(Int v);
  static Value of_str(Word w);
  static Value of_seq(std::vector<Word> elems);
  Sort sort() const;
  friend bool operator==(const Value&, const Value&) = default;
};

/// SMT-LIB rendering: a numeral, a string literal or a seq.++ of units.
std::string value_to_smtlib(const Value& v);

using Assignment = std::map<std::string, Value>;

/// Compiles and caches the automaton of a regex for repeated matching.
const Nfa& regex_nfa(const Regex& e);
bool regex_match(const Regex& e, std::u32string_view w);

/// Longest n such that w[pos, pos+n) is accepted by `a`, or nullopt when no
/// match starts at `pos`.
std::optional<size_t> longest_match_at(const Nfa& a, std::u32string_view w, size_t pos);

/// One step of the leftmost-longest scan: a match at [start, start+len).
struct MatchSpan {
  size_t start = 0;
  size_t len = 0;
  friend bool operator==(const MatchSpan&, const MatchSpan&) = default;
};

/// Scans left to right; at the first position where a match starts the
/// longest one is taken and scanning resumes after it. An empty match is
/// reported and the scan then moves past one character. No match is reported
/// at the end of the string.
std::vector<MatchSpan> leftmost_longest_matches(const Nfa& a, std::u32string_view w);

std::vector<Word> seq_split(const Regex& e, std::u32string_view u);
std::vector<Word> seq_match_all(const Regex& e, std::u32string_view u);
Word str_replace_all(const Regex& e, std::u32string_view u, std::u32string_view rep);
std::vector<Word> seq_filter(const Regex& e, const std::vector<Word>& s);
Word seq_join(const std::vector<Word>& s, std::u32string_view sep);
/// nullopt unless 0 <= i < |s|.
std::optional<Word> seq_nth(const std::vector<Word>& s, Int i);
/// Out-of-range writes return s unchanged.
std::vector<Word> seq_update(const std::vector<Word>& s, Int i, const Word& u);
/// (s_i, ..., s_min(i+j-1, |s|-1)); nullopt unless 0 <= i < |s| and j >= 0.
std::optional<std::vector<Word>> seq_extract(const std::vector<Word>& s, Int i, Int j);

/// nullopt for Undefined (out-of-range nth/extract, arithmetic overflow).
/// Throws UnboundVariable when `m` lacks a free variable of `t`.
std::optional<Value> eval_term(const Term& t, const Assignment& m);
/// Atoms with an Undefined subterm are false.
bool eval_atom(const Atom& a, const Assignment& m);
bool check_model(const Script& s, const Assignment& m);

struct BruteForceBounds {
  int max_len = 3;                  // string length
  int max_seq = 3;                  // sequence length
  std::vector<Symbol> alpha{'a', 'b'};
  /// Integers range over [-2, max(max_len, max_seq, max |constant|) + 2]
  /// unless given explicitly.
  std::optional<std::pair<Int, Int>> int_range;
  long max_candidates = 50'000'000;  // full assignments before giving up
};

struct BruteForceResult {
  enum class Status { Sat, NoModelWithinBounds, GaveUp };
  Status status = Status::NoModelWithinBounds;
  Assignment model;
};

/// Enumerates assignments within the bounds. Variables with a single
/// acyclic definition are computed from their arguments instead of being
/// enumerated.
BruteForceResult brute_force_sat(const Script& s, const BruteForceBounds& bounds = {});

}  // namespace seqstr
