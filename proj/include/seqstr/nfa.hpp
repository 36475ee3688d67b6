// Nondeterministic finite automata over interval-labelled alphabets.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seqstr/alphabet.hpp"
#include "seqstr/regex.hpp"

namespace seqstr {

struct NfaEdge {
  CharRange label;
  int dst = 0;
};

/// States are dense integers 0..num_states()-1. Outgoing labels of one state
/// may overlap.
class Nfa {
 public:
  int add_state(bool initial = false, bool final = false);
  /// Throws std::out_of_range for unknown endpoints; empty labels are dropped.
  void add_edge(int src, CharRange label, int dst);
  void set_initial(int q, bool value = true);
  void set_final(int q, bool value = true);

  int num_states() const { return static_cast<int>(out_.size()); }
  size_t num_edges() const;
  const std::vector<NfaEdge>& edges(int q) const { return out_.at(q); }
  bool is_initial(int q) const { return initial_.at(q) != 0; }
  bool is_final(int q) const { return final_.at(q) != 0; }
  std::vector<int> initial_states() const;
  std::vector<int> final_states() const;

  /// One transition per line: `src lo-hi dst` (hex codepoints), preceded by
  /// `initial:` and `final:` lines.
  std::string to_text() const;

 private:
  std::vector<std::vector<NfaEdge>> out_;
  std::vector<char> initial_;
  std::vector<char> final_;
};

/// The automaton with no states (empty language).
Nfa nfa_empty();
/// Accepts exactly `w`.
Nfa nfa_word(std::u32string_view w);
/// Accepts every word over the universe.
Nfa nfa_universal(Universe u);

Nfa compile_regex(const Regex& e);

Nfa nfa_intersect(const Nfa& a, const Nfa& b);
Nfa nfa_union(const Nfa& a, const Nfa& b);
Nfa nfa_concat(const Nfa& a, const Nfa& b);
/// Subset construction with range splitting. When `complete` is set, a sink
/// state absorbs every symbol of the universe that has no successor.
Nfa nfa_determinize(const Nfa& a, Universe u, bool complete);
/// Complement relative to the words over `u`.
Nfa nfa_complement(const Nfa& a, Universe u);
/// Removes states that are unreachable or cannot reach a final state.
Nfa nfa_trim(const Nfa& a);

bool nfa_accepts(const Nfa& a, std::u32string_view w);
bool nfa_is_empty(const Nfa& a);
/// Some shortest accepted word, preferring readable symbols.
std::optional<Word> nfa_shortest_word(const Nfa& a);

}  // namespace seqstr
