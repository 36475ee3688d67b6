// Sequences as †-delimited strings: value encoding, the string-level
// counterparts of the sequence operations, and the translation of SeqStr
// scripts into string constraints over Σ ∪ {†}.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqstr/frontend.hpp"
#include "seqstr/interp.hpp"
#include "seqstr/lia.hpp"
#include "seqstr/nfa.hpp"
#include "seqstr/nft.hpp"

namespace seqstr {

class SeparatorInElement : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// †u1†...†um†; the empty sequence is "†".
Word enc_value(const std::vector<Word>& s);
/// Left inverse of enc_value; nullopt unless w is in †(Σ*†)*.
std::optional<std::vector<Word>> decode(std::u32string_view w);

/// A0 accepts †(Σ*†)*, A1 accepts Σ*.
struct FormatAutomata {
  Nfa a0;
  Nfa a1;
};
const FormatAutomata& format_automata();

// String-level operations on encodings. Indices count separators from 1:
// element k lies between the k-th and (k+1)-th †.

/// Number of † in w.
Int count_separators(std::u32string_view w);
/// nullopt unless 1 <= k <= count_separators(w) - 1.
std::optional<Word> str_elem(std::u32string_view x, Int k);
/// Replaces element k by y; out of range leaves x unchanged.
Word str_write(std::u32string_view x, Int k, std::u32string_view y);
/// From the k-th † to the min(k+j, n)-th † inclusive, or "†" for j = 0;
/// nullopt unless 1 <= k <= n - 1 and j >= 0 (n = count_separators(x)).
std::optional<Word> str_subseq(std::u32string_view x, Int k, Int j);
/// Drops the outer † and replaces the inner ones by `sep`.
Word str_join(std::u32string_view x, std::u32string_view sep);

enum class VarTag {
  Plain,  // a string over Σ
  Seq,    // the encoding of a sequence, in A0
  Raw     // an intermediate string over Σ ∪ {†}
};

enum class XDefKind { Copy, Concat, Transduce, Write, Subseq, Elem };

/// `lhs = ...` where:
///   Copy       lhs = args[0]
///   Concat     lhs = args[0] · args[1]
///   Transduce  lhs = nft(args[0])
///   Write      lhs = write(args[0], indices[0], args[1])
///   Subseq     lhs = subseq(args[0], indices[0], indices[1])
///   Elem       lhs = elem(args[0], indices[0])
struct XDef {
  XDefKind kind = XDefKind::Copy;
  std::string lhs;
  std::vector<std::string> args;
  std::vector<LinExpr> indices;
  std::shared_ptr<const Nft> nft;
  std::string label;  // transducer name for printing
};

std::string xdef_to_string(const XDef& d);

enum class CounterKind { Length, Separators };

struct Counter {
  std::string var;
  CounterKind kind = CounterKind::Length;
};

struct XStrScript {
  std::map<std::string, VarTag> vars;
  std::set<std::string> int_vars;
  std::vector<XDef> defs;
  /// Memberships; seq-tagged variables additionally belong to A0 and
  /// plain ones to A1.
  std::vector<std::pair<std::string, Nfa>> memberships;
  /// Variables equal to a constant; each also has a singleton membership.
  std::map<std::string, Word> fixed;
  std::vector<LiaFormula> arith;
  /// Integer variables standing for a length or a separator count.
  std::map<std::string, Counter> counters;

  std::string to_text() const;
};

/// Name of the counter variable for `var`.
std::string counter_name(const std::string& var, CounterKind kind);

/// Translates a normalized straight-line script. Sequence variables keep
/// their names; literals and intermediate results get fresh variables.
XStrScript enc_formula(const Script& s);

/// Definitions ordered so that every use of a variable precedes its
/// definition.
std::vector<const XDef*> xstr_propagation_order(const XStrScript& x);

/// Concrete value of a definition's right-hand side, or nullopt when it is
/// undefined. Transducers must be functional on the argument.
std::optional<Word> xstr_eval_def(const XDef& d, const std::map<std::string, Word>& strings, const LiaModel& ints);

/// Values of the counters of `x` for the given strings.
LiaModel xstr_counter_values(const XStrScript& x, const std::map<std::string, Word>& strings);

bool xstr_check_model(const XStrScript& x, const std::map<std::string, Word>& strings, const LiaModel& ints);

struct XStrBruteForceResult {
  bool sat = false;
  bool gave_up = false;
  std::map<std::string, Word> strings;
  LiaModel ints;
};

/// Enumerates source variables within `bounds`: plain strings up to
/// max_len, encodings of sequences up to max_seq elements, integers as in
/// brute_force_sat. Defined variables are computed.
XStrBruteForceResult xstr_brute_force(const XStrScript& x, const BruteForceBounds& bounds);

}  // namespace seqstr
