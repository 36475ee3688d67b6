// SeqStr scripts: abstract syntax, the SMT-LIB reader, normalization to
// variable-defining equalities, and the straight-line fragment check.
#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "seqstr/lia.hpp"
#include "seqstr/regex.hpp"
#include "seqstr/sexpr.hpp"

namespace seqstr {

enum class Sort { Int, Str, Seq };

std::string sort_name(Sort s);

enum class Op {
  Var,
  IntLit,
  StrLit,
  SeqLit,
  // Int
  Add,      // args[0] + args[1]
  Sub,      // args[0] - args[1]
  Scale,    // value * args[0]
  StrLen,
  SeqLen,
  // Str
  StrConcat,
  Nth,      // (seq, index)
  Join,     // (seq); separator in `str`
  // Seq
  SeqUnit,
  SeqConcat,
  Update,   // (seq, index, str)
  Filter,   // (seq); regex in `re`
  Split,    // (str); regex in `re`
  Extract,  // (seq, start, length)
  MatchAll  // (str); regex in `re`
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  Op op = Op::Var;
  Sort sort = Sort::Int;
  std::string name;        // Var
  Int value = 0;           // IntLit, Scale factor
  Word str;                // StrLit, Join separator
  std::vector<Word> elems;  // SeqLit
  Regex re;                // Filter, Split, MatchAll
  std::vector<TermPtr> args;
  size_t offset = 0;

  static TermPtr var(const std::string& name, Sort sort);
  static TermPtr int_lit(Int v);
  static TermPtr str_lit(Word w);
  static TermPtr seq_lit(std::vector<Word> elems);
  static TermPtr app(Op op, Sort sort, std::vector<TermPtr> args);
};

/// SMT-LIB rendering of a term.
std::string term_to_string(const Term& t);

enum class AtomKind { Arith, Equal, Member };

struct Atom {
  AtomKind kind = AtomKind::Arith;
  LiaRel rel = LiaRel::Eq;  // Arith only
  TermPtr lhs;
  TermPtr rhs;              // Arith, Equal
  Regex re;                 // Member
  size_t offset = 0;
};

std::string atom_to_string(const Atom& a);

struct Script {
  std::map<std::string, Sort> vars;
  std::vector<std::string> var_order;  // declaration order
  std::vector<Atom> atoms;
  std::set<std::string> fresh;         // introduced by normalize
  bool check_sat = false;
  bool get_model = false;
};

/// Raised for operators applied to arguments of the wrong sort.
class SortError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Raised for constructs outside the supported fragment (disjunctions,
/// string or sequence disequalities).
class FragmentError : public ParseError {
 public:
  using ParseError::ParseError;
};

Script parse_script(std::string_view src);

/// Rewrites every string/sequence equality into `var = op(args)` where the
/// arguments are variables, folds ground subterms into literals, and moves
/// compound terms out of memberships and length applications.
Script normalize(const Script& s);

struct DependencyGraph {
  std::set<std::string> vertices;
  std::map<std::string, std::set<std::string>> edges;
};

/// Whether the atom is a defining equality `var = rhs` with a non-literal
/// right-hand side.
bool is_definition(const Atom& a);

/// Variables occurring in string/sequence positions of `t` (integer
/// subterms are skipped).
std::set<std::string> non_integer_vars(const Term& t);

DependencyGraph dependency_graph(const Script& s);

struct StraightLineReport {
  bool ok = true;
  std::vector<std::string> violations;
};

StraightLineReport check_straight_line(const Script& s);

/// Definitions ordered so that every use of a variable precedes its
/// definition. Requires a straight-line script.
std::vector<const Atom*> definitions_in_propagation_order(const Script& s);

}  // namespace seqstr
