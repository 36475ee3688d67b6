// Cost-enriched finite automata: NFAs whose transitions add integer vectors
// to write-only registers.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqstr/alphabet.hpp"
#include "seqstr/lia.hpp"
#include "seqstr/nfa.hpp"

namespace seqstr {

using CostVector = std::vector<Int>;

struct CefaEdge {
  CharRange label;
  int dst = 0;
  CostVector upd;  // one entry per register
};

class RegisterClash : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class UnknownState : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};
class NonInjectiveMap : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
/// Raised when a construction would exceed the configured state budget.
class StateLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Cefa {
 public:
  explicit Cefa(std::vector<std::string> registers = {});

  const std::vector<std::string>& registers() const { return registers_; }
  size_t num_registers() const { return registers_.size(); }
  /// Index of a register, or -1.
  int register_index(const std::string& name) const;

  int add_state(bool initial = false, bool final = false);
  /// An empty `upd` means the zero vector; otherwise its length must match.
  void add_edge(int src, CharRange label, int dst, CostVector upd = {});
  void set_initial(int q, bool value = true);
  void set_final(int q, bool value = true);

  int num_states() const { return static_cast<int>(out_.size()); }
  size_t num_edges() const;
  const std::vector<CefaEdge>& edges(int q) const { return out_.at(q); }
  bool is_initial(int q) const { return initial_.at(q) != 0; }
  bool is_final(int q) const { return final_.at(q) != 0; }
  std::vector<int> initial_states() const;
  std::vector<int> final_states() const;

  /// Debug format: one `src lo-hi dst ; updates=(v1,...,vk)` line per edge.
  std::string to_text() const;

 private:
  std::vector<std::string> registers_;
  std::vector<std::vector<CefaEdge>> out_;
  std::vector<char> initial_;
  std::vector<char> final_;
};

Cefa cefa_from_nfa(const Nfa& a);
/// Forgets the registers.
Nfa cefa_to_nfa(const Cefa& a);

/// Registers of the result are a's followed by b's. Throws RegisterClash on
/// shared names and StateLimitExceeded beyond `max_states` product states.
Cefa cefa_product(const Cefa& a, const Cefa& b, size_t max_states = 0);
Cefa cefa_trim(const Cefa& a);
bool cefa_is_empty(const Cefa& a);

/// Every cost vector of an accepting run on `w`.
std::set<CostVector> cefa_accepts_with_cost(const Cefa& a, std::u32string_view w);

/// A[p,q]: initial {p}, final {q}. Throws UnknownState.
Cefa cefa_sub_automaton(const Cefa& a, int p, int q);

/// Renames registers; unmapped names are kept. Throws NonInjectiveMap when
/// two registers end up with the same name.
Cefa cefa_rename_registers(const Cefa& a, const std::map<std::string, std::string>& map);

/// Removes the listed registers (their updates are forgotten).
Cefa cefa_drop_registers(const Cefa& a, const std::set<std::string>& names);

/// Specializes a register to a constant final value by counting it in the
/// state. Requires nonnegative updates on that register; throws
/// std::invalid_argument otherwise.
Cefa cefa_fix_register(const Cefa& a, const std::string& name, Int value, size_t max_states = 0);

/// Existential LIA characterization of the register image. `formula` has the
/// register names and the `aux` variables free; the aux variables are
/// existentially quantified.
struct RegisterImage {
  LiaFormula formula;
  std::vector<std::string> aux;
};

/// Exact encoding: transition counts, flow conservation, one chosen
/// initial/final pair and distance variables for connectivity.
RegisterImage cefa_register_image(const Cefa& a, const std::string& aux_prefix = "img!");

/// Flow-only part of the encoding (no connectivity). Used with lazy cuts.
struct FlowEncoding {
  LiaFormula formula;
  std::vector<std::string> count_vars;  // per edge, in edge order
  std::vector<std::pair<int, int>> edge_ends;  // (src, dst) per edge
  std::map<int, std::string> start_vars;  // initial state -> selector
  std::map<int, std::string> end_vars;    // final state -> selector
};
FlowEncoding cefa_flow_encoding(const Cefa& a, const std::string& aux_prefix);

/// Joint satisfiability of several CEFA register images together with extra
/// arithmetic, solved with lazily added connectivity cuts. On Sat, `words`
/// holds one accepted word per automaton whose run cost matches the model.
struct ImageSolveResult {
  LiaResult::Status status = LiaResult::Status::Unknown;
  LiaModel model;
  std::vector<Word> words;
  std::string reason;
};
ImageSolveResult cefa_solve_images(const std::vector<Cefa>& automata, const LiaFormula& extra,
                                   const LiaOptions& opts = {});

/// Some w with c in A(w), or none when c is not in the register image.
std::optional<Word> cefa_witness(const Cefa& a, const CostVector& c, const LiaOptions& opts = {});

}  // namespace seqstr
