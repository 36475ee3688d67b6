#include "seqstr/engine.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "seqstr/cefa.hpp"
#include "seqstr/encode.hpp"
#include "seqstr/preimage.hpp"

namespace seqstr {

std::string status_name(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::Sat:
      return "sat";
    case Verdict::Status::Unsat:
      return "unsat";
    case Verdict::Status::Unknown:
      return "unknown";
  }
  return "unknown";
}

std::string model_to_smtlib(const Script& s, const Assignment& m) {
  std::ostringstream os;
  os << "(model\n";
  for (const auto& v : s.var_order) {
    auto it = m.find(v);
    if (it == m.end()) continue;
    os << "  (define-fun " << v << " () " << sort_name(s.vars.at(v)) << ' ' << value_to_smtlib(it->second) << ")\n";
  }
  os << ")";
  return os.str();
}

namespace {

class Timeout : public std::runtime_error {
 public:
  Timeout() : std::runtime_error("timeout") {}
};

Cefa universal_cefa() {
  Cefa a;
  int q = a.add_state(true, true);
  a.add_edge(q, universe_range(Universe::SigmaSep), q);
  return a;
}

Value default_value(Sort s) {
  switch (s) {
    case Sort::Int:
      return Value::of_int(0);
    case Sort::Str:
      return Value::of_str(U"");
    case Sort::Seq:
      return Value::of_seq({});
  }
  return Value::of_int(0);
}

/// Equalities `reg = c` with a constant c, read off a conjunction.
void constant_bindings(const LiaFormula& f, std::map<std::string, Int>& out) {
  if (f.kind() == LiaFormula::Kind::And) {
    for (const auto& c : f.children()) constant_bindings(c, out);
    return;
  }
  if (f.kind() != LiaFormula::Kind::Atom || f.rel() != LiaRel::Eq) return;
  const LinExpr& e = f.expr();
  if (e.coeffs().size() != 1) return;
  auto [var, coeff] = *e.coeffs().begin();
  if (coeff != 1 && coeff != -1) return;
  if (e.constant() % coeff != 0) return;
  out[var] = -e.constant() / coeff;
}

class Solver {
 public:
  Solver(const Script& original, const SolveOptions& opts) : original_(original), opts_(opts) {
    if (opts.timeout.count() > 0) deadline_ = std::chrono::steady_clock::now() + opts.timeout;
  }

  Verdict run() {
    Verdict v;
    Script norm = normalize(original_);
    StraightLineReport report = check_straight_line(norm);
    if (!report.ok) {
      v.reason = "not straight-line: " + (report.violations.empty() ? std::string() : report.violations[0]);
      return v;
    }
    x_ = enc_formula(norm);
    order_ = xstr_propagation_order(x_);
    try {
      State st;
      if (!initial_state(st)) {
        v.status = Verdict::Status::Unsat;
      } else if (search(0, std::move(st))) {
        v.status = Verdict::Status::Sat;
        v.model = std::move(model_);
      } else if (unknown_reason_.empty()) {
        v.status = Verdict::Status::Unsat;
      } else {
        v.reason = unknown_reason_;
      }
    } catch (const Timeout&) {
      v.status = Verdict::Status::Unknown;
      v.reason = "timeout";
    } catch (const StateLimitExceeded& e) {
      v.status = Verdict::Status::Unknown;
      v.reason = std::string("product state limit: ") + e.what();
    }
    v.stats = stats_;
    return v;
  }

 private:
  struct State {
    std::map<std::string, Cefa> cefas;
    std::vector<LiaFormula> pool;
  };

  void check_deadline() const {
    if (deadline_ && std::chrono::steady_clock::now() > *deadline_) throw Timeout();
  }

  /// Intersects the constraint on `var` with `a`; false when it becomes empty.
  bool constrain(State& st, const std::string& var, const Cefa& a) {
    auto it = st.cefas.find(var);
    Cefa next = it == st.cefas.end() ? cefa_trim(a) : cefa_trim(cefa_product(it->second, a, opts_.max_product_states));
    if (cefa_is_empty(next)) return false;
    st.cefas.insert_or_assign(var, std::move(next));
    return true;
  }

  bool initial_state(State& st) {
    const auto& fmt = format_automata();
    for (const auto& [v, tag] : x_.vars) {
      if (tag == VarTag::Seq && !constrain(st, v, cefa_from_nfa(fmt.a0))) return false;
      if (tag == VarTag::Plain && !constrain(st, v, cefa_from_nfa(fmt.a1))) return false;
    }
    for (const auto& [v, a] : x_.memberships)
      if (!constrain(st, v, cefa_from_nfa(a))) return false;
    for (const auto& [name, c] : x_.counters)
      if (!constrain(st, c.var, c.kind == CounterKind::Length ? strlen_cefa(name) : seqlen_cefa(name))) return false;
    return true;
  }

  /// The successor state for one alternative, or nullopt when some argument
  /// constraint becomes empty.
  std::optional<State> apply(const State& st, const XDef& d, const Cefa& a, PreimageAlternative alt) {
    std::map<std::string, LinExpr> sub;
    for (size_t k = 0; k < d.indices.size(); ++k) sub[index_placeholder(k)] = d.indices[k];
    LiaFormula binding = alt.binding.substitute(sub);

    std::map<std::string, Int> fixed;
    constant_bindings(binding, fixed);
    State next = st;
    for (size_t i = 0; i < alt.args.size(); ++i) {
      Cefa arg = std::move(alt.args[i]);
      for (const auto& [reg, value] : fixed) {
        if (arg.register_index(reg) < 0) continue;
        try {
          arg = cefa_fix_register(arg, reg, value, opts_.max_product_states);
        } catch (const std::invalid_argument&) {
          continue;
        }
      }
      if (!constrain(next, d.args[i], arg)) return std::nullopt;
    }
    for (size_t j = 0; j < a.num_registers(); ++j)
      next.pool.push_back(LiaFormula::eq(LinExpr::var(a.registers()[j]), alt.terms[j]));
    next.pool.push_back(binding);
    return next;
  }

  size_t weight(const State& st, const XDef& d) const {
    size_t w = 0;
    for (const auto& v : d.args) w += st.cefas.at(v).num_states();
    return w;
  }

  bool search(size_t k, State st) {
    check_deadline();
    if (k == order_.size()) return final_check(st);
    const XDef& d = *order_[k];
    auto it = st.cefas.find(d.lhs);
    Cefa a = it == st.cefas.end() ? universal_cefa() : std::move(it->second);
    if (it != st.cefas.end()) st.cefas.erase(it);

    std::vector<State> branches;
    Alternatives alts = preimage(d, a, names_);
    while (auto alt = alts.next()) {
      check_deadline();
      if (auto next = apply(st, d, a, std::move(*alt))) branches.push_back(std::move(*next));
    }
    std::stable_sort(branches.begin(), branches.end(),
                     [&](const State& x, const State& y) { return weight(x, d) < weight(y, d); });
    for (auto& b : branches) {
      ++stats_.alternatives;
      if (branches.size() > 1 && k + 1 < order_.size() && !feasible(b)) continue;
      if (search(k + 1, std::move(b))) return true;
    }
    return false;
  }

  /// False only when the partial state already has no solution.
  bool feasible(const State& st) {
    ++stats_.pruning_checks;
    std::vector<Cefa> automata;
    for (const auto& [v, a] : st.cefas) automata.push_back(a);
    std::vector<LiaFormula> parts = st.pool;
    parts.insert(parts.end(), x_.arith.begin(), x_.arith.end());
    LiaOptions lo;
    lo.node_limit = opts_.lia_node_limit;
    lo.deadline = deadline_;
    ImageSolveResult r = cefa_solve_images(automata, LiaFormula::conj(parts), lo);
    check_deadline();
    return r.status != LiaResult::Status::Unsat;
  }

  bool final_check(const State& st) {
    ++stats_.final_checks;
    std::vector<std::string> vars;
    std::vector<Cefa> automata;
    for (const auto& [v, a] : st.cefas) {
      vars.push_back(v);
      automata.push_back(a);
    }
    std::vector<LiaFormula> parts = st.pool;
    parts.insert(parts.end(), x_.arith.begin(), x_.arith.end());
    LiaOptions lo;
    lo.node_limit = opts_.lia_node_limit;
    lo.deadline = deadline_;
    ImageSolveResult r = cefa_solve_images(automata, LiaFormula::conj(parts), lo);
    check_deadline();
    if (r.status == LiaResult::Status::Unknown) {
      unknown_reason_ = "arithmetic: " + r.reason;
      return false;
    }
    if (r.status == LiaResult::Status::Unsat) return false;

    std::map<std::string, Word> strings;
    for (size_t i = 0; i < vars.size(); ++i) strings[vars[i]] = r.words[i];
    LiaModel ints = r.model;
    for (auto d = order_.rbegin(); d != order_.rend(); ++d) {
      LiaModel m = ints;
      for (const auto& [name, value] : xstr_counter_values(x_, strings)) m[name] = value;
      auto value = xstr_eval_def(**d, strings, m);
      if (!value) throw InternalInconsistency("definition of '" + (*d)->lhs + "' is undefined in the model");
      strings[(*d)->lhs] = *value;
    }
    for (const auto& v : x_.int_vars) ints.try_emplace(v, 0);
    if (!xstr_check_model(x_, strings, ints)) throw InternalInconsistency("model fails the encoded script");

    Assignment model;
    for (const auto& [v, sort] : original_.vars) {
      Value val = default_value(sort);
      if (sort == Sort::Int) {
        if (auto i = ints.find(v); i != ints.end()) val = Value::of_int(i->second);
      } else if (auto w = strings.find(v); w != strings.end()) {
        if (sort == Sort::Str) {
          val = Value::of_str(w->second);
        } else {
          auto elems = decode(w->second);
          if (!elems) throw InternalInconsistency("'" + v + "' is not a sequence encoding");
          val = Value::of_seq(std::move(*elems));
        }
      }
      model[v] = std::move(val);
    }
    if (!check_model(original_, model)) throw InternalInconsistency("model fails the original script");
    model_ = std::move(model);
    return true;
  }

  const Script& original_;
  SolveOptions opts_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  XStrScript x_;
  std::vector<const XDef*> order_;
  NameGen names_;
  Assignment model_;
  std::string unknown_reason_;
  SolveStats stats_;
};

}  // namespace

Verdict solve(const Script& s, const SolveOptions& opts) { return Solver(s, opts).run(); }

}  // namespace seqstr
