#include "seqstr/frontend.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "seqstr/interp.hpp"

namespace seqstr {

std::string sort_name(Sort s) {
  switch (s) {
    case Sort::Int:
      return "Int";
    case Sort::Str:
      return "String";
    case Sort::Seq:
      return "(Seq String)";
  }
  return "?";
}

TermPtr Term::var(const std::string& name, Sort sort) {
  auto t = std::make_shared<Term>();
  t->op = Op::Var;
  t->sort = sort;
  t->name = name;
  return t;
}

TermPtr Term::int_lit(Int v) {
  auto t = std::make_shared<Term>();
  t->op = Op::IntLit;
  t->value = v;
  return t;
}

TermPtr Term::str_lit(Word w) {
  auto t = std::make_shared<Term>();
  t->op = Op::StrLit;
  t->sort = Sort::Str;
  t->str = std::move(w);
  return t;
}

TermPtr Term::seq_lit(std::vector<Word> elems) {
  auto t = std::make_shared<Term>();
  t->op = Op::SeqLit;
  t->sort = Sort::Seq;
  t->elems = std::move(elems);
  return t;
}

TermPtr Term::app(Op op, Sort sort, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->op = op;
  t->sort = sort;
  t->args = std::move(args);
  return t;
}

namespace {

std::string int_text(Int v) { return v < 0 ? "(- " + std::to_string(v).substr(1) + ")" : std::to_string(v); }

std::string seq_literal_text(const std::vector<Word>& elems) {
  if (elems.empty()) return "(as seq.empty (Seq String))";
  std::string out;
  for (size_t i = 0; i < elems.size(); ++i) {
    std::string unit = "(seq.unit " + smtlib_string_literal(elems[i]) + ")";
    out = i == 0 ? unit : out + " " + unit;
  }
  return elems.size() == 1 ? out : "(seq.++ " + out + ")";
}

const char* op_symbol(Op op) {
  switch (op) {
    case Op::Add:
      return "+";
    case Op::Sub:
      return "-";
    case Op::Scale:
      return "*";
    case Op::StrLen:
      return "str.len";
    case Op::SeqLen:
      return "seq.len";
    case Op::StrConcat:
      return "str.++";
    case Op::Nth:
      return "seq.nth";
    case Op::Join:
      return "seq.join";
    case Op::SeqUnit:
      return "seq.unit";
    case Op::SeqConcat:
      return "seq.++";
    case Op::Update:
      return "seq.update";
    case Op::Filter:
      return "seq.filterre";
    case Op::Split:
      return "str.splitre";
    case Op::Extract:
      return "seq.extract";
    case Op::MatchAll:
      return "str.matchall";
    default:
      return "?";
  }
}

}  // namespace

std::string term_to_string(const Term& t) {
  switch (t.op) {
    case Op::Var:
      return t.name;
    case Op::IntLit:
      return int_text(t.value);
    case Op::StrLit:
      return smtlib_string_literal(t.str);
    case Op::SeqLit:
      return seq_literal_text(t.elems);
    case Op::Scale:
      return "(* " + int_text(t.value) + " " + term_to_string(*t.args[0]) + ")";
    default:
      break;
  }
  std::string out = std::string("(") + op_symbol(t.op);
  for (const auto& a : t.args) out += " " + term_to_string(*a);
  if (t.op == Op::Join) out += " " + smtlib_string_literal(t.str);
  if (t.op == Op::Filter || t.op == Op::Split || t.op == Op::MatchAll) out += " " + t.re.to_smtlib();
  return out + ")";
}

std::string atom_to_string(const Atom& a) {
  switch (a.kind) {
    case AtomKind::Arith: {
      static const char* names[] = {"=", "distinct", "<", "<=", ">", ">="};
      return std::string("(") + names[static_cast<int>(a.rel)] + " " + term_to_string(*a.lhs) + " " +
             term_to_string(*a.rhs) + ")";
    }
    case AtomKind::Equal:
      return "(= " + term_to_string(*a.lhs) + " " + term_to_string(*a.rhs) + ")";
    case AtomKind::Member:
      return "(str.in_re " + term_to_string(*a.lhs) + " " + a.re.to_smtlib() + ")";
  }
  return "";
}

namespace {

class ScriptParser {
 public:
  explicit ScriptParser(std::string_view src) : src_(src) {}

  Script run() {
    for (const auto& cmd : parse_sexprs(src_)) command(cmd);
    return std::move(script_);
  }

 private:
  [[noreturn]] void fail(const SExpr& at, const std::string& msg) const { throw make_parse_error(src_, at.offset, msg); }

  [[noreturn]] void sort_fail(const SExpr& at, const std::string& msg) const {
    ParseError e = make_parse_error(src_, at.offset, msg);
    throw SortError(e.what(), e.offset(), e.line(), e.column());
  }

  [[noreturn]] void fragment_fail(const SExpr& at, const std::string& msg) const {
    ParseError e = make_parse_error(src_, at.offset, msg);
    throw FragmentError(e.what(), e.offset(), e.line(), e.column());
  }

  void command(const SExpr& cmd) {
    if (!cmd.is_list() || cmd.items.empty() || cmd.items[0].kind != SExpr::Kind::Symbol)
      fail(cmd, "expected a command");
    std::string_view head = cmd.head();
    if (head == "set-logic" || head == "set-info" || head == "set-option" || head == "exit" ||
        head == "get-info" || head == "echo")
      return;
    if (head == "check-sat") {
      script_.check_sat = true;
      return;
    }
    if (head == "get-model") {
      script_.get_model = true;
      return;
    }
    if (head == "declare-fun" || head == "declare-const") {
      declare(cmd, head == "declare-fun");
      return;
    }
    if (head == "define-fun" || head == "define-const") {
      define(cmd, head == "define-fun");
      return;
    }
    if (head == "assert") {
      if (cmd.items.size() != 2) fail(cmd, "assert takes one formula");
      formula(cmd.items[1], true);
      return;
    }
    fail(cmd.items[0], "unsupported command '" + std::string(head) + "'");
  }

  std::optional<Sort> parse_sort(const SExpr& e) const {
    if (e.is_symbol("Int")) return Sort::Int;
    if (e.is_symbol("String")) return Sort::Str;
    if (e.is_list() && e.items.size() == 2 && e.items[0].is_symbol("Seq") && e.items[1].is_symbol("String"))
      return Sort::Seq;
    return std::nullopt;
  }

  const std::string& symbol_name(const SExpr& e) const {
    if (e.kind != SExpr::Kind::Symbol) fail(e, "expected a symbol");
    return e.text;
  }

  void check_fresh_name(const SExpr& at, const std::string& name) const {
    if (script_.vars.count(name) || macros_.count(name) || regexes_.count(name))
      fail(at, "symbol '" + name + "' is already declared");
  }

  void declare(const SExpr& cmd, bool fun) {
    size_t need = fun ? 4 : 3;
    if (cmd.items.size() != need) fail(cmd, std::string(cmd.head()) + ": wrong number of arguments");
    const std::string& name = symbol_name(cmd.items[1]);
    if (fun && !(cmd.items[2].is_list() && cmd.items[2].items.empty()))
      fail(cmd.items[2], "only nullary functions can be declared");
    const SExpr& sort_e = cmd.items[need - 1];
    auto sort = parse_sort(sort_e);
    if (!sort) fail(sort_e, "unsupported sort");
    check_fresh_name(cmd.items[1], name);
    script_.vars[name] = *sort;
    script_.var_order.push_back(name);
  }

  void define(const SExpr& cmd, bool fun) {
    size_t need = fun ? 5 : 4;
    if (cmd.items.size() != need) fail(cmd, std::string(cmd.head()) + ": wrong number of arguments");
    const std::string& name = symbol_name(cmd.items[1]);
    if (fun && !(cmd.items[2].is_list() && cmd.items[2].items.empty()))
      fail(cmd.items[2], "only nullary functions can be defined");
    check_fresh_name(cmd.items[1], name);
    const SExpr& sort_e = cmd.items[need - 2];
    const SExpr& body = cmd.items[need - 1];
    if (sort_e.is_symbol("RegLan")) {
      regexes_[name] = regex(body);
      return;
    }
    auto sort = parse_sort(sort_e);
    if (!sort) fail(sort_e, "unsupported sort");
    TermPtr t = term(body);
    if (t->sort != *sort) sort_fail(body, "definition of '" + name + "' has sort " + sort_name(t->sort));
    macros_[name] = t;
  }

  Regex regex(const SExpr& e) const {
    return regex_from_sexpr(e, src_, [this](const std::string& n) -> std::optional<Regex> {
      auto it = regexes_.find(n);
      if (it == regexes_.end()) return std::nullopt;
      return it->second;
    });
  }

  void add_atom(Atom a) { script_.atoms.push_back(std::move(a)); }

  void arith(const SExpr& at, LiaRel rel, TermPtr l, TermPtr r) {
    Atom a;
    a.kind = AtomKind::Arith;
    a.rel = rel;
    a.lhs = std::move(l);
    a.rhs = std::move(r);
    a.offset = at.offset;
    add_atom(std::move(a));
  }

  static LiaRel negate(LiaRel r) {
    switch (r) {
      case LiaRel::Eq:
        return LiaRel::Ne;
      case LiaRel::Ne:
        return LiaRel::Eq;
      case LiaRel::Lt:
        return LiaRel::Ge;
      case LiaRel::Le:
        return LiaRel::Gt;
      case LiaRel::Gt:
        return LiaRel::Le;
      case LiaRel::Ge:
        return LiaRel::Lt;
    }
    return r;
  }

  void formula(const SExpr& e, bool positive) {
    if (e.is_symbol("true") || e.is_symbol("false")) {
      if (e.is_symbol("true") != positive) arith(e, LiaRel::Eq, Term::int_lit(0), Term::int_lit(1));
      return;
    }
    if (!e.is_list() || e.items.empty()) fail(e, "expected a formula");
    std::string_view head = e.head();
    auto args = [&](size_t n) {
      if (e.items.size() != n + 1) fail(e, std::string(head) + " expects " + std::to_string(n) + " arguments");
    };
    if (head == "and" || head == "or") {
      if ((head == "and") != positive)
        fragment_fail(e, "disjunctions are outside the supported fragment");
      for (size_t i = 1; i < e.items.size(); ++i) formula(e.items[i], positive);
      return;
    }
    if (head == "not") {
      args(1);
      formula(e.items[1], !positive);
      return;
    }
    if (head == "str.in_re" || head == "str.in.re") {
      args(2);
      TermPtr t = term(e.items[1]);
      if (t->sort != Sort::Str) sort_fail(e.items[1], std::string(head) + " expects a String argument");
      Regex r = regex(e.items[2]);
      Atom a;
      a.kind = AtomKind::Member;
      a.lhs = t;
      a.re = positive ? r : Regex::complement(r);
      a.offset = e.offset;
      add_atom(std::move(a));
      return;
    }
    static const std::map<std::string_view, LiaRel> rels{{"=", LiaRel::Eq},  {"distinct", LiaRel::Ne},
                                                         {"<", LiaRel::Lt},  {"<=", LiaRel::Le},
                                                         {">", LiaRel::Gt},  {">=", LiaRel::Ge}};
    auto it = rels.find(head);
    if (it == rels.end()) fail(e.items[0], "unsupported predicate '" + std::string(head) + "'");
    args(2);
    TermPtr l = term(e.items[1]);
    TermPtr r = term(e.items[2]);
    if (l->sort != r->sort)
      sort_fail(e, std::string(head) + " compares " + sort_name(l->sort) + " with " + sort_name(r->sort));
    LiaRel rel = positive ? it->second : negate(it->second);
    if (l->sort == Sort::Int) {
      arith(e, rel, l, r);
      return;
    }
    if (rel == LiaRel::Ne)
      fragment_fail(e, "string and sequence disequalities are outside the disjunction-free fragment");
    if (rel != LiaRel::Eq) sort_fail(e, std::string(head) + " expects Int arguments");
    Atom a;
    a.kind = AtomKind::Equal;
    a.lhs = l;
    a.rhs = r;
    a.offset = e.offset;
    add_atom(std::move(a));
  }

  TermPtr expect(const SExpr& e, Sort sort, std::string_view op) const {
    TermPtr t = term(e);
    if (t->sort != sort)
      sort_fail(e, std::string(op) + " expects " + sort_name(sort) + ", got " + sort_name(t->sort));
    return t;
  }

  TermPtr with_offset(TermPtr t, size_t offset) const {
    auto copy = std::make_shared<Term>(*t);
    copy->offset = offset;
    return copy;
  }

  TermPtr term(const SExpr& e) const {
    switch (e.kind) {
      case SExpr::Kind::Numeral:
        try {
          return with_offset(Term::int_lit(std::stoll(e.text)), e.offset);
        } catch (const std::out_of_range&) {
          fail(e, "integer literal out of range");
        }
      case SExpr::Kind::String:
        return with_offset(Term::str_lit(e.str), e.offset);
      case SExpr::Kind::Symbol: {
        auto v = script_.vars.find(e.text);
        if (v != script_.vars.end()) return with_offset(Term::var(e.text, v->second), e.offset);
        auto m = macros_.find(e.text);
        if (m != macros_.end()) return m->second;
        if (e.text == "seq.empty") return with_offset(Term::seq_lit({}), e.offset);
        fail(e, "unknown symbol '" + e.text + "'");
      }
      case SExpr::Kind::List:
        break;
    }
    if (e.items.empty()) fail(e, "empty term");
    if (e.items[0].is_list()) {
      // (as seq.empty (Seq String))
      fail(e, "unsupported term");
    }
    std::string_view head = e.head();
    size_t n = e.items.size() - 1;
    auto args = [&](size_t k) {
      if (n != k) fail(e, std::string(head) + " expects " + std::to_string(k) + " arguments");
    };
    auto make = [&](Op op, Sort sort, std::vector<TermPtr> a) {
      auto t = std::make_shared<Term>(*Term::app(op, sort, std::move(a)));
      t->offset = e.offset;
      return TermPtr(t);
    };
    if (head == "as") {
      if (n == 2 && e.items[1].is_symbol("seq.empty") && parse_sort(e.items[2]) == Sort::Seq)
        return with_offset(Term::seq_lit({}), e.offset);
      fail(e, "unsupported 'as' term");
    }
    if (head == "+" || head == "-") {
      if (n == 0) fail(e, std::string(head) + " needs arguments");
      TermPtr acc = expect(e.items[1], Sort::Int, head);
      if (n == 1 && head == "-") {
        if (acc->op == Op::IntLit) return with_offset(Term::int_lit(checked_mul(acc->value, -1)), e.offset);
        auto t = std::make_shared<Term>(*make(Op::Scale, Sort::Int, {acc}));
        t->value = -1;
        return t;
      }
      for (size_t i = 2; i <= n; ++i)
        acc = make(head == "+" ? Op::Add : Op::Sub, Sort::Int, {acc, expect(e.items[i], Sort::Int, head)});
      return acc;
    }
    if (head == "*") {
      args(2);
      TermPtr a = expect(e.items[1], Sort::Int, head);
      TermPtr b = expect(e.items[2], Sort::Int, head);
      if (b->op == Op::IntLit) std::swap(a, b);
      if (a->op != Op::IntLit) fragment_fail(e, "nonlinear multiplication");
      auto t = std::make_shared<Term>(*make(Op::Scale, Sort::Int, {b}));
      t->value = a->value;
      return t;
    }
    if (head == "str.len") {
      args(1);
      return make(Op::StrLen, Sort::Int, {expect(e.items[1], Sort::Str, head)});
    }
    if (head == "seq.len") {
      args(1);
      return make(Op::SeqLen, Sort::Int, {expect(e.items[1], Sort::Seq, head)});
    }
    if (head == "str.++") {
      if (n == 0) return with_offset(Term::str_lit({}), e.offset);
      TermPtr acc = expect(e.items[1], Sort::Str, head);
      for (size_t i = 2; i <= n; ++i) acc = make(Op::StrConcat, Sort::Str, {acc, expect(e.items[i], Sort::Str, head)});
      return acc;
    }
    if (head == "seq.++") {
      if (n == 0) return with_offset(Term::seq_lit({}), e.offset);
      TermPtr acc = expect(e.items[1], Sort::Seq, head);
      for (size_t i = 2; i <= n; ++i) acc = make(Op::SeqConcat, Sort::Seq, {acc, expect(e.items[i], Sort::Seq, head)});
      return acc;
    }
    if (head == "seq.nth") {
      args(2);
      return make(Op::Nth, Sort::Str, {expect(e.items[1], Sort::Seq, head), expect(e.items[2], Sort::Int, head)});
    }
    if (head == "seq.join" || head == "seq.joinw") {
      args(2);
      TermPtr s = expect(e.items[1], Sort::Seq, head);
      TermPtr sep = expect(e.items[2], Sort::Str, head);
      if (sep->op != Op::StrLit) fragment_fail(e.items[2], std::string(head) + " needs a literal separator");
      auto t = std::make_shared<Term>(*make(Op::Join, Sort::Str, {s}));
      t->str = sep->str;
      return t;
    }
    if (head == "seq.unit") {
      args(1);
      return make(Op::SeqUnit, Sort::Seq, {expect(e.items[1], Sort::Str, head)});
    }
    if (head == "seq.update") {
      args(3);
      TermPtr s = expect(e.items[1], Sort::Seq, head);
      TermPtr i = expect(e.items[2], Sort::Int, head);
      TermPtr u = term(e.items[3]);
      if (u->sort == Sort::Seq && u->op == Op::SeqUnit) u = u->args[0];
      if (u->sort == Sort::Seq && u->op == Op::SeqLit && u->elems.size() == 1) u = Term::str_lit(u->elems[0]);
      if (u->sort != Sort::Str) sort_fail(e.items[3], "seq.update expects a String or a unit sequence");
      return make(Op::Update, Sort::Seq, {s, i, u});
    }
    if (head == "seq.extract") {
      args(3);
      return make(Op::Extract, Sort::Seq,
                  {expect(e.items[1], Sort::Seq, head), expect(e.items[2], Sort::Int, head),
                   expect(e.items[3], Sort::Int, head)});
    }
    if (head == "seq.filterre" || head == "str.splitre" || head == "str.matchall") {
      args(2);
      Op op = head == "seq.filterre" ? Op::Filter : head == "str.splitre" ? Op::Split : Op::MatchAll;
      TermPtr a = expect(e.items[1], op == Op::Filter ? Sort::Seq : Sort::Str, head);
      auto t = std::make_shared<Term>(*make(op, Sort::Seq, {a}));
      t->re = regex(e.items[2]);
      return t;
    }
    fail(e.items[0], "unsupported operator '" + std::string(head) + "'");
  }

  std::string_view src_;
  Script script_;
  std::map<std::string, TermPtr> macros_;
  std::map<std::string, Regex> regexes_;
};

bool is_literal(const Term& t) { return t.op == Op::StrLit || t.op == Op::SeqLit || t.op == Op::IntLit; }

bool is_ground(const Term& t) {
  if (t.op == Op::Var) return false;
  for (const auto& a : t.args)
    if (!is_ground(*a)) return false;
  return true;
}

TermPtr literal_of(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Int:
      return Term::int_lit(v.i);
    case Value::Kind::Str:
      return Term::str_lit(v.s);
    case Value::Kind::Seq:
      return Term::seq_lit(v.seq);
  }
  return nullptr;
}

class Normalizer {
 public:
  explicit Normalizer(const Script& s) : in_(s) {
    out_.vars = s.vars;
    out_.var_order = s.var_order;
    out_.check_sat = s.check_sat;
    out_.get_model = s.get_model;
    out_.fresh = s.fresh;
  }

  Script run() {
    for (const auto& a : in_.atoms) atom(a);
    orient_copies();
    return std::move(out_);
  }

 private:
  std::string fresh(Sort sort) {
    std::string name;
    do name = "#t" + std::to_string(++counter_);
    while (out_.vars.count(name));
    out_.vars[name] = sort;
    out_.fresh.insert(name);
    return name;
  }

  void emit(AtomKind kind, TermPtr l, TermPtr r, size_t offset, LiaRel rel = LiaRel::Eq, Regex re = {}) {
    Atom a;
    a.kind = kind;
    a.lhs = std::move(l);
    a.rhs = std::move(r);
    a.rel = rel;
    a.re = std::move(re);
    a.offset = offset;
    out_.atoms.push_back(std::move(a));
  }

  void emit_false(size_t offset) { emit(AtomKind::Arith, Term::int_lit(0), Term::int_lit(1), offset); }

  // Folds ground terms; nullopt when the ground term is undefined.
  std::optional<TermPtr> fold(const TermPtr& t) {
    if (t->op == Op::Var || is_literal(*t) || !is_ground(*t)) return t;
    auto v = eval_term(*t, {});
    if (!v) return std::nullopt;
    return literal_of(*v);
  }

  // A variable or literal standing for `t`.
  std::optional<TermPtr> operand(const TermPtr& t, size_t offset) {
    auto f = fold(t);
    if (!f) return std::nullopt;
    if ((*f)->op == Op::Var || is_literal(**f)) return *f;
    if ((*f)->sort == Sort::Int) return integer(*f, offset);
    auto app = application(*f, offset);
    if (!app) return std::nullopt;
    std::string v = fresh((*f)->sort);
    TermPtr var = Term::var(v, (*f)->sort);
    emit(AtomKind::Equal, var, *app, offset);
    return var;
  }

  std::optional<TermPtr> integer(const TermPtr& t, size_t offset) {
    switch (t->op) {
      case Op::Var:
      case Op::IntLit:
        return t;
      case Op::StrLen:
      case Op::SeqLen: {
        auto a = operand(t->args[0], offset);
        if (!a) return std::nullopt;
        auto copy = std::make_shared<Term>(*t);
        copy->args = {*a};
        return fold(copy);
      }
      default: {
        auto copy = std::make_shared<Term>(*t);
        for (auto& a : copy->args) {
          auto n = integer(a, offset);
          if (!n) return std::nullopt;
          a = *n;
        }
        return fold(copy);
      }
    }
  }

  // The application `t` with operands in place of its arguments.
  std::optional<TermPtr> application(const TermPtr& t, size_t offset) {
    auto copy = std::make_shared<Term>(*t);
    for (auto& a : copy->args) {
      auto n = a->sort == Sort::Int ? integer(a, offset) : operand(a, offset);
      if (!n) return std::nullopt;
      a = *n;
    }
    return TermPtr(copy);
  }

  void atom(const Atom& a) {
    switch (a.kind) {
      case AtomKind::Arith: {
        auto l = integer(a.lhs, a.offset);
        auto r = integer(a.rhs, a.offset);
        if (!l || !r) return emit_false(a.offset);
        emit(AtomKind::Arith, *l, *r, a.offset, a.rel);
        return;
      }
      case AtomKind::Member: {
        auto t = operand(a.lhs, a.offset);
        if (!t) return emit_false(a.offset);
        if ((*t)->op == Op::StrLit) {
          if (!regex_match(a.re, (*t)->str)) emit_false(a.offset);
          return;
        }
        emit(AtomKind::Member, *t, nullptr, a.offset, LiaRel::Eq, a.re);
        return;
      }
      case AtomKind::Equal:
        equality(a);
        return;
    }
  }

  void equality(const Atom& a) {
    auto l = fold(a.lhs);
    auto r = fold(a.rhs);
    if (!l || !r) return emit_false(a.offset);
    TermPtr lhs = *l, rhs = *r;
    bool lvar = lhs->op == Op::Var, rvar = rhs->op == Op::Var;
    bool llit = is_literal(*lhs), rlit = is_literal(*rhs);
    if (llit && rlit) {
      auto lv = eval_term(*lhs, {});
      auto rv = eval_term(*rhs, {});
      if (!(lv && rv && *lv == *rv)) emit_false(a.offset);
      return;
    }
    if (!lvar && rvar) std::swap(lhs, rhs), std::swap(lvar, rvar), std::swap(llit, rlit);
    if (lvar) {
      if (rvar || rlit) {
        emit(AtomKind::Equal, lhs, rhs, a.offset);
        return;
      }
      auto app = application(rhs, a.offset);
      if (!app) return emit_false(a.offset);
      emit(AtomKind::Equal, lhs, *app, a.offset);
      return;
    }
    // Neither side is a variable.
    if (llit) std::swap(lhs, rhs), std::swap(llit, rlit);
    auto lapp = application(lhs, a.offset);
    if (!lapp) return emit_false(a.offset);
    TermPtr v = Term::var(fresh(lhs->sort), lhs->sort);
    emit(AtomKind::Equal, v, *lapp, a.offset);
    if (rlit) {
      emit(AtomKind::Equal, v, rhs, a.offset);
      return;
    }
    auto rapp = application(rhs, a.offset);
    if (!rapp) return emit_false(a.offset);
    TermPtr w = Term::var(fresh(rhs->sort), rhs->sort);
    emit(AtomKind::Equal, w, *rapp, a.offset);
    emit(AtomKind::Equal, v, w, a.offset);
  }

  // A copy `x = y` defines whichever side has no other definition.
  void orient_copies() {
    std::map<std::string, int> defs;
    for (const auto& a : out_.atoms)
      if (is_definition(a) && a.rhs->op != Op::Var) ++defs[a.lhs->name];
    for (auto& a : out_.atoms) {
      if (!(a.kind == AtomKind::Equal && a.lhs->op == Op::Var && a.rhs->op == Op::Var)) continue;
      if (defs[a.lhs->name] > 0 && defs[a.rhs->name] == 0) std::swap(a.lhs, a.rhs);
      ++defs[a.lhs->name];
    }
  }

  const Script& in_;
  Script out_;
  int counter_ = 0;
};

void collect_non_integer_vars(const Term& t, std::set<std::string>& out) {
  if (t.sort == Sort::Int) return;
  if (t.op == Op::Var) out.insert(t.name);
  for (const auto& a : t.args) collect_non_integer_vars(*a, out);
}

}  // namespace

Script parse_script(std::string_view src) { return ScriptParser(src).run(); }

Script normalize(const Script& s) { return Normalizer(s).run(); }

bool is_definition(const Atom& a) {
  return a.kind == AtomKind::Equal && a.lhs->op == Op::Var && !is_literal(*a.rhs);
}

std::set<std::string> non_integer_vars(const Term& t) {
  std::set<std::string> out;
  collect_non_integer_vars(t, out);
  return out;
}

DependencyGraph dependency_graph(const Script& s) {
  DependencyGraph g;
  for (const auto& [v, sort] : s.vars)
    if (sort != Sort::Int) g.vertices.insert(v);
  for (const auto& a : s.atoms) {
    if (!is_definition(a)) continue;
    auto& out = g.edges[a.lhs->name];
    for (const auto& v : non_integer_vars(*a.rhs)) out.insert(v);
  }
  return g;
}

StraightLineReport check_straight_line(const Script& s) {
  StraightLineReport report;
  std::map<std::string, std::vector<const Atom*>> defs;
  for (const auto& a : s.atoms)
    if (is_definition(a)) defs[a.lhs->name].push_back(&a);
  for (const auto& [v, list] : defs) {
    if (list.size() < 2) continue;
    std::string msg = "variable '" + v + "' is defined more than once:";
    for (const Atom* a : list) msg += " " + atom_to_string(*a);
    report.violations.push_back(msg);
  }
  DependencyGraph g = dependency_graph(s);
  // Colour-based DFS reporting each back edge once.
  std::map<std::string, int> colour;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    colour[v] = 1;
    auto it = g.edges.find(v);
    if (it != g.edges.end())
      for (const auto& w : it->second) {
        if (colour[w] == 1) {
          std::string msg = "cyclic dependency through '" + w + "'";
          auto d = defs.find(v);
          if (d != defs.end()) msg += " in " + atom_to_string(*d->second.front());
          report.violations.push_back(msg);
        } else if (colour[w] == 0) {
          visit(w);
        }
      }
    colour[v] = 2;
  };
  for (const auto& v : g.vertices)
    if (colour[v] == 0) visit(v);
  report.ok = report.violations.empty();
  return report;
}

std::vector<const Atom*> definitions_in_propagation_order(const Script& s) {
  std::map<std::string, const Atom*> def;
  for (const auto& a : s.atoms)
    if (is_definition(a)) def[a.lhs->name] = &a;
  DependencyGraph g = dependency_graph(s);
  std::map<std::string, int> indegree;
  for (const auto& v : g.vertices) indegree[v];
  for (const auto& [v, out] : g.edges)
    for (const auto& w : out) ++indegree[w];
  std::vector<std::string> ready;
  for (const auto& [v, d] : indegree)
    if (d == 0) ready.push_back(v);
  std::vector<const Atom*> order;
  while (!ready.empty()) {
    std::string v = ready.back();
    ready.pop_back();
    auto d = def.find(v);
    if (d != def.end()) order.push_back(d->second);
    auto it = g.edges.find(v);
    if (it == g.edges.end()) continue;
    for (const auto& w : it->second)
      if (--indegree[w] == 0) ready.push_back(w);
  }
  return order;
}

}  // namespace seqstr
