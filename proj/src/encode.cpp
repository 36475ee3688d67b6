#include "seqstr/encode.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <tuple>

#include "seqstr/transducers.hpp"

namespace seqstr {

Word enc_value(const std::vector<Word>& s) {
  Word out(1, kSeparator);
  for (const auto& u : s) {
    if (u.find(kSeparator) != Word::npos) throw SeparatorInElement("sequence element contains the separator");
    out += u;
    out += kSeparator;
  }
  return out;
}

std::optional<std::vector<Word>> decode(std::u32string_view w) {
  if (w.empty() || w.front() != kSeparator || w.back() != kSeparator) return std::nullopt;
  std::vector<Word> out;
  size_t start = 1;
  while (start < w.size()) {
    size_t end = w.find(kSeparator, start);
    out.emplace_back(w.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

const FormatAutomata& format_automata() {
  static const FormatAutomata fa = [] {
    FormatAutomata out;
    // at_sep: the last symbol read was †.
    Nfa a0;
    int p0 = a0.add_state(true, false);
    int at_sep = a0.add_state(false, true);
    int in_elem = a0.add_state();
    a0.add_edge(p0, kSepRange, at_sep);
    a0.add_edge(at_sep, kSigma, in_elem);
    a0.add_edge(at_sep, kSepRange, at_sep);
    a0.add_edge(in_elem, kSigma, in_elem);
    a0.add_edge(in_elem, kSepRange, at_sep);
    out.a0 = a0;
    out.a1 = nfa_universal(Universe::Sigma);
    return out;
  }();
  return fa;
}

Int count_separators(std::u32string_view w) { return static_cast<Int>(std::count(w.begin(), w.end(), kSeparator)); }

namespace {

// Positions of every separator in w.
std::vector<size_t> separator_positions(std::u32string_view w) {
  std::vector<size_t> out;
  for (size_t i = 0; i < w.size(); ++i)
    if (w[i] == kSeparator) out.push_back(i);
  return out;
}

}  // namespace

std::optional<Word> str_elem(std::u32string_view x, Int k) {
  auto pos = separator_positions(x);
  Int n = static_cast<Int>(pos.size());
  if (k < 1 || k > n - 1) return std::nullopt;
  return Word(x.substr(pos[k - 1] + 1, pos[k] - pos[k - 1] - 1));
}

Word str_write(std::u32string_view x, Int k, std::u32string_view y) {
  auto pos = separator_positions(x);
  Int n = static_cast<Int>(pos.size());
  if (k < 1 || k > n - 1) return Word(x);
  Word out(x.substr(0, pos[k - 1] + 1));
  out += y;
  out += x.substr(pos[k]);
  return out;
}

std::optional<Word> str_subseq(std::u32string_view x, Int k, Int j) {
  auto pos = separator_positions(x);
  Int n = static_cast<Int>(pos.size());
  if (k < 1 || k > n - 1 || j < 0) return std::nullopt;
  if (j == 0) return Word(1, kSeparator);
  Int last = std::min(j, n - k) + k;  // min(k + j, n) without overflow
  return Word(x.substr(pos[k - 1], pos[last - 1] - pos[k - 1] + 1));
}

Word str_join(std::u32string_view x, std::u32string_view sep) {
  Word out;
  auto pos = separator_positions(x);
  if (pos.size() < 2) return out;
  for (size_t i = pos.front() + 1; i < pos.back(); ++i) {
    if (x[i] == kSeparator)
      out += sep;
    else
      out += x[i];
  }
  return out;
}

std::string xdef_to_string(const XDef& d) {
  auto idx = [&](size_t k) { return d.indices.at(k).to_string(); };
  switch (d.kind) {
    case XDefKind::Copy:
      return d.lhs + " = " + d.args[0];
    case XDefKind::Concat:
      return d.lhs + " = " + d.args[0] + " . " + d.args[1];
    case XDefKind::Transduce:
      return d.lhs + " = " + d.label + "(" + d.args[0] + ")";
    case XDefKind::Write:
      return d.lhs + " = write(" + d.args[0] + ", " + idx(0) + ", " + d.args[1] + ")";
    case XDefKind::Subseq:
      return d.lhs + " = subseq(" + d.args[0] + ", " + idx(0) + ", " + idx(1) + ")";
    case XDefKind::Elem:
      return d.lhs + " = elem(" + d.args[0] + ", " + idx(0) + ")";
  }
  return "";
}

std::string counter_name(const std::string& var, CounterKind kind) {
  return (kind == CounterKind::Length ? "#len(" : "#cnt(") + var + ")";
}

std::string XStrScript::to_text() const {
  std::ostringstream os;
  static const char* tags[] = {"plain", "seq", "raw"};
  for (const auto& [v, tag] : vars) os << "var " << v << " : " << tags[static_cast<int>(tag)] << '\n';
  for (const auto& v : int_vars) os << "int " << v << '\n';
  for (const auto& d : defs) os << xdef_to_string(d) << '\n';
  for (const auto& [v, a] : memberships) os << v << " in <nfa with " << a.num_states() << " states>\n";
  for (const auto& f : arith) os << f.to_string() << '\n';
  return os.str();
}

namespace {

class Encoder {
 public:
  explicit Encoder(const Script& s) : s_(s) {}

  XStrScript run() {
    for (const auto& [v, sort] : s_.vars) {
      if (sort == Sort::Int)
        x_.int_vars.insert(v);
      else
        x_.vars[v] = sort == Sort::Str ? VarTag::Plain : VarTag::Seq;
    }
    for (const auto& a : s_.atoms) atom(a);
    return std::move(x_);
  }

 private:
  std::string fresh(const char* prefix, VarTag tag) {
    std::string name;
    do name = std::string(prefix) + std::to_string(++counter_);
    while (s_.vars.count(name) || x_.vars.count(name));
    x_.vars[name] = tag;
    return name;
  }

  std::string operand(const Term& t) {
    switch (t.op) {
      case Op::Var:
        return t.name;
      case Op::StrLit: {
        std::string v = fresh("#l", VarTag::Plain);
        fix(v, t.str);
        return v;
      }
      case Op::SeqLit: {
        std::string v = fresh("#l", VarTag::Seq);
        fix(v, enc_value(t.elems));
        return v;
      }
      default:
        throw std::invalid_argument("enc_formula: script is not normalized at " + term_to_string(t));
    }
  }

  void fix(const std::string& v, const Word& w) {
    x_.memberships.emplace_back(v, nfa_word(w));
    x_.fixed.emplace(v, w);
  }

  LinExpr counter(const std::string& var, CounterKind kind) {
    std::string name = counter_name(var, kind);
    x_.counters[name] = {var, kind};
    return LinExpr::var(name);
  }

  LinExpr int_expr(const Term& t) {
    switch (t.op) {
      case Op::Var:
        return LinExpr::var(t.name);
      case Op::IntLit:
        return LinExpr(t.value);
      case Op::Add:
        return int_expr(*t.args[0]) + int_expr(*t.args[1]);
      case Op::Sub:
        return int_expr(*t.args[0]) - int_expr(*t.args[1]);
      case Op::Scale:
        return int_expr(*t.args[0]) * t.value;
      case Op::StrLen:
        return counter(operand(*t.args[0]), CounterKind::Length);
      case Op::SeqLen:
        return counter(operand(*t.args[0]), CounterKind::Separators) - 1;
      default:
        throw std::invalid_argument("enc_formula: not an integer term: " + term_to_string(t));
    }
  }

  void def(XDefKind kind, const std::string& lhs, std::vector<std::string> args, std::vector<LinExpr> indices = {}) {
    XDef d;
    d.kind = kind;
    d.lhs = lhs;
    d.args = std::move(args);
    d.indices = std::move(indices);
    x_.defs.push_back(std::move(d));
  }

  void transduce(const std::string& lhs, const std::string& arg, Nft t, std::string label) {
    XDef d;
    d.kind = XDefKind::Transduce;
    d.lhs = lhs;
    d.args = {arg};
    d.nft = std::make_shared<const Nft>(std::move(t));
    d.label = std::move(label);
    x_.defs.push_back(std::move(d));
  }

  void atom(const Atom& a) {
    switch (a.kind) {
      case AtomKind::Arith:
        x_.arith.push_back(LiaFormula::atom(int_expr(*a.lhs), a.rel, int_expr(*a.rhs)));
        return;
      case AtomKind::Member:
        x_.memberships.emplace_back(operand(*a.lhs), compile_regex(a.re));
        return;
      case AtomKind::Equal:
        break;
    }
    std::string x = operand(*a.lhs);
    const Term& r = *a.rhs;
    switch (r.op) {
      case Op::Var:
        def(XDefKind::Copy, x, {r.name});
        return;
      case Op::StrLit:
        fix(x, r.str);
        return;
      case Op::SeqLit:
        fix(x, enc_value(r.elems));
        return;
      case Op::StrConcat:
        def(XDefKind::Concat, x, {operand(*r.args[0]), operand(*r.args[1])});
        return;
      case Op::SeqConcat: {
        std::string tail = fresh("#r", VarTag::Raw);
        transduce(tail, operand(*r.args[1]), tail_nft(), "tail");
        def(XDefKind::Concat, x, {operand(*r.args[0]), tail});
        return;
      }
      case Op::Nth:
        def(XDefKind::Elem, x, {operand(*r.args[0])}, {int_expr(*r.args[1]) + 1});
        return;
      case Op::Update:
        def(XDefKind::Write, x, {operand(*r.args[0]), operand(*r.args[2])}, {int_expr(*r.args[1]) + 1});
        return;
      case Op::Extract:
        def(XDefKind::Subseq, x, {operand(*r.args[0])}, {int_expr(*r.args[1]) + 1, int_expr(*r.args[2])});
        return;
      case Op::Join:
        transduce(x, operand(*r.args[0]), join_nft(r.str), "join_" + to_utf8(r.str));
        return;
      case Op::SeqUnit:
        transduce(x, operand(*r.args[0]), wrap_nft(), "wrap");
        return;
      case Op::Filter:
        transduce(x, operand(*r.args[0]), filter_nft(r.re), "filter_" + r.re.to_string());
        return;
      case Op::Split:
        transduce(x, operand(*r.args[0]), splitstr_nft(r.re), "splitstr_" + r.re.to_string());
        return;
      case Op::MatchAll:
        transduce(x, operand(*r.args[0]), match_all_nft(r.re), "matchAll_" + r.re.to_string());
        return;
      default:
        throw std::invalid_argument("enc_formula: unexpected right-hand side " + term_to_string(r));
    }
  }

  const Script& s_;
  XStrScript x_;
  int counter_ = 0;
};

}  // namespace

XStrScript enc_formula(const Script& s) { return Encoder(s).run(); }

std::vector<const XDef*> xstr_propagation_order(const XStrScript& x) {
  std::map<std::string, const XDef*> def;
  std::map<std::string, int> indegree;
  for (const auto& [v, tag] : x.vars) indegree[v];
  for (const auto& d : x.defs) {
    def[d.lhs] = &d;
    for (const auto& a : d.args) ++indegree[a];
  }
  std::vector<std::string> ready;
  for (const auto& [v, n] : indegree)
    if (n == 0) ready.push_back(v);
  std::vector<const XDef*> order;
  while (!ready.empty()) {
    std::string v = ready.back();
    ready.pop_back();
    auto it = def.find(v);
    if (it == def.end()) continue;
    order.push_back(it->second);
    for (const auto& a : it->second->args)
      if (--indegree[a] == 0) ready.push_back(a);
  }
  return order;
}

std::optional<Word> xstr_eval_def(const XDef& d, const std::map<std::string, Word>& strings, const LiaModel& ints) {
  auto arg = [&](size_t k) -> const Word& { return strings.at(d.args[k]); };
  auto idx = [&](size_t k) { return d.indices.at(k).eval(ints); };
  try {
    switch (d.kind) {
      case XDefKind::Copy:
        return arg(0);
      case XDefKind::Concat:
        return arg(0) + arg(1);
      case XDefKind::Transduce: {
        auto outs = nft_outputs(*d.nft, arg(0), 2);
        if (outs.empty()) return std::nullopt;
        if (outs.size() > 1) throw std::logic_error("transducer " + d.label + " is not functional");
        return outs[0];
      }
      case XDefKind::Write:
        return str_write(arg(0), idx(0), arg(1));
      case XDefKind::Subseq:
        return str_subseq(arg(0), idx(0), idx(1));
      case XDefKind::Elem:
        return str_elem(arg(0), idx(0));
    }
  } catch (const ArithmeticOverflow&) {
    return std::nullopt;
  }
  return std::nullopt;
}

LiaModel xstr_counter_values(const XStrScript& x, const std::map<std::string, Word>& strings) {
  LiaModel out;
  for (const auto& [name, c] : x.counters) {
    auto it = strings.find(c.var);
    if (it == strings.end()) continue;
    out[name] = c.kind == CounterKind::Length ? static_cast<Int>(it->second.size()) : count_separators(it->second);
  }
  return out;
}

namespace {

bool tag_ok(VarTag tag, const Word& w) {
  switch (tag) {
    case VarTag::Plain:
      return w.find(kSeparator) == Word::npos;
    case VarTag::Seq:
      return nfa_accepts(format_automata().a0, w);
    case VarTag::Raw:
      return true;
  }
  return false;
}

LiaModel merged(const LiaModel& ints, const LiaModel& counters) {
  LiaModel m = ints;
  for (const auto& [k, v] : counters) m[k] = v;
  return m;
}

}  // namespace

bool xstr_check_model(const XStrScript& x, const std::map<std::string, Word>& strings, const LiaModel& ints) {
  for (const auto& [v, tag] : x.vars) {
    auto it = strings.find(v);
    if (it == strings.end() || !tag_ok(tag, it->second)) return false;
  }
  LiaModel m = merged(ints, xstr_counter_values(x, strings));
  try {
    for (const auto& d : x.defs) {
      auto v = xstr_eval_def(d, strings, m);
      if (!v || *v != strings.at(d.lhs)) return false;
    }
    for (const auto& [v, a] : x.memberships)
      if (!nfa_accepts(a, strings.at(v))) return false;
    for (const auto& f : x.arith)
      if (!lia_eval(f, m)) return false;
  } catch (const UnboundVariable&) {
    return false;
  }
  return true;
}

namespace {

class XBruteForce {
 public:
  XBruteForce(const XStrScript& x, const BruteForceBounds& b) : x_(x), b_(b) {}

  XStrBruteForceResult run() {
    build_domains();
    plan();
    XStrBruteForceResult r;
    if (settle(-1) && dfs(0)) {
      r.sat = true;
      r.strings = strings_;
      for (const auto& v : x_.int_vars) r.ints[v] = ints_.at(v);
    }
    r.gave_up = gave_up_;
    return r;
  }

 private:
  void build_domains() {
    words_.push_back({});
    for (size_t begin = 0, len = 1; len <= static_cast<size_t>(b_.max_len); ++len) {
      size_t end = words_.size();
      for (size_t k = begin; k < end; ++k)
        for (Symbol c : b_.alpha) words_.push_back(words_[k] + c);
      begin = end;
    }
    std::function<void(std::vector<Word>&)> grow = [&](std::vector<Word>& s) {
      encodings_.push_back(enc_value(s));
      if (static_cast<int>(s.size()) == b_.max_seq) return;
      for (const auto& w : words_) {
        s.push_back(w);
        grow(s);
        s.pop_back();
      }
    };
    std::vector<Word> s;
    grow(s);
    Int bound = std::max<Int>(b_.max_len, b_.max_seq);
    for (const auto& f : x_.arith) bound = std::max(bound, max_constant(f));
    for (const auto& d : x_.defs)
      for (const auto& e : d.indices) bound = std::max(bound, max_constant(e));
    int_lo_ = -2;
    int_hi_ = std::min<Int>(bound, 1'000'000) + 2;
    if (b_.int_range) std::tie(int_lo_, int_hi_) = *b_.int_range;
  }

  static Int magnitude(Int v) { return v == INT64_MIN ? INT64_MAX : std::abs(v); }

  static Int max_constant(const LinExpr& e) {
    Int best = magnitude(e.constant());
    for (const auto& [v, c] : e.coeffs()) best = std::max(best, magnitude(c));
    return best;
  }

  static Int max_constant(const LiaFormula& f) {
    if (f.kind() == LiaFormula::Kind::Atom) return max_constant(f.expr());
    Int best = 0;
    if (f.kind() == LiaFormula::Kind::And || f.kind() == LiaFormula::Kind::Or)
      for (const auto& c : f.children()) best = std::max(best, max_constant(c));
    return best;
  }

  int level_of_int(const std::string& v) const {
    auto c = x_.counters.find(v);
    return c != x_.counters.end() ? level_.at(c->second.var) : level_.at(v);
  }

  void plan() {
    auto defs = xstr_propagation_order(x_);
    std::reverse(defs.begin(), defs.end());
    std::set<std::string> defined;
    for (const XDef* d : defs) defined.insert(d->lhs);
    for (const auto& [v, tag] : x_.vars) {
      if (defined.count(v)) continue;
      auto f = x_.fixed.find(v);
      if (f != x_.fixed.end()) {
        level_[v] = -1;
        strings_[v] = f->second;
        continue;
      }
      level_[v] = static_cast<int>(sources_.size());
      sources_.push_back(v);
    }
    for (const auto& v : x_.int_vars) {
      level_[v] = static_cast<int>(sources_.size());
      sources_.push_back(v);
    }
    for (const XDef* d : defs) {
      int lv = -1;
      for (const auto& a : d->args) lv = std::max(lv, level_.at(a));
      bool ready = true;
      for (const auto& e : d->indices)
        for (const auto& [v, c] : e.coeffs()) {
          const std::string& base = x_.counters.count(v) ? x_.counters.at(v).var : v;
          if (!level_.count(base)) ready = false;
          else lv = std::max(lv, level_of_int(v));
        }
      if (!ready) throw std::invalid_argument("xstr_brute_force: index depends on a later definition");
      level_[d->lhs] = lv;
      defs_at_[lv].push_back(d);
    }
    for (const auto& [v, a] : x_.memberships) members_at_[level_.at(v)].push_back({v, &a});
    for (const auto& [v, tag] : x_.vars) tags_at_[level_.at(v)].push_back(v);
    for (const auto& f : x_.arith) {
      int lv = -1;
      for (const auto& v : f.vars()) lv = std::max(lv, level_of_int(v));
      arith_at_[lv].push_back(&f);
    }
  }

  void refresh_counters() {
    for (const auto& [name, c] : x_.counters) {
      auto it = strings_.find(c.var);
      if (it != strings_.end())
        ints_[name] = c.kind == CounterKind::Length ? static_cast<Int>(it->second.size()) : count_separators(it->second);
    }
  }

  bool settle(int lv) {
    refresh_counters();
    for (const XDef* d : defs_at_[lv]) {
      auto v = xstr_eval_def(*d, strings_, ints_);
      if (!v) return false;
      strings_[d->lhs] = std::move(*v);
      refresh_counters();
    }
    for (const auto& v : tags_at_[lv])
      if (!tag_ok(x_.vars.at(v), strings_.at(v))) return false;
    for (const auto& [v, a] : members_at_[lv])
      if (!nfa_accepts(*a, strings_.at(v))) return false;
    for (const LiaFormula* f : arith_at_[lv])
      if (!lia_eval(*f, ints_)) return false;
    return true;
  }

  bool attempt(size_t k) {
    if (++candidates_ > b_.max_candidates) gave_up_ = true;
    if (gave_up_) return false;
    return settle(static_cast<int>(k)) && dfs(k + 1);
  }

  bool dfs(size_t k) {
    if (k == sources_.size()) return true;
    const std::string& v = sources_[k];
    if (x_.int_vars.count(v)) {
      for (Int i = int_lo_; i <= int_hi_; ++i) {
        ints_[v] = i;
        if (attempt(k)) return true;
      }
      return false;
    }
    const auto& domain = x_.vars.at(v) == VarTag::Seq ? encodings_ : words_;
    for (const auto& w : domain) {
      strings_[v] = w;
      if (attempt(k)) return true;
    }
    return false;
  }

  const XStrScript& x_;
  const BruteForceBounds& b_;
  std::vector<Word> words_;
  std::vector<Word> encodings_;
  std::vector<std::string> sources_;
  std::map<std::string, int> level_;
  std::map<int, std::vector<const XDef*>> defs_at_;
  std::map<int, std::vector<std::pair<std::string, const Nfa*>>> members_at_;
  std::map<int, std::vector<std::string>> tags_at_;
  std::map<int, std::vector<const LiaFormula*>> arith_at_;
  std::map<std::string, Word> strings_;
  LiaModel ints_;
  Int int_lo_ = 0;
  Int int_hi_ = 0;
  long candidates_ = 0;
  bool gave_up_ = false;
};

}  // namespace

XStrBruteForceResult xstr_brute_force(const XStrScript& x, const BruteForceBounds& bounds) {
  return XBruteForce(x, bounds).run();
}

}  // namespace seqstr
