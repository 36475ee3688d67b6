#include "seqstr/interp.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <tuple>

namespace seqstr {

Value Value::of_int(Int v) {
  Value r;
  r.kind = Kind::Int;
  r.i = v;
  return r;
}

Value Value::of_str(Word w) {
  Value r;
  r.kind = Kind::Str;
  r.s = std::move(w);
  return r;
}

Value Value::of_seq(std::vector<Word> elems) {
  Value r;
  r.kind = Kind::Seq;
  r.seq = std::move(elems);
  return r;
}

Sort Value::sort() const {
  switch (kind) {
    case Kind::Int:
      return Sort::Int;
    case Kind::Str:
      return Sort::Str;
    case Kind::Seq:
      return Sort::Seq;
  }
  return Sort::Int;
}

std::string value_to_smtlib(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Int:
      return v.i < 0 ? "(- " + std::to_string(v.i).substr(1) + ")" : std::to_string(v.i);
    case Value::Kind::Str:
      return smtlib_string_literal(v.s);
    case Value::Kind::Seq:
      return term_to_string(*Term::seq_lit(v.seq));
  }
  return "";
}

const Nfa& regex_nfa(const Regex& e) {
  static std::mutex mu;
  static std::map<std::string, Nfa> cache;
  std::string key = e.to_smtlib();
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, compile_regex(e)).first;
  return it->second;
}

bool regex_match(const Regex& e, std::u32string_view w) { return nfa_accepts(regex_nfa(e), w); }

std::optional<size_t> longest_match_at(const Nfa& a, std::u32string_view w, size_t pos) {
  std::vector<char> cur(a.num_states(), 0);
  bool any = false;
  for (int q : a.initial_states()) cur[q] = 1, any = true;
  std::optional<size_t> best;
  for (size_t p = pos;; ++p) {
    for (int q = 0; q < a.num_states(); ++q)
      if (cur[q] && a.is_final(q)) {
        best = p - pos;
        break;
      }
    if (!any || p == w.size()) break;
    std::vector<char> next(a.num_states(), 0);
    any = false;
    for (int q = 0; q < a.num_states(); ++q) {
      if (!cur[q]) continue;
      for (const auto& e : a.edges(q))
        if (e.label.contains(w[p])) next[e.dst] = 1, any = true;
    }
    cur.swap(next);
  }
  return best;
}

std::vector<MatchSpan> leftmost_longest_matches(const Nfa& a, std::u32string_view w) {
  std::vector<MatchSpan> out;
  size_t p = 0;
  while (p < w.size()) {
    auto len = longest_match_at(a, w, p);
    if (!len) {
      ++p;
      continue;
    }
    out.push_back({p, *len});
    p += *len > 0 ? *len : 1;
  }
  return out;
}

std::vector<Word> seq_split(const Regex& e, std::u32string_view u) {
  std::vector<Word> out;
  size_t seg = 0;
  for (const auto& m : leftmost_longest_matches(regex_nfa(e), u)) {
    out.emplace_back(u.substr(seg, m.start - seg));
    seg = m.start + m.len;
  }
  out.emplace_back(u.substr(seg));
  return out;
}

std::vector<Word> seq_match_all(const Regex& e, std::u32string_view u) {
  std::vector<Word> out;
  for (const auto& m : leftmost_longest_matches(regex_nfa(e), u)) out.emplace_back(u.substr(m.start, m.len));
  return out;
}

Word str_replace_all(const Regex& e, std::u32string_view u, std::u32string_view rep) {
  Word out;
  size_t seg = 0;
  for (const auto& m : leftmost_longest_matches(regex_nfa(e), u)) {
    out.append(u.substr(seg, m.start - seg));
    out.append(rep);
    seg = m.start + m.len;
  }
  out.append(u.substr(seg));
  return out;
}

std::vector<Word> seq_filter(const Regex& e, const std::vector<Word>& s) {
  std::vector<Word> out;
  for (const auto& w : s)
    if (regex_match(e, w)) out.push_back(w);
  return out;
}

Word seq_join(const std::vector<Word>& s, std::u32string_view sep) {
  Word out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(s[i]);
  }
  return out;
}

std::optional<Word> seq_nth(const std::vector<Word>& s, Int i) {
  if (i < 0 || i >= static_cast<Int>(s.size())) return std::nullopt;
  return s[i];
}

std::vector<Word> seq_update(const std::vector<Word>& s, Int i, const Word& u) {
  std::vector<Word> out = s;
  if (i >= 0 && i < static_cast<Int>(s.size())) out[i] = u;
  return out;
}

std::optional<std::vector<Word>> seq_extract(const std::vector<Word>& s, Int i, Int j) {
  Int m = static_cast<Int>(s.size());
  if (i < 0 || i >= m || j < 0) return std::nullopt;
  Int last = std::min(j - 1, m - 1 - i) + i;  // avoids i + j overflow
  return std::vector<Word>(s.begin() + i, s.begin() + last + 1);
}

namespace {

std::optional<Int> eval_int(const Term& t, const Assignment& m) {
  auto v = eval_term(t, m);
  if (!v) return std::nullopt;
  return v->i;
}

}  // namespace

std::optional<Value> eval_term(const Term& t, const Assignment& m) {
  auto arg = [&](size_t k) { return eval_term(*t.args[k], m); };
  try {
    switch (t.op) {
      case Op::Var: {
        auto it = m.find(t.name);
        if (it == m.end()) throw UnboundVariable(t.name);
        return it->second;
      }
      case Op::IntLit:
        return Value::of_int(t.value);
      case Op::StrLit:
        return Value::of_str(t.str);
      case Op::SeqLit:
        return Value::of_seq(t.elems);
      case Op::Add:
      case Op::Sub: {
        auto a = eval_int(*t.args[0], m), b = eval_int(*t.args[1], m);
        if (!a || !b) return std::nullopt;
        if (t.op == Op::Add) return Value::of_int(checked_add(*a, *b));
        return Value::of_int(checked_add(*a, checked_mul(*b, -1)));
      }
      case Op::Scale: {
        auto a = eval_int(*t.args[0], m);
        if (!a) return std::nullopt;
        return Value::of_int(checked_mul(t.value, *a));
      }
      case Op::StrLen: {
        auto a = arg(0);
        if (!a) return std::nullopt;
        return Value::of_int(static_cast<Int>(a->s.size()));
      }
      case Op::SeqLen: {
        auto a = arg(0);
        if (!a) return std::nullopt;
        return Value::of_int(static_cast<Int>(a->seq.size()));
      }
      case Op::StrConcat: {
        auto a = arg(0), b = arg(1);
        if (!a || !b) return std::nullopt;
        return Value::of_str(a->s + b->s);
      }
      case Op::Nth: {
        auto a = arg(0), i = arg(1);
        if (!a || !i) return std::nullopt;
        auto r = seq_nth(a->seq, i->i);
        if (!r) return std::nullopt;
        return Value::of_str(*r);
      }
      case Op::Join: {
        auto a = arg(0);
        if (!a) return std::nullopt;
        return Value::of_str(seq_join(a->seq, t.str));
      }
      case Op::SeqUnit: {
        auto a = arg(0);
        if (!a) return std::nullopt;
        return Value::of_seq({a->s});
      }
      case Op::SeqConcat: {
        auto a = arg(0), b = arg(1);
        if (!a || !b) return std::nullopt;
        std::vector<Word> out = a->seq;
        out.insert(out.end(), b->seq.begin(), b->seq.end());
        return Value::of_seq(std::move(out));
      }
      case Op::Update: {
        auto a = arg(0), i = arg(1), u = arg(2);
        if (!a || !i || !u) return std::nullopt;
        return Value::of_seq(seq_update(a->seq, i->i, u->s));
      }
      case Op::Filter: {
        auto a = arg(0);
        if (!a) return std::nullopt;
        return Value::of_seq(seq_filter(t.re, a->seq));
      }
      case Op::Split: {
        auto a = arg(0);
        if (!a) return std::nullopt;
        return Value::of_seq(seq_split(t.re, a->s));
      }
      case Op::MatchAll: {
        auto a = arg(0);
        if (!a) return std::nullopt;
        return Value::of_seq(seq_match_all(t.re, a->s));
      }
      case Op::Extract: {
        auto a = arg(0), i = arg(1), j = arg(2);
        if (!a || !i || !j) return std::nullopt;
        auto r = seq_extract(a->seq, i->i, j->i);
        if (!r) return std::nullopt;
        return Value::of_seq(std::move(*r));
      }
    }
  } catch (const ArithmeticOverflow&) {
    return std::nullopt;
  }
  return std::nullopt;
}

bool eval_atom(const Atom& a, const Assignment& m) {
  auto l = eval_term(*a.lhs, m);
  if (!l) return false;
  switch (a.kind) {
    case AtomKind::Member:
      return regex_match(a.re, l->s);
    case AtomKind::Equal: {
      auto r = eval_term(*a.rhs, m);
      return r && *l == *r;
    }
    case AtomKind::Arith: {
      auto r = eval_term(*a.rhs, m);
      if (!r) return false;
      switch (a.rel) {
        case LiaRel::Eq:
          return l->i == r->i;
        case LiaRel::Ne:
          return l->i != r->i;
        case LiaRel::Lt:
          return l->i < r->i;
        case LiaRel::Le:
          return l->i <= r->i;
        case LiaRel::Gt:
          return l->i > r->i;
        case LiaRel::Ge:
          return l->i >= r->i;
      }
    }
  }
  return false;
}

bool check_model(const Script& s, const Assignment& m) {
  for (const auto& [v, sort] : s.vars) {
    auto it = m.find(v);
    if (it == m.end() || it->second.sort() != sort) return false;
    if (sort == Sort::Seq)
      for (const auto& w : it->second.seq)
        if (w.find(kSeparator) != Word::npos) return false;
  }
  for (const auto& a : s.atoms)
    if (!eval_atom(a, m)) return false;
  return true;
}

namespace {

void free_vars(const Term& t, std::set<std::string>& out) {
  if (t.op == Op::Var) out.insert(t.name);
  for (const auto& a : t.args) free_vars(*a, out);
}

std::set<std::string> atom_vars(const Atom& a) {
  std::set<std::string> out;
  free_vars(*a.lhs, out);
  if (a.rhs) free_vars(*a.rhs, out);
  return out;
}

Int max_constant(const Term& t) {
  Int best = 0;
  if (t.op == Op::IntLit || t.op == Op::Scale) best = t.value == INT64_MIN ? INT64_MAX : std::abs(t.value);
  for (const auto& a : t.args) best = std::max(best, max_constant(*a));
  return best;
}

void all_words(const std::vector<Symbol>& alpha, int max_len, std::vector<Word>& out) {
  out.push_back({});
  size_t begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    size_t end = out.size();
    for (size_t k = begin; k < end; ++k)
      for (Symbol c : alpha) out.push_back(out[k] + c);
    begin = end;
  }
}

class BruteForce {
 public:
  BruteForce(const Script& s, const BruteForceBounds& b) : s_(s), b_(b) {}

  BruteForceResult run() {
    plan();
    all_words(b_.alpha, b_.max_len, words_);
    Int bound = std::max<Int>(b_.max_len, b_.max_seq);
    for (const auto& a : s_.atoms) {
      bound = std::max(bound, max_constant(*a.lhs));
      if (a.rhs) bound = std::max(bound, max_constant(*a.rhs));
    }
    int_lo_ = -2;
    int_hi_ = std::min<Int>(bound, 1'000'000) + 2;
    if (b_.int_range) std::tie(int_lo_, int_hi_) = *b_.int_range;
    BruteForceResult r;
    if (!settle(-1)) return r;
    if (dfs(0)) {
      r.status = BruteForceResult::Status::Sat;
      r.model = m_;
    } else if (gave_up_) {
      r.status = BruteForceResult::Status::GaveUp;
    }
    return r;
  }

 private:
  void plan() {
    std::vector<const Atom*> defs;
    if (check_straight_line(s_).ok) {
      defs = definitions_in_propagation_order(s_);
      std::reverse(defs.begin(), defs.end());
    }
    std::set<std::string> defined;
    for (const Atom* d : defs) defined.insert(d->lhs->name);
    // `x = literal` fixes x outright.
    for (const auto& a : s_.atoms)
      if (a.kind == AtomKind::Equal && a.lhs->op == Op::Var && !is_definition(a) && a.rhs->op != Op::Var &&
          defined.insert(a.lhs->name).second)
        defs.insert(defs.begin(), &a);
    // Strings and sequences first so that integer choices come last.
    for (Sort pass : {Sort::Str, Sort::Seq, Sort::Int})
      for (const auto& [v, sort] : s_.vars)
        if (sort == pass && !defined.count(v)) {
          level_[v] = static_cast<int>(sources_.size());
          sources_.push_back(v);
        }
    for (const Atom* d : defs) {
      std::set<std::string> vs;
      free_vars(*d->rhs, vs);
      int lv = -1;
      bool ready = true;
      for (const auto& v : vs) {
        auto it = level_.find(v);
        if (it == level_.end()) ready = false;
        else lv = std::max(lv, it->second);
      }
      if (!ready) {
        // An index mentions a length not yet computed; enumerate instead.
        level_[d->lhs->name] = static_cast<int>(sources_.size());
        sources_.push_back(d->lhs->name);
        continue;
      }
      level_[d->lhs->name] = lv;
      defs_at_[lv].push_back(d);
    }
    for (const auto& a : s_.atoms) {
      int lv = -1;
      for (const auto& v : atom_vars(a)) lv = std::max(lv, level_.at(v));
      atoms_at_[lv].push_back(&a);
    }
  }

  // Computes the definitions and checks the atoms that become ready at `lv`.
  bool settle(int lv) {
    for (const Atom* d : defs_at_[lv]) {
      auto v = eval_term(*d->rhs, m_);
      if (!v) return false;
      m_[d->lhs->name] = std::move(*v);
    }
    for (const Atom* a : atoms_at_[lv])
      if (!eval_atom(*a, m_)) return false;
    return true;
  }

  bool try_value(size_t k, Value v) {
    if (gave_up_) return false;
    if (++candidates_ > b_.max_candidates) {
      gave_up_ = true;
      return false;
    }
    m_[sources_[k]] = std::move(v);
    return settle(static_cast<int>(k)) && dfs(k + 1);
  }

  bool dfs(size_t k) {
    if (k == sources_.size()) return true;
    switch (s_.vars.at(sources_[k])) {
      case Sort::Int:
        for (Int i = int_lo_; i <= int_hi_; ++i)
          if (try_value(k, Value::of_int(i))) return true;
        return false;
      case Sort::Str:
        for (const auto& w : words_)
          if (try_value(k, Value::of_str(w))) return true;
        return false;
      case Sort::Seq: {
        std::vector<Word> seq;
        std::function<bool()> grow = [&]() {
          if (try_value(k, Value::of_seq(seq))) return true;
          if (static_cast<int>(seq.size()) == b_.max_seq || gave_up_) return false;
          for (const auto& w : words_) {
            seq.push_back(w);
            bool ok = grow();
            seq.pop_back();
            if (ok) return true;
          }
          return false;
        };
        return grow();
      }
    }
    return false;
  }

  const Script& s_;
  const BruteForceBounds& b_;
  std::vector<Word> words_;
  std::vector<std::string> sources_;
  std::map<std::string, int> level_;
  std::map<int, std::vector<const Atom*>> defs_at_;
  std::map<int, std::vector<const Atom*>> atoms_at_;
  Assignment m_;
  Int int_lo_ = 0;
  Int int_hi_ = 0;
  long candidates_ = 0;
  bool gave_up_ = false;
};

}  // namespace

BruteForceResult brute_force_sat(const Script& s, const BruteForceBounds& bounds) {
  return BruteForce(s, bounds).run();
}

}  // namespace seqstr
