#include "seqstr/cefa.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace seqstr {

Cefa::Cefa(std::vector<std::string> registers) : registers_(std::move(registers)) {}

int Cefa::register_index(const std::string& name) const {
  auto it = std::find(registers_.begin(), registers_.end(), name);
  return it == registers_.end() ? -1 : static_cast<int>(it - registers_.begin());
}

int Cefa::add_state(bool initial, bool final) {
  out_.emplace_back();
  initial_.push_back(initial ? 1 : 0);
  final_.push_back(final ? 1 : 0);
  return num_states() - 1;
}

void Cefa::add_edge(int src, CharRange label, int dst, CostVector upd) {
  if (src < 0 || src >= num_states() || dst < 0 || dst >= num_states())
    throw UnknownState("Cefa::add_edge: unknown state");
  if (upd.empty()) upd.assign(registers_.size(), 0);
  if (upd.size() != registers_.size()) throw std::invalid_argument("Cefa::add_edge: update vector has wrong length");
  if (label.empty()) return;
  out_[src].push_back({label, dst, std::move(upd)});
}

void Cefa::set_initial(int q, bool value) { initial_.at(q) = value ? 1 : 0; }
void Cefa::set_final(int q, bool value) { final_.at(q) = value ? 1 : 0; }

size_t Cefa::num_edges() const {
  size_t n = 0;
  for (const auto& e : out_) n += e.size();
  return n;
}

std::vector<int> Cefa::initial_states() const {
  std::vector<int> out;
  for (int q = 0; q < num_states(); ++q)
    if (initial_[q]) out.push_back(q);
  return out;
}

std::vector<int> Cefa::final_states() const {
  std::vector<int> out;
  for (int q = 0; q < num_states(); ++q)
    if (final_[q]) out.push_back(q);
  return out;
}

std::string Cefa::to_text() const {
  std::ostringstream os;
  os << "registers:";
  for (const auto& r : registers_) os << ' ' << r;
  os << "\ninitial:";
  for (int q : initial_states()) os << ' ' << q;
  os << "\nfinal:";
  for (int q : final_states()) os << ' ' << q;
  os << '\n';
  for (int q = 0; q < num_states(); ++q)
    for (const auto& e : out_[q]) {
      os << q << ' ' << std::hex << static_cast<uint32_t>(e.label.lo) << '-' << static_cast<uint32_t>(e.label.hi)
         << std::dec << ' ' << e.dst << " ; updates=(";
      for (size_t i = 0; i < e.upd.size(); ++i) os << (i ? "," : "") << e.upd[i];
      os << ")\n";
    }
  return os.str();
}

Cefa cefa_from_nfa(const Nfa& a) {
  Cefa out;
  for (int q = 0; q < a.num_states(); ++q) out.add_state(a.is_initial(q), a.is_final(q));
  for (int q = 0; q < a.num_states(); ++q)
    for (const auto& e : a.edges(q)) out.add_edge(q, e.label, e.dst);
  return out;
}

Nfa cefa_to_nfa(const Cefa& a) {
  Nfa out;
  for (int q = 0; q < a.num_states(); ++q) out.add_state(a.is_initial(q), a.is_final(q));
  for (int q = 0; q < a.num_states(); ++q)
    for (const auto& e : a.edges(q)) out.add_edge(q, e.label, e.dst);
  return out;
}

Cefa cefa_product(const Cefa& a, const Cefa& b, size_t max_states) {
  for (const auto& r : b.registers())
    if (a.register_index(r) >= 0) throw RegisterClash("register '" + r + "' occurs in both automata");
  std::vector<std::string> regs = a.registers();
  regs.insert(regs.end(), b.registers().begin(), b.registers().end());
  Cefa out(regs);
  std::map<std::pair<int, int>, int> ids;
  std::deque<std::pair<int, int>> work;
  auto id_of = [&](int p, int q) {
    auto [it, fresh] = ids.emplace(std::make_pair(p, q), out.num_states());
    if (fresh) {
      if (max_states && static_cast<size_t>(out.num_states()) >= max_states)
        throw StateLimitExceeded("product exceeds " + std::to_string(max_states) + " states");
      out.add_state(a.is_initial(p) && b.is_initial(q), a.is_final(p) && b.is_final(q));
      work.emplace_back(p, q);
    }
    return it->second;
  };
  for (int p : a.initial_states())
    for (int q : b.initial_states()) id_of(p, q);
  while (!work.empty()) {
    auto [p, q] = work.front();
    work.pop_front();
    int src = ids.at({p, q});
    for (const auto& ea : a.edges(p))
      for (const auto& eb : b.edges(q)) {
        CharRange l = intersect(ea.label, eb.label);
        if (l.empty()) continue;
        CostVector upd = ea.upd;
        upd.insert(upd.end(), eb.upd.begin(), eb.upd.end());
        out.add_edge(src, l, id_of(ea.dst, eb.dst), std::move(upd));
      }
  }
  return cefa_trim(out);
}

Cefa cefa_trim(const Cefa& a) {
  int n = a.num_states();
  std::vector<char> fwd(n, 0), bwd(n, 0);
  std::vector<std::vector<int>> rev(n);
  std::vector<int> stack;
  for (int q = 0; q < n; ++q) {
    for (const auto& e : a.edges(q)) rev[e.dst].push_back(q);
    if (a.is_initial(q)) {
      fwd[q] = 1;
      stack.push_back(q);
    }
  }
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (const auto& e : a.edges(q))
      if (!fwd[e.dst]) {
        fwd[e.dst] = 1;
        stack.push_back(e.dst);
      }
  }
  for (int q = 0; q < n; ++q)
    if (a.is_final(q) && fwd[q]) {
      bwd[q] = 1;
      stack.push_back(q);
    }
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int p : rev[q])
      if (fwd[p] && !bwd[p]) {
        bwd[p] = 1;
        stack.push_back(p);
      }
  }
  Cefa out(a.registers());
  std::vector<int> id(n, -1);
  for (int q = 0; q < n; ++q)
    if (bwd[q]) id[q] = out.add_state(a.is_initial(q), a.is_final(q));
  for (int q = 0; q < n; ++q) {
    if (id[q] < 0) continue;
    for (const auto& e : a.edges(q))
      if (id[e.dst] >= 0) out.add_edge(id[q], e.label, id[e.dst], e.upd);
  }
  return out;
}

bool cefa_is_empty(const Cefa& a) { return cefa_trim(a).num_states() == 0; }

std::set<CostVector> cefa_accepts_with_cost(const Cefa& a, std::u32string_view w) {
  std::set<std::pair<int, CostVector>> cur;
  for (int q : a.initial_states()) cur.insert({q, CostVector(a.num_registers(), 0)});
  for (Symbol c : w) {
    std::set<std::pair<int, CostVector>> next;
    for (const auto& [q, cost] : cur)
      for (const auto& e : a.edges(q)) {
        if (!e.label.contains(c)) continue;
        CostVector sum = cost;
        for (size_t i = 0; i < sum.size(); ++i) sum[i] = checked_add(sum[i], e.upd[i]);
        next.insert({e.dst, std::move(sum)});
      }
    cur.swap(next);
    if (cur.empty()) break;
  }
  std::set<CostVector> out;
  for (const auto& [q, cost] : cur)
    if (a.is_final(q)) out.insert(cost);
  return out;
}

Cefa cefa_sub_automaton(const Cefa& a, int p, int q) {
  if (p < 0 || p >= a.num_states() || q < 0 || q >= a.num_states())
    throw UnknownState("cefa_sub_automaton: unknown state");
  Cefa out(a.registers());
  for (int s = 0; s < a.num_states(); ++s) out.add_state(s == p, s == q);
  for (int s = 0; s < a.num_states(); ++s)
    for (const auto& e : a.edges(s)) out.add_edge(s, e.label, e.dst, e.upd);
  return out;
}

Cefa cefa_rename_registers(const Cefa& a, const std::map<std::string, std::string>& map) {
  std::vector<std::string> regs;
  std::set<std::string> seen;
  for (const auto& r : a.registers()) {
    auto it = map.find(r);
    const std::string& name = it == map.end() ? r : it->second;
    if (!seen.insert(name).second) throw NonInjectiveMap("register rename maps two registers to '" + name + "'");
    regs.push_back(name);
  }
  Cefa out(regs);
  for (int s = 0; s < a.num_states(); ++s) out.add_state(a.is_initial(s), a.is_final(s));
  for (int s = 0; s < a.num_states(); ++s)
    for (const auto& e : a.edges(s)) out.add_edge(s, e.label, e.dst, e.upd);
  return out;
}

Cefa cefa_drop_registers(const Cefa& a, const std::set<std::string>& names) {
  std::vector<size_t> keep;
  std::vector<std::string> regs;
  for (size_t i = 0; i < a.num_registers(); ++i)
    if (!names.count(a.registers()[i])) {
      keep.push_back(i);
      regs.push_back(a.registers()[i]);
    }
  Cefa out(regs);
  for (int s = 0; s < a.num_states(); ++s) out.add_state(a.is_initial(s), a.is_final(s));
  for (int s = 0; s < a.num_states(); ++s) {
    std::set<std::tuple<CharRange, int, CostVector>> seen;
    for (const auto& e : a.edges(s)) {
      CostVector upd;
      for (size_t i : keep) upd.push_back(e.upd[i]);
      if (seen.insert({e.label, e.dst, upd}).second) out.add_edge(s, e.label, e.dst, regs.empty() ? CostVector{} : upd);
    }
  }
  return out;
}

Cefa cefa_fix_register(const Cefa& a, const std::string& name, Int value, size_t max_states) {
  int k = a.register_index(name);
  if (k < 0) throw std::invalid_argument("cefa_fix_register: unknown register '" + name + "'");
  for (int s = 0; s < a.num_states(); ++s)
    for (const auto& e : a.edges(s))
      if (e.upd[k] < 0) throw std::invalid_argument("cefa_fix_register: register '" + name + "' can decrease");
  std::vector<std::string> regs;
  for (const auto& r : a.registers())
    if (r != name) regs.push_back(r);
  Cefa out(regs);
  if (value < 0) return out;
  std::map<std::pair<int, Int>, int> ids;
  std::deque<std::pair<int, Int>> work;
  auto id_of = [&](int q, Int v) {
    auto [it, fresh] = ids.emplace(std::make_pair(q, v), out.num_states());
    if (fresh) {
      if (max_states && static_cast<size_t>(out.num_states()) >= max_states)
        throw StateLimitExceeded("register specialization exceeds " + std::to_string(max_states) + " states");
      out.add_state(v == 0 && a.is_initial(q), v == value && a.is_final(q));
      work.emplace_back(q, v);
    }
    return it->second;
  };
  for (int q : a.initial_states()) id_of(q, 0);
  while (!work.empty()) {
    auto [q, v] = work.front();
    work.pop_front();
    int src = ids.at({q, v});
    for (const auto& e : a.edges(q)) {
      Int nv = checked_add(v, e.upd[k]);
      if (nv > value) continue;
      CostVector upd;
      for (size_t i = 0; i < e.upd.size(); ++i)
        if (static_cast<int>(i) != k) upd.push_back(e.upd[i]);
      out.add_edge(src, e.label, id_of(e.dst, nv), regs.empty() ? CostVector{} : upd);
    }
  }
  return cefa_trim(out);
}

FlowEncoding cefa_flow_encoding(const Cefa& a, const std::string& p) {
  FlowEncoding enc;
  std::vector<LiaFormula> parts;
  const int n = a.num_states();
  std::vector<LinExpr> inflow(n), outflow(n);
  std::vector<LinExpr> regs(a.num_registers());
  int t = 0;
  for (int q = 0; q < n; ++q)
    for (const auto& e : a.edges(q)) {
      std::string y = p + "y" + std::to_string(t++);
      enc.count_vars.push_back(y);
      enc.edge_ends.emplace_back(q, e.dst);
      LinExpr ye = LinExpr::var(y);
      parts.push_back(LiaFormula::ge(ye, 0));
      outflow[q] += ye;
      inflow[e.dst] += ye;
      for (size_t k = 0; k < regs.size(); ++k)
        if (e.upd[k] != 0) regs[k] += ye * e.upd[k];
    }
  LinExpr starts, ends;
  for (int q = 0; q < n; ++q) {
    if (a.is_initial(q)) {
      std::string s = p + "s" + std::to_string(q);
      enc.start_vars[q] = s;
      starts += LinExpr::var(s);
      inflow[q] += LinExpr::var(s);
      parts.push_back(LiaFormula::ge(LinExpr::var(s), 0));
      parts.push_back(LiaFormula::le(LinExpr::var(s), 1));
    }
    if (a.is_final(q)) {
      std::string f = p + "f" + std::to_string(q);
      enc.end_vars[q] = f;
      ends += LinExpr::var(f);
      outflow[q] += LinExpr::var(f);
      parts.push_back(LiaFormula::ge(LinExpr::var(f), 0));
      parts.push_back(LiaFormula::le(LinExpr::var(f), 1));
    }
  }
  parts.push_back(LiaFormula::eq(starts, 1));
  parts.push_back(LiaFormula::eq(ends, 1));
  for (int q = 0; q < n; ++q) parts.push_back(LiaFormula::eq(inflow[q], outflow[q]));
  for (size_t k = 0; k < regs.size(); ++k) parts.push_back(LiaFormula::eq(LinExpr::var(a.registers()[k]), regs[k]));
  enc.formula = LiaFormula::conj(std::move(parts));
  return enc;
}

RegisterImage cefa_register_image(const Cefa& input, const std::string& p) {
  Cefa a = cefa_trim(input);
  RegisterImage img;
  if (a.num_states() == 0) {
    img.formula = LiaFormula::falsity();
    return img;
  }
  FlowEncoding enc = cefa_flow_encoding(a, p);
  img.aux = enc.count_vars;
  for (const auto& [q, v] : enc.start_vars) img.aux.push_back(v);
  for (const auto& [q, v] : enc.end_vars) img.aux.push_back(v);
  std::vector<LiaFormula> parts{enc.formula};
  const int n = a.num_states();
  std::vector<LinExpr> inflow(n);
  std::vector<std::vector<size_t>> preds(n);
  for (size_t t = 0; t < enc.edge_ends.size(); ++t) {
    auto [src, dst] = enc.edge_ends[t];
    inflow[dst] += LinExpr::var(enc.count_vars[t]);
    if (src != dst) preds[dst].push_back(t);
  }
  // Every visited state other than the start has a used incoming edge from a
  // state one step closer to the start.
  for (int q = 0; q < n; ++q) {
    std::string d = p + "d" + std::to_string(q);
    img.aux.push_back(d);
    parts.push_back(LiaFormula::ge(LinExpr::var(d), 0));
    std::vector<LiaFormula> options;
    if (enc.start_vars.count(q)) options.push_back(LiaFormula::eq(LinExpr::var(enc.start_vars.at(q)), 1));
    options.push_back(LiaFormula::eq(inflow[q], 0));
    for (size_t t : preds[q]) {
      int src = enc.edge_ends[t].first;
      options.push_back(LiaFormula::ge(LinExpr::var(enc.count_vars[t]), 1) &&
                        LiaFormula::eq(LinExpr::var(d), LinExpr::var(p + "d" + std::to_string(src)) + 1));
    }
    parts.push_back(LiaFormula::disj(std::move(options)));
  }
  img.formula = LiaFormula::conj(std::move(parts));
  return img;
}

namespace {

// Builds the word of an Eulerian trail through the used edges, or returns
// none when the used edges are not connected to the start.
std::optional<Word> euler_word(const Cefa& a, const FlowEncoding& enc, const LiaModel& m) {
  int start = -1, end = -1;
  for (const auto& [q, v] : enc.start_vars)
    if (m.at(v) == 1) start = q;
  for (const auto& [q, v] : enc.end_vars)
    if (m.at(v) == 1) end = q;
  if (start < 0 || end < 0) return std::nullopt;
  const int n = a.num_states();
  std::vector<std::vector<std::pair<size_t, Int>>> adj(n);  // edge index, remaining uses
  std::vector<Symbol> label_of;
  std::vector<int> dst_of;
  size_t t = 0;
  for (int q = 0; q < n; ++q)
    for (const auto& e : a.edges(q)) {
      Int y = m.at(enc.count_vars[t]);
      if (y > 0) adj[q].push_back({t, y});
      label_of.push_back(representative(e.label));
      dst_of.push_back(e.dst);
      ++t;
    }
  // Hierholzer: iterative, consumes edge multiplicities.
  std::vector<size_t> ptr(n, 0);
  std::vector<std::pair<int, long>> stack{{start, -1}};
  std::vector<long> trail;
  while (!stack.empty()) {
    int q = stack.back().first;
    while (ptr[q] < adj[q].size() && adj[q][ptr[q]].second == 0) ++ptr[q];
    if (ptr[q] < adj[q].size()) {
      auto& slot = adj[q][ptr[q]];
      --slot.second;
      stack.push_back({dst_of[slot.first], static_cast<long>(slot.first)});
    } else {
      if (stack.back().second >= 0) trail.push_back(stack.back().second);
      stack.pop_back();
    }
  }
  for (int q = 0; q < n; ++q)
    for (const auto& [e, left] : adj[q])
      if (left != 0) return std::nullopt;
  std::reverse(trail.begin(), trail.end());
  Word w;
  int cur = start;
  for (long e : trail) {
    w.push_back(label_of[e]);
    cur = dst_of[e];
  }
  if (cur != end) return std::nullopt;
  return w;
}

// States reachable from the start through used edges.
std::vector<char> support_reach(const Cefa& a, const FlowEncoding& enc, const LiaModel& m, int start) {
  std::vector<char> seen(a.num_states(), 0);
  std::vector<std::vector<int>> adj(a.num_states());
  for (size_t t = 0; t < enc.edge_ends.size(); ++t)
    if (m.at(enc.count_vars[t]) > 0) adj[enc.edge_ends[t].first].push_back(enc.edge_ends[t].second);
  std::vector<int> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int d : adj[q])
      if (!seen[d]) {
        seen[d] = 1;
        stack.push_back(d);
      }
  }
  return seen;
}

}  // namespace

ImageSolveResult cefa_solve_images(const std::vector<Cefa>& input, const LiaFormula& extra, const LiaOptions& opts) {
  ImageSolveResult result;
  std::vector<Cefa> automata;
  std::vector<FlowEncoding> encs;
  std::vector<LiaFormula> parts{extra};
  for (size_t i = 0; i < input.size(); ++i) {
    automata.push_back(cefa_trim(input[i]));
    if (automata.back().num_states() == 0) {
      result.status = LiaResult::Status::Unsat;
      return result;
    }
    if (automata.back().num_registers() == 0) {
      encs.emplace_back();
      continue;
    }
    encs.push_back(cefa_flow_encoding(automata.back(), "c" + std::to_string(i) + "!"));
    parts.push_back(encs.back().formula);
  }
  for (int round = 0; round < 10000; ++round) {
    LiaResult r = lia_check_sat(LiaFormula::conj(parts), opts);
    if (!r.sat()) {
      result.status = r.status;
      result.reason = r.reason;
      return result;
    }
    bool connected = true;
    std::vector<Word> words;
    for (size_t i = 0; i < automata.size(); ++i) {
      const Cefa& a = automata[i];
      if (a.num_registers() == 0) {
        words.push_back(*nfa_shortest_word(cefa_to_nfa(a)));
        continue;
      }
      const FlowEncoding& enc = encs[i];
      int start = -1;
      for (const auto& [q, v] : enc.start_vars)
        if (r.model.at(v) == 1) start = q;
      std::vector<char> reach = support_reach(a, enc, r.model, start);
      // Cut off the used edges that leave unreachable states.
      LinExpr inside_use, entering;
      bool needs_cut = false;
      for (size_t t = 0; t < enc.edge_ends.size(); ++t) {
        auto [src, dst] = enc.edge_ends[t];
        LinExpr y = LinExpr::var(enc.count_vars[t]);
        if (!reach[src]) {
          inside_use += y;
          if (r.model.at(enc.count_vars[t]) > 0) needs_cut = true;
        } else if (!reach[dst]) {
          entering += y;
        }
      }
      if (needs_cut) {
        connected = false;
        LinExpr start_inside;
        for (const auto& [q, v] : enc.start_vars)
          if (!reach[q]) start_inside += LinExpr::var(v);
        parts.push_back(LiaFormula::disj({LiaFormula::eq(inside_use, 0), LiaFormula::ge(entering, 1),
                                          LiaFormula::ge(start_inside, 1)}));
        continue;
      }
      auto w = euler_word(a, enc, r.model);
      if (!w) throw std::logic_error("cefa_solve_images: flow model without Eulerian trail");
      words.push_back(*w);
    }
    if (connected) {
      result.status = LiaResult::Status::Sat;
      result.model = std::move(r.model);
      result.words = std::move(words);
      return result;
    }
  }
  result.status = LiaResult::Status::Unknown;
  result.reason = "connectivity refinement did not converge";
  return result;
}

std::optional<Word> cefa_witness(const Cefa& a, const CostVector& c, const LiaOptions& opts) {
  if (c.size() != a.num_registers()) throw std::invalid_argument("cefa_witness: cost vector has wrong length");
  // Work on private register names so the caller's names cannot collide.
  std::map<std::string, std::string> rename;
  std::vector<LiaFormula> pins;
  for (size_t k = 0; k < c.size(); ++k) {
    std::string name = "w!r" + std::to_string(k);
    rename[a.registers()[k]] = name;
    pins.push_back(LiaFormula::eq(LinExpr::var(name), c[k]));
  }
  Cefa renamed = cefa_rename_registers(a, rename);
  if (renamed.num_registers() == 0) {
    auto w = nfa_shortest_word(cefa_to_nfa(renamed));
    return w;
  }
  ImageSolveResult r = cefa_solve_images({renamed}, LiaFormula::conj(std::move(pins)), opts);
  if (r.status != LiaResult::Status::Sat) return std::nullopt;
  return r.words[0];
}

}  // namespace seqstr
