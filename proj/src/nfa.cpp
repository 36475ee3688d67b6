#include "seqstr/nfa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace seqstr {

int Nfa::add_state(bool initial, bool final) {
  out_.emplace_back();
  initial_.push_back(initial ? 1 : 0);
  final_.push_back(final ? 1 : 0);
  return num_states() - 1;
}

void Nfa::add_edge(int src, CharRange label, int dst) {
  if (src < 0 || src >= num_states() || dst < 0 || dst >= num_states())
    throw std::out_of_range("Nfa::add_edge: unknown state");
  if (label.empty()) return;
  out_[src].push_back({label, dst});
}

void Nfa::set_initial(int q, bool value) { initial_.at(q) = value ? 1 : 0; }
void Nfa::set_final(int q, bool value) { final_.at(q) = value ? 1 : 0; }

size_t Nfa::num_edges() const {
  size_t n = 0;
  for (const auto& e : out_) n += e.size();
  return n;
}

std::vector<int> Nfa::initial_states() const {
  std::vector<int> out;
  for (int q = 0; q < num_states(); ++q)
    if (initial_[q]) out.push_back(q);
  return out;
}

std::vector<int> Nfa::final_states() const {
  std::vector<int> out;
  for (int q = 0; q < num_states(); ++q)
    if (final_[q]) out.push_back(q);
  return out;
}

namespace {

void print_state_list(std::ostringstream& os, const char* title, const std::vector<int>& qs) {
  os << title << ':';
  for (int q : qs) os << ' ' << q;
  os << '\n';
}

}  // namespace

std::string Nfa::to_text() const {
  std::ostringstream os;
  print_state_list(os, "initial", initial_states());
  print_state_list(os, "final", final_states());
  for (int q = 0; q < num_states(); ++q)
    for (const auto& e : out_[q])
      os << q << ' ' << std::hex << static_cast<uint32_t>(e.label.lo) << '-' << static_cast<uint32_t>(e.label.hi)
         << std::dec << ' ' << e.dst << '\n';
  return os.str();
}

Nfa nfa_empty() { return Nfa(); }

Nfa nfa_word(std::u32string_view w) {
  Nfa a;
  int q = a.add_state(true, w.empty());
  for (size_t i = 0; i < w.size(); ++i) {
    int next = a.add_state(false, i + 1 == w.size());
    a.add_edge(q, {w[i], w[i]}, next);
    q = next;
  }
  return a;
}

Nfa nfa_universal(Universe u) {
  Nfa a;
  int q = a.add_state(true, true);
  a.add_edge(q, universe_range(u), q);
  return a;
}

namespace {

// Copies the states of `src` into `dst`, returning the offset.
int embed(Nfa& dst, const Nfa& src, bool keep_initial, bool keep_final) {
  int offset = dst.num_states();
  for (int q = 0; q < src.num_states(); ++q)
    dst.add_state(keep_initial && src.is_initial(q), keep_final && src.is_final(q));
  for (int q = 0; q < src.num_states(); ++q)
    for (const auto& e : src.edges(q)) dst.add_edge(q + offset, e.label, e.dst + offset);
  return offset;
}

bool has_initial_final(const Nfa& a) {
  for (int q = 0; q < a.num_states(); ++q)
    if (a.is_initial(q) && a.is_final(q)) return true;
  return false;
}

Nfa star_of(const Nfa& a) {
  Nfa out;
  int start = out.add_state(true, true);
  int offset = embed(out, a, false, true);
  for (int i : a.initial_states()) {
    for (const auto& e : a.edges(i)) {
      out.add_edge(start, e.label, e.dst + offset);
      for (int f : a.final_states()) out.add_edge(f + offset, e.label, e.dst + offset);
    }
  }
  return nfa_trim(out);
}

}  // namespace

Nfa nfa_union(const Nfa& a, const Nfa& b) {
  Nfa out;
  embed(out, a, true, true);
  embed(out, b, true, true);
  return out;
}

Nfa nfa_concat(const Nfa& a, const Nfa& b) {
  Nfa out;
  bool a_nullable = has_initial_final(a);
  bool b_nullable = has_initial_final(b);
  int oa = embed(out, a, true, b_nullable);
  int ob = embed(out, b, a_nullable, true);
  for (int i : b.initial_states())
    for (const auto& e : b.edges(i))
      for (int f : a.final_states()) out.add_edge(f + oa, e.label, e.dst + ob);
  return nfa_trim(out);
}

Nfa compile_regex(const Regex& e) {
  switch (e.kind()) {
    case RegexKind::Empty:
      return nfa_empty();
    case RegexKind::Epsilon:
      return nfa_word(U"");
    case RegexKind::Range: {
      Nfa a;
      int s = a.add_state(true, false);
      int t = a.add_state(false, true);
      a.add_edge(s, {e.lo(), e.hi()}, t);
      return a;
    }
    case RegexKind::Union:
      return nfa_union(compile_regex(e.left()), compile_regex(e.right()));
    case RegexKind::Concat:
      return nfa_concat(compile_regex(e.left()), compile_regex(e.right()));
    case RegexKind::Star:
      return star_of(compile_regex(e.left()));
    case RegexKind::Complement:
      return nfa_trim(nfa_complement(compile_regex(e.left()), Universe::Sigma));
  }
  return nfa_empty();
}

Nfa nfa_intersect(const Nfa& a, const Nfa& b) {
  Nfa out;
  std::map<std::pair<int, int>, int> ids;
  std::deque<std::pair<int, int>> work;
  auto id_of = [&](int p, int q) {
    auto [it, fresh] = ids.emplace(std::make_pair(p, q), out.num_states());
    if (fresh) {
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
        int dst = id_of(ea.dst, eb.dst);
        out.add_edge(src, l, dst);
      }
  }
  return nfa_trim(out);
}

Nfa nfa_determinize(const Nfa& a, Universe u, bool complete) {
  const CharRange universe = universe_range(u);
  Nfa out;
  std::map<std::vector<int>, int> ids;
  std::deque<std::vector<int>> work;
  auto id_of = [&](const std::vector<int>& set) {
    auto [it, fresh] = ids.emplace(set, out.num_states());
    if (fresh) {
      bool fin = std::any_of(set.begin(), set.end(), [&](int q) { return a.is_final(q); });
      out.add_state(false, fin);
      work.push_back(set);
    }
    return it->second;
  };
  int start = id_of(a.initial_states());
  out.set_initial(start);
  while (!work.empty()) {
    std::vector<int> set = work.front();
    work.pop_front();
    int src = ids.at(set);
    std::vector<Symbol> cuts{universe.lo, universe.hi + 1};
    std::vector<NfaEdge> edges;
    for (int q : set)
      for (const auto& e : a.edges(q)) {
        CharRange l = intersect(e.label, universe);
        if (l.empty()) continue;
        edges.push_back({l, e.dst});
        cuts.push_back(l.lo);
        cuts.push_back(l.hi + 1);
      }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    // Adjacent blocks with the same successor set share one edge.
    std::vector<int> prev_target;
    CharRange pending{1, 0};
    auto flush = [&]() {
      if (pending.empty()) return;
      if (!prev_target.empty() || complete) out.add_edge(src, pending, id_of(prev_target));
    };
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      CharRange block{cuts[i], cuts[i + 1] - 1};
      std::vector<int> target;
      for (const auto& e : edges)
        if (e.label.lo <= block.lo && block.hi <= e.label.hi) target.push_back(e.dst);
      std::sort(target.begin(), target.end());
      target.erase(std::unique(target.begin(), target.end()), target.end());
      if (!pending.empty() && target == prev_target && pending.hi + 1 == block.lo) {
        pending.hi = block.hi;
      } else {
        flush();
        pending = block;
        prev_target = target;
      }
    }
    flush();
  }
  return out;
}

Nfa nfa_complement(const Nfa& a, Universe u) {
  Nfa d = nfa_determinize(a, u, true);
  for (int q = 0; q < d.num_states(); ++q) d.set_final(q, !d.is_final(q));
  return d;
}

Nfa nfa_trim(const Nfa& a) {
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
  Nfa out;
  std::vector<int> id(n, -1);
  for (int q = 0; q < n; ++q)
    if (bwd[q]) id[q] = out.add_state(a.is_initial(q), a.is_final(q));
  for (int q = 0; q < n; ++q) {
    if (id[q] < 0) continue;
    for (const auto& e : a.edges(q))
      if (id[e.dst] >= 0) out.add_edge(id[q], e.label, id[e.dst]);
  }
  return out;
}

bool nfa_accepts(const Nfa& a, std::u32string_view w) {
  std::vector<char> cur(a.num_states(), 0);
  for (int q : a.initial_states()) cur[q] = 1;
  for (Symbol c : w) {
    std::vector<char> next(a.num_states(), 0);
    bool any = false;
    for (int q = 0; q < a.num_states(); ++q) {
      if (!cur[q]) continue;
      for (const auto& e : a.edges(q))
        if (e.label.contains(c)) {
          next[e.dst] = 1;
          any = true;
        }
    }
    if (!any) return false;
    cur.swap(next);
  }
  for (int q = 0; q < a.num_states(); ++q)
    if (cur[q] && a.is_final(q)) return true;
  return false;
}

bool nfa_is_empty(const Nfa& a) { return nfa_trim(a).num_states() == 0; }

std::optional<Word> nfa_shortest_word(const Nfa& a) {
  int n = a.num_states();
  std::vector<int> parent(n, -2);
  std::vector<Symbol> via(n, 0);
  std::deque<int> work;
  for (int q : a.initial_states()) {
    parent[q] = -1;
    work.push_back(q);
  }
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    if (a.is_final(q)) {
      Word w;
      for (int p = q; parent[p] >= 0; p = parent[p]) w.push_back(via[p]);
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (const auto& e : a.edges(q))
      if (parent[e.dst] == -2) {
        parent[e.dst] = q;
        via[e.dst] = representative(e.label);
        work.push_back(e.dst);
      }
  }
  return std::nullopt;
}

}  // namespace seqstr
