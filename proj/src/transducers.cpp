#include "seqstr/transducers.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>
#include <vector>

#include "seqstr/nfa.hpp"

namespace seqstr {

namespace {

using StateSet = std::vector<int>;  // sorted

enum class MatchMode { NoMatch, Match, EndMatch };

enum class ScanKind { MatchAll, Replace };

struct ScanState {
  MatchMode mode = MatchMode::NoMatch;
  StateSet cur;
  StateSet noreach;
  friend auto operator<=>(const ScanState&, const ScanState&) = default;
};

StateSet set_union(const StateSet& a, const StateSet& b) {
  StateSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool meets_final(const Nfa& a, const StateSet& s) {
  return std::any_of(s.begin(), s.end(), [&](int q) { return a.is_final(q); });
}

StateSet successors(const Nfa& a, const StateSet& s, Symbol c) {
  std::vector<char> hit(a.num_states(), 0);
  for (int q : s)
    for (const auto& e : a.edges(q))
      if (e.label.contains(c)) hit[e.dst] = 1;
  StateSet out;
  for (int q = 0; q < a.num_states(); ++q)
    if (hit[q]) out.push_back(q);
  return out;
}

// The leftmost-longest scanner. Between matches, `noreach` holds the states
// of runs started at skipped positions (and of runs extending the previous
// match); reaching a final state from there would contradict the scan, so
// such states are pruned.
Nft scanner_nft(const Regex& e, ScanKind kind, const Output& rep, const Output& prefix, const Output& suffix) {
  const Nfa a = nfa_trim(nfa_determinize(compile_regex(e), Universe::Sigma, false));
  const StateSet init = a.initial_states();
  const bool nullable = meets_final(a, init);

  std::vector<CharRange> labels{kSigma};
  for (int q = 0; q < a.num_states(); ++q)
    for (const auto& ed : a.edges(q)) labels.push_back(ed.label);
  const std::vector<CharRange> blocks = refine_ranges(labels);

  Nft t;
  int entry = t.add_state(true, false);
  int done = t.add_state(false, true);
  std::map<ScanState, int> ids;
  std::deque<ScanState> work;
  auto id_of = [&](const ScanState& s) {
    auto [it, fresh] = ids.emplace(s, t.num_states());
    if (fresh) {
      t.add_state();
      work.push_back(s);
    }
    return it->second;
  };
  t.add_epsilon(entry, id_of({MatchMode::NoMatch, {}, {}}), prefix);

  Output echo{OutSym::echo()};
  Output open_echo = kind == ScanKind::MatchAll ? Output{OutSym::constant(kSeparator), OutSym::echo()} : rep;
  Output inside = kind == ScanKind::MatchAll ? echo : Output{};
  Output skip = kind == ScanKind::MatchAll ? Output{} : echo;
  Output empty_match = kind == ScanKind::MatchAll ? Output{OutSym::constant(kSeparator)} : rep;
  if (kind == ScanKind::Replace) empty_match.push_back(OutSym::echo());

  while (!work.empty()) {
    ScanState s = work.front();
    work.pop_front();
    int src = ids.at(s);
    // Adds the match-continuing or match-ending targets.
    auto in_match = [&](CharRange b, const StateSet& cur, const StateSet& noreach, const Output& out) {
      if (cur.empty() || meets_final(a, noreach)) return;
      t.add_edge(src, b, id_of({MatchMode::Match, cur, noreach}), out);
      if (meets_final(a, cur)) t.add_edge(src, b, id_of({MatchMode::EndMatch, cur, noreach}), out);
    };
    if (s.mode == MatchMode::Match) {
      for (const auto& b : blocks)
        in_match(b, successors(a, s.cur, b.lo), successors(a, s.noreach, b.lo), inside);
      continue;
    }
    t.add_epsilon(src, done, suffix);
    StateSet blocked = s.mode == MatchMode::EndMatch ? set_union(s.cur, s.noreach) : s.noreach;
    StateSet blocked_here = set_union(blocked, init);
    for (const auto& b : blocks) {
      StateSet passed = successors(a, blocked_here, b.lo);
      if (!meets_final(a, passed)) t.add_edge(src, b, id_of({MatchMode::NoMatch, {}, passed}), nullable ? empty_match : skip);
      in_match(b, successors(a, init, b.lo), successors(a, blocked, b.lo), open_echo);
    }
  }
  return t;
}

}  // namespace

Nft match_all_nft(const Regex& e) {
  return scanner_nft(e, ScanKind::MatchAll, {}, {}, {OutSym::constant(kSeparator)});
}

Nft replace_all_nft(const Regex& e, std::u32string_view rep) {
  return scanner_nft(e, ScanKind::Replace, output_of(rep), {}, {});
}

Nft splitstr_nft(const Regex& e) {
  Output sep{OutSym::constant(kSeparator)};
  return scanner_nft(e, ScanKind::Replace, sep, sep, sep);
}

Nft filter_nft(const Regex& e) {
  const Nfa keep = nfa_trim(compile_regex(e));
  const Nfa drop = nfa_trim(nfa_complement(compile_regex(e), Universe::Sigma));
  const Output sep{OutSym::constant(kSeparator)};
  Nft t;
  int start = t.add_state(true, false);
  int between = t.add_state(false, true);
  t.add_edge(start, kSepRange, between, sep);
  // One copy of each automaton; an element runs through exactly one of them.
  auto copy = [&](const Nfa& a, bool echo) {
    int base = t.num_states();
    for (int q = 0; q < a.num_states(); ++q) t.add_state();
    for (int q = 0; q < a.num_states(); ++q) {
      for (const auto& ed : a.edges(q))
        t.add_edge(base + q, ed.label, base + ed.dst, echo ? Output{OutSym::echo()} : Output{});
      if (a.is_initial(q)) t.add_epsilon(between, base + q);
      if (a.is_final(q)) t.add_edge(base + q, kSepRange, between, echo ? sep : Output{});
    }
  };
  copy(keep, true);
  copy(drop, false);
  return t;
}

Nft join_nft(std::u32string_view sep) {
  Nft t;
  int start = t.add_state(true, false);
  int inside = t.add_state();
  int end = t.add_state(false, true);
  t.add_edge(start, kSepRange, inside);
  t.add_edge(start, kSepRange, end);
  t.add_edge(inside, kSigma, inside, {OutSym::echo()});
  t.add_edge(inside, kSepRange, inside, output_of(sep));
  t.add_edge(inside, kSepRange, end);
  return t;
}

Nft tail_nft() {
  Nft t;
  int start = t.add_state(true, false);
  int rest = t.add_state(false, true);
  t.add_edge(start, kSepRange, rest);
  t.add_edge(rest, {0, kSeparator}, rest, {OutSym::echo()});
  return t;
}

Nft wrap_nft() {
  Nft t;
  int start = t.add_state(true, false);
  int body = t.add_state();
  int end = t.add_state(false, true);
  t.add_epsilon(start, body, {OutSym::constant(kSeparator)});
  t.add_edge(body, kSigma, body, {OutSym::echo()});
  t.add_epsilon(body, end, {OutSym::constant(kSeparator)});
  return t;
}

}  // namespace seqstr
