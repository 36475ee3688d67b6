#include "seqstr/nft.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <sstream>

namespace seqstr {

Output output_of(std::u32string_view w) {
  Output out;
  out.reserve(w.size());
  for (Symbol c : w) out.push_back(OutSym::constant(c));
  return out;
}

int Nft::add_state(bool initial, bool final) {
  out_.emplace_back();
  initial_.push_back(initial ? 1 : 0);
  final_.push_back(final ? 1 : 0);
  return num_states() - 1;
}

void Nft::add_edge(int src, CharRange label, int dst, Output out) {
  if (src < 0 || src >= num_states() || dst < 0 || dst >= num_states())
    throw std::out_of_range("Nft::add_edge: unknown state");
  if (label.empty()) return;
  out_[src].push_back({false, label, dst, std::move(out)});
}

void Nft::add_epsilon(int src, int dst, Output out) {
  if (src < 0 || src >= num_states() || dst < 0 || dst >= num_states())
    throw std::out_of_range("Nft::add_epsilon: unknown state");
  for (const auto& o : out)
    if (o.copy) throw std::invalid_argument("Nft::add_epsilon: spontaneous edge cannot echo");
  out_[src].push_back({true, {1, 0}, dst, std::move(out)});
}

void Nft::set_initial(int q, bool value) { initial_.at(q) = value ? 1 : 0; }
void Nft::set_final(int q, bool value) { final_.at(q) = value ? 1 : 0; }

std::vector<int> Nft::initial_states() const {
  std::vector<int> out;
  for (int q = 0; q < num_states(); ++q)
    if (initial_[q]) out.push_back(q);
  return out;
}

bool Nft::has_epsilon() const {
  for (const auto& es : out_)
    for (const auto& e : es)
      if (e.epsilon) return true;
  return false;
}

std::string Nft::to_text() const {
  std::ostringstream os;
  os << "initial:";
  for (int q = 0; q < num_states(); ++q)
    if (initial_[q]) os << ' ' << q;
  os << "\nfinal:";
  for (int q = 0; q < num_states(); ++q)
    if (final_[q]) os << ' ' << q;
  os << '\n';
  for (int q = 0; q < num_states(); ++q)
    for (const auto& e : out_[q]) {
      os << q << ' ';
      if (e.epsilon)
        os << "eps";
      else
        os << std::hex << static_cast<uint32_t>(e.label.lo) << '-' << static_cast<uint32_t>(e.label.hi) << std::dec;
      std::string text;
      for (const auto& o : e.out) {
        if (o.copy)
          text += "$";
        else
          append_utf8(text, o.c);
      }
      os << ' ' << e.dst << " / " << text << '\n';
    }
  return os.str();
}

namespace {

Word instantiate(const Output& out, Symbol read) {
  Word w;
  w.reserve(out.size());
  for (const auto& o : out) w.push_back(o.copy ? read : o.c);
  return w;
}

using Config = std::pair<int, Word>;

// Closes a configuration set under spontaneous transitions.
void close(const Nft& t, std::set<Config>& configs) {
  std::vector<Config> work(configs.begin(), configs.end());
  while (!work.empty()) {
    Config c = std::move(work.back());
    work.pop_back();
    for (const auto& e : t.edges(c.first)) {
      if (!e.epsilon) continue;
      Config next{e.dst, c.second + instantiate(e.out, 0)};
      if (configs.insert(next).second) work.push_back(std::move(next));
    }
  }
}

}  // namespace

std::vector<Word> nft_outputs(const Nft& t, std::u32string_view w, size_t max) {
  std::set<Config> configs;
  for (int q : t.initial_states()) configs.insert({q, Word()});
  close(t, configs);
  for (Symbol c : w) {
    std::set<Config> next;
    for (const auto& [q, out] : configs)
      for (const auto& e : t.edges(q))
        if (!e.epsilon && e.label.contains(c)) next.insert({e.dst, out + instantiate(e.out, c)});
    close(t, next);
    configs.swap(next);
    if (configs.empty()) break;
  }
  std::set<Word> results;
  for (const auto& [q, out] : configs)
    if (t.is_final(q)) {
      results.insert(out);
      if (results.size() > max) throw OutputOverflow("transducer has more than " + std::to_string(max) + " outputs");
    }
  return {results.begin(), results.end()};
}

EpsFreeNft nft_eliminate_epsilon(const Nft& t) {
  const int n = t.num_states();
  std::vector<std::vector<std::pair<int, Word>>> closure(n);
  for (int q = 0; q < n; ++q) {
    std::set<Config> c{{q, Word()}};
    close(t, c);
    closure[q].assign(c.begin(), c.end());
  }
  EpsFreeNft result;
  Nft& out = result.nft;
  for (int q = 0; q < n; ++q) out.add_state(t.is_initial(q), false);
  const int sink = out.add_state(false, true);
  std::set<std::tuple<int, CharRange, int, Output>> seen;
  auto add = [&](int src, CharRange label, int dst, Output o) {
    if (seen.insert({src, label, dst, o}).second) out.add_edge(src, label, dst, std::move(o));
  };
  for (int s = 0; s < n; ++s) {
    for (const auto& [q, prefix] : closure[s]) {
      for (const auto& e : t.edges(q)) {
        if (e.epsilon) continue;
        Output o = output_of(prefix);
        o.insert(o.end(), e.out.begin(), e.out.end());
        add(s, e.label, e.dst, o);
        for (const auto& [f, suffix] : closure[e.dst]) {
          if (!t.is_final(f)) continue;
          Output of = o;
          Output tail = output_of(suffix);
          of.insert(of.end(), tail.begin(), tail.end());
          add(s, e.label, sink, std::move(of));
        }
      }
    }
  }
  std::set<Word> empties;
  for (int i : t.initial_states())
    for (const auto& [f, o] : closure[i])
      if (t.is_final(f)) empties.insert(o);
  result.empty_input_outputs.assign(empties.begin(), empties.end());
  return result;
}

}  // namespace seqstr
