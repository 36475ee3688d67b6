// Pointwise oracle for pre-images: for each tuple of concrete arguments the
// output of the operation, run through the original automaton, must give the
// same cost set as the alternatives run on the arguments themselves.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "seqstr/encode.hpp"
#include "seqstr/preimage.hpp"
#include "seqstr/transducers.hpp"
#include "support.hpp"

namespace seqstr::testing {

/// Random CEFA over {a, b, †} with one register "r".
inline Cefa random_cefa(std::mt19937& rng, int max_states = 4) {
  int n = std::uniform_int_distribution<int>(1, max_states)(rng);
  Cefa a({"r"});
  std::bernoulli_distribution coin(0.4);
  for (int s = 0; s < n; ++s) a.add_state(s == 0 || coin(rng), coin(rng));
  const CharRange labels[] = {{'a', 'a'}, {'b', 'b'}, {'a', 'b'}, kSepRange, kSepRange, {'a', kSeparator}};
  int edges = std::uniform_int_distribution<int>(n, 3 * n)(rng);
  std::uniform_int_distribution<int> state(0, n - 1), label(0, 5), upd(-1, 2);
  for (int k = 0; k < edges; ++k) a.add_edge(state(rng), labels[label(rng)], state(rng), {upd(rng)});
  return a;
}

/// Concrete arguments of one application: strings and integer indices.
struct ConcreteArgs {
  std::vector<Word> strings;
  std::vector<Int> indices;
};

/// Costs of the original automaton reachable through the alternatives on
/// the given arguments. Per-argument cost sets are memoized per alternative.
class AlternativeCosts {
 public:
  explicit AlternativeCosts(std::vector<PreimageAlternative> alts) : alts_(std::move(alts)), memo_(alts_.size()) {}

  std::set<CostVector> costs(const ConcreteArgs& x) {
    std::set<CostVector> out;
    for (size_t k = 0; k < alts_.size(); ++k) {
      const auto& alt = alts_[k];
      std::vector<std::vector<CostVector>> per_arg;
      bool any = true;
      for (size_t i = 0; i < alt.args.size() && any; ++i) {
        auto key = std::make_pair(i, x.strings[i]);
        auto it = memo_[k].find(key);
        if (it == memo_[k].end()) {
          auto s = cefa_accepts_with_cost(alt.args[i], x.strings[i]);
          it = memo_[k].emplace(key, std::vector<CostVector>(s.begin(), s.end())).first;
        }
        per_arg.push_back(it->second);
        any = !it->second.empty();
      }
      if (!any) continue;
      LiaModel m;
      for (size_t j = 0; j < x.indices.size(); ++j) m[index_placeholder(j)] = x.indices[j];
      combine(alt, per_arg, 0, m, out);
    }
    return out;
  }

  size_t size() const { return alts_.size(); }

 private:
  void combine(const PreimageAlternative& alt, const std::vector<std::vector<CostVector>>& per_arg, size_t i,
               LiaModel& m, std::set<CostVector>& out) {
    if (i == per_arg.size()) {
      if (!lia_eval(alt.binding, m)) return;
      CostVector c;
      for (const auto& t : alt.terms) c.push_back(t.eval(m));
      out.insert(c);
      return;
    }
    const auto& regs = alt.args[i].registers();
    for (const auto& c : per_arg[i]) {
      for (size_t r = 0; r < regs.size(); ++r) m[regs[r]] = c[r];
      combine(alt, per_arg, i + 1, m, out);
    }
  }

  std::vector<PreimageAlternative> alts_;
  std::vector<std::map<std::pair<size_t, Word>, std::vector<CostVector>>> memo_;
};

enum class PreOp { Concat, Write, Subseq, Elem, Filter, Split, MatchAll, Join };

inline const char* pre_op_name(PreOp op) {
  switch (op) {
    case PreOp::Concat: return "concat";
    case PreOp::Write: return "write";
    case PreOp::Subseq: return "subseq";
    case PreOp::Elem: return "elem";
    case PreOp::Filter: return "filter";
    case PreOp::Split: return "splitstr";
    case PreOp::MatchAll: return "matchAll";
    case PreOp::Join: return "join";
  }
  return "?";
}

/// Words of A0 over {a, b} and plain words over {a, b}.
inline std::vector<Word> encoded_words_upto(size_t max_len) {
  std::vector<Word> out;
  all_words({'a', 'b', kSeparator}, max_len, [&](const Word& w) {
    if (nfa_accepts(format_automata().a0, w)) out.push_back(w);
  });
  return out;
}

inline std::vector<Word> plain_words_upto(size_t max_len) {
  std::vector<Word> out;
  all_words({'a', 'b'}, max_len, [&](const Word& w) { out.push_back(w); });
  return out;
}

struct PreimageCheck {
  long tuples = 0;       // argument tuples compared
  long hits = 0;         // tuples whose output is accepted by the automaton
  std::string failure;   // first mismatch, empty when none
};

/// Compares the concrete operation with the pre-image alternatives on every
/// argument tuple of the enumeration. Regex-parameterized operations use `e`.
inline PreimageCheck check_preimage(PreOp op, const Cefa& a, const Regex& e = Regex::symbol('b')) {
  NameGen names;
  std::vector<PreimageAlternative> alts;
  std::shared_ptr<Nft> t;
  switch (op) {
    case PreOp::Concat: alts = pre_concat(a, names).collect(); break;
    case PreOp::Write: alts = pre_write(a, names).collect(); break;
    case PreOp::Subseq: alts = pre_subseq(a, names).collect(); break;
    case PreOp::Elem: alts = pre_elem(a, names).collect(); break;
    case PreOp::Filter: t = std::make_shared<Nft>(filter_nft(e)); break;
    case PreOp::Split: t = std::make_shared<Nft>(splitstr_nft(e)); break;
    case PreOp::MatchAll: t = std::make_shared<Nft>(match_all_nft(e)); break;
    case PreOp::Join: t = std::make_shared<Nft>(join_nft(U"b")); break;
  }
  if (t) alts = pre_nft(nft_eliminate_epsilon(*t), a, names).collect();
  AlternativeCosts costs(std::move(alts));

  PreimageCheck result;
  auto compare = [&](const ConcreteArgs& x, const std::optional<Word>& out) {
    if (!result.failure.empty()) return;
    ++result.tuples;
    std::set<CostVector> want;
    if (out) want = cefa_accepts_with_cost(a, *out);
    if (!want.empty()) ++result.hits;
    auto got = costs.costs(x);
    if (got == want) return;
    std::ostringstream os;
    os << pre_op_name(op) << " args";
    for (const auto& s : x.strings) os << " \"" << to_utf8(s) << "\"";
    for (Int i : x.indices) os << ' ' << i;
    os << " output " << (out ? "\"" + to_utf8(*out) + "\"" : std::string("undefined")) << ": expected "
       << want.size() << " costs, alternatives give " << got.size() << "\n"
       << a.to_text();
    result.failure = os.str();
  };

  auto encoded = encoded_words_upto(6);
  auto plain = plain_words_upto(5);
  switch (op) {
    case PreOp::Concat:
      all_words({'a', 'b', kSeparator}, 5, [&](const Word& v) {
        for (size_t i = 0; i <= v.size(); ++i) compare({{v.substr(0, i), v.substr(i)}, {}}, v);
      });
      break;
    case PreOp::Write:
      for (const auto& x : encoded)
        for (const auto& y : plain_words_upto(2))
          for (Int k = -1; k <= 4; ++k) compare({{x, y}, {k}}, str_write(x, k, y));
      break;
    case PreOp::Subseq:
      for (const auto& x : encoded)
        for (Int k = -1; k <= 4; ++k)
          for (Int j = -1; j <= 4; ++j) compare({{x}, {k, j}}, str_subseq(x, k, j));
      break;
    case PreOp::Elem:
      for (const auto& x : encoded)
        for (Int k = -1; k <= 4; ++k) compare({{x}, {k}}, str_elem(x, k));
      break;
    default: {
      bool seq_input = op == PreOp::Filter || op == PreOp::Join;
      for (const auto& x : seq_input ? encoded : plain) {
        auto outs = nft_outputs(*t, x, 2);
        compare({{x}, {}}, outs.size() == 1 ? std::optional<Word>(outs[0]) : std::nullopt);
      }
    }
  }
  return result;
}

}  // namespace seqstr::testing
