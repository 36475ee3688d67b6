#include "seqstr/preimage.hpp"

#include <map>
#include <memory>
#include <set>
#include <utility>

namespace seqstr {

std::string NameGen::fresh(const std::string& base) { return base + "~" + std::to_string(next_++); }

std::string index_placeholder(size_t k) { return "$it" + std::to_string(k); }

void Alternatives::add(PreimageAlternative alt) {
  pending_.push_back([alt = std::move(alt)]() -> std::optional<PreimageAlternative> { return alt; });
}

std::optional<PreimageAlternative> Alternatives::next() {
  while (!pending_.empty()) {
    Builder b = std::move(pending_.front());
    pending_.pop_front();
    if (auto alt = b()) return alt;
  }
  return std::nullopt;
}

std::vector<PreimageAlternative> Alternatives::collect() {
  std::vector<PreimageAlternative> out;
  while (auto alt = next()) out.push_back(std::move(*alt));
  return out;
}

namespace {

struct LabelParts {
  std::optional<CharRange> sigma;
  bool sep = false;
};

LabelParts split_label(CharRange l) {
  LabelParts p;
  CharRange s = intersect(l, kSigma);
  if (!s.empty()) p.sigma = s;
  p.sep = l.contains(kSeparator);
  return p;
}

std::vector<std::string> fresh_copy(const Cefa& a, NameGen& names) {
  std::vector<std::string> out;
  for (const auto& r : a.registers()) out.push_back(names.fresh(r));
  return out;
}

std::vector<std::string> plus(std::vector<std::string> regs, std::initializer_list<std::string> extra) {
  regs.insert(regs.end(), extra);
  return regs;
}

CostVector extend(const CostVector& v, std::initializer_list<Int> extra) {
  CostVector out = v;
  out.insert(out.end(), extra);
  return out;
}

CostVector zeros(size_t n, std::initializer_list<Int> extra) { return extend(CostVector(n, 0), extra); }

std::vector<LinExpr> sum_terms(const std::vector<std::string>& r1, const std::vector<std::string>& r2) {
  std::vector<LinExpr> out;
  for (size_t i = 0; i < r1.size(); ++i) out.push_back(LinExpr::var(r1[i]) + (r2.empty() ? LinExpr() : LinExpr::var(r2[i])));
  return out;
}

std::vector<LinExpr> var_terms(const std::vector<std::string>& regs) { return sum_terms(regs, {}); }

LinExpr it(size_t k) { return LinExpr::var(index_placeholder(k)); }

std::optional<Cefa> restrict_to(const Cefa& b, const Nfa& format) {
  Cefa out = cefa_trim(cefa_product(b, cefa_from_nfa(format)));
  if (cefa_is_empty(out)) return std::nullopt;
  return out;
}

std::optional<Cefa> nonempty(const Cefa& b) {
  Cefa out = cefa_trim(b);
  if (cefa_is_empty(out)) return std::nullopt;
  return out;
}

/// Copy of `a` under the registers `regs` with the given initial and final
/// states (nullopt keeps those of `a`).
Cefa relabel(const Cefa& a, const std::vector<std::string>& regs, std::optional<int> initial, std::optional<int> final) {
  Cefa out(regs);
  for (int s = 0; s < a.num_states(); ++s)
    out.add_state(initial ? s == *initial : a.is_initial(s), final ? s == *final : a.is_final(s));
  for (int s = 0; s < a.num_states(); ++s)
    for (const auto& e : a.edges(s)) out.add_edge(s, e.label, e.dst, e.upd);
  return out;
}

/// States reachable from `p` by symbols of Σ, including `p`.
std::vector<char> sigma_reachable(const Cefa& a, int p) {
  std::vector<char> seen(a.num_states(), 0);
  std::vector<int> stack{p};
  seen[p] = 1;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (const auto& e : a.edges(s))
      if (split_label(e.label).sigma && !seen[e.dst]) {
        seen[e.dst] = 1;
        stack.push_back(e.dst);
      }
  }
  return seen;
}

/// End states and accumulated costs of the runs of `a` from `q` that read
/// `out`, where an echo stands for `echo`.
std::set<std::pair<int, CostVector>> runs_on(const Cefa& a, int q, const Output& out, Symbol echo) {
  std::set<std::pair<int, CostVector>> cur{{q, CostVector(a.num_registers(), 0)}};
  for (const OutSym& o : out) {
    Symbol c = o.copy ? echo : o.c;
    std::set<std::pair<int, CostVector>> next;
    for (const auto& [s, cost] : cur)
      for (const auto& e : a.edges(s))
        if (e.label.contains(c)) {
          CostVector sum = cost;
          for (size_t i = 0; i < sum.size(); ++i) sum[i] = checked_add(sum[i], e.upd[i]);
          next.insert({e.dst, std::move(sum)});
        }
    cur.swap(next);
  }
  return cur;
}

bool has_echo(const Output& out) {
  for (const OutSym& o : out)
    if (o.copy) return true;
  return false;
}

}  // namespace

Alternatives pre_concat(const Cefa& a, NameGen& names) {
  Alternatives alts;
  auto ap = std::make_shared<const Cefa>(a);
  for (int m = 0; m < a.num_states(); ++m)
    alts.add([ap, &names, m]() -> std::optional<PreimageAlternative> {
      const Cefa& a = *ap;
      auto r1 = fresh_copy(a, names), r2 = fresh_copy(a, names);
      auto left = nonempty(relabel(a, r1, std::nullopt, m));
      if (!left) return std::nullopt;
      auto right = nonempty(relabel(a, r2, m, std::nullopt));
      if (!right) return std::nullopt;
      return PreimageAlternative{{std::move(*left), std::move(*right)}, sum_terms(r1, r2), LiaFormula::truth()};
    });
  return alts;
}

Alternatives pre_nft(const EpsFreeNft& t, const Cefa& a, NameGen& names) {
  Alternatives alts;
  auto regs = fresh_copy(a, names);

  std::vector<CharRange> a_labels;
  for (int s = 0; s < a.num_states(); ++s)
    for (const auto& e : a.edges(s)) a_labels.push_back(e.label);

  Cefa b(regs);
  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> work;
  auto id_of = [&](int qt, int qa) {
    auto [itr, added] = id.try_emplace({qt, qa}, 0);
    if (added) {
      itr->second = b.add_state(t.nft.is_initial(qt) && a.is_initial(qa), t.nft.is_final(qt) && a.is_final(qa));
      work.emplace_back(qt, qa);
    }
    return itr->second;
  };
  for (int qt : t.nft.initial_states())
    for (int qa : a.initial_states()) id_of(qt, qa);
  while (!work.empty()) {
    auto [qt, qa] = work.back();
    work.pop_back();
    int src = id.at({qt, qa});
    for (const auto& e : t.nft.edges(qt)) {
      std::vector<CharRange> blocks{e.label};
      if (has_echo(e.out)) {
        std::vector<CharRange> ranges{e.label};
        for (CharRange l : a_labels)
          if (!intersect(l, e.label).empty()) ranges.push_back(intersect(l, e.label));
        blocks.clear();
        for (CharRange blk : refine_ranges(ranges))
          if (!intersect(blk, e.label).empty()) blocks.push_back(blk);
      }
      for (CharRange blk : blocks)
        for (const auto& [dst, cost] : runs_on(a, qa, e.out, blk.lo)) b.add_edge(src, blk, id_of(e.dst, dst), cost);
    }
  }
  if (auto main = nonempty(b)) alts.add(PreimageAlternative{{std::move(*main)}, var_terms(regs), LiaFormula::truth()});

  std::set<CostVector> empty_costs;
  for (const Word& o : t.empty_input_outputs)
    for (const auto& c : cefa_accepts_with_cost(a, o)) empty_costs.insert(c);
  for (const auto& c : empty_costs) {
    Cefa eps;
    eps.add_state(true, true);
    std::vector<LinExpr> terms(c.begin(), c.end());
    alts.add(PreimageAlternative{{std::move(eps)}, std::move(terms), LiaFormula::truth()});
  }
  return alts;
}

std::vector<std::pair<int, int>> write_pivot_pairs(const Cefa& a) {
  int n = a.num_states();
  std::vector<char> sep_in(n, 0), sep_out(n, 0);
  for (int s = 0; s < n; ++s)
    for (const auto& e : a.edges(s))
      if (split_label(e.label).sep) sep_out[s] = sep_in[e.dst] = 1;
  std::vector<std::pair<int, int>> out;
  for (int p = 0; p < n; ++p) {
    if (!sep_in[p]) continue;
    auto reach = sigma_reachable(a, p);
    for (int q = 0; q < n; ++q)
      if (sep_out[q] && reach[q]) out.emplace_back(p, q);
  }
  return out;
}

Alternatives pre_write(const Cefa& a, NameGen& names) {
  Alternatives alts;
  auto ap = std::make_shared<const Cefa>(a);
  for (auto [p, q] : write_pivot_pairs(a)) {
    alts.add([ap, &names, p, q]() -> std::optional<PreimageAlternative> {
      const Cefa& a = *ap;
      auto r1 = fresh_copy(a, names), r2 = fresh_copy(a, names);
      std::string rk = names.fresh("k");
      auto y = restrict_to(relabel(a, r2, p, q), format_automata().a1);
      if (!y) return std::nullopt;

      enum Phase { Pre, Idle, Post };
      Cefa b(plus(r1, {rk}));
      int states = a.num_states();
      auto id = [states](int s, Phase ph) { return ph * states + s; };
      for (Phase ph : {Pre, Idle, Post})
        for (int s = 0; s < states; ++s) b.add_state(ph == Pre && a.is_initial(s), ph == Post && a.is_final(s));
      for (int s = 0; s < states; ++s)
        for (const auto& e : a.edges(s)) {
          LabelParts parts = split_label(e.label);
          if (parts.sigma) {
            b.add_edge(id(s, Pre), *parts.sigma, id(e.dst, Pre), extend(e.upd, {0}));
            b.add_edge(id(s, Post), *parts.sigma, id(e.dst, Post), extend(e.upd, {0}));
          }
          if (parts.sep) {
            b.add_edge(id(s, Pre), kSepRange, id(e.dst, Pre), extend(e.upd, {1}));
            if (e.dst == p) b.add_edge(id(s, Pre), kSepRange, id(p, Idle), extend(e.upd, {1}));
            if (s == q) b.add_edge(id(p, Idle), kSepRange, id(e.dst, Post), extend(e.upd, {0}));
            b.add_edge(id(s, Post), kSepRange, id(e.dst, Post), extend(e.upd, {0}));
          }
        }
      b.add_edge(id(p, Idle), kSigma, id(p, Idle));
      auto x = restrict_to(b, format_automata().a0);
      if (!x) return std::nullopt;
      return PreimageAlternative{{std::move(*x), std::move(*y)}, sum_terms(r1, r2),
                                 LiaFormula::eq(LinExpr::var(rk), it(0))};
    });
  }

  // Indices outside 1..#†(x)-1 leave x unchanged.
  alts.add([ap, &names]() -> std::optional<PreimageAlternative> {
    const Cefa& a = *ap;
    auto r1 = fresh_copy(a, names);
    std::string rn = names.fresh("n");
    Cefa b(plus(r1, {rn}));
    for (int s = 0; s < a.num_states(); ++s) b.add_state(a.is_initial(s), a.is_final(s));
    for (int s = 0; s < a.num_states(); ++s)
      for (const auto& e : a.edges(s)) {
        LabelParts parts = split_label(e.label);
        if (parts.sigma) b.add_edge(s, *parts.sigma, e.dst, extend(e.upd, {0}));
        if (parts.sep) b.add_edge(s, kSepRange, e.dst, extend(e.upd, {1}));
      }
    auto x = restrict_to(b, format_automata().a0);
    if (!x) return std::nullopt;
    LiaFormula outside = LiaFormula::lt(it(0), 1) || LiaFormula::ge(it(0), LinExpr::var(rn));
    return PreimageAlternative{{std::move(*x), cefa_from_nfa(format_automata().a1)}, var_terms(r1), outside};
  });
  return alts;
}

namespace {

/// The subsequence automaton: `pre` counts † up to the first † of the
/// subsequence, `a` runs on the subsequence while its inner and closing †
/// are counted, and `post` reads the rest. Without `post` the subsequence
/// must end at the last † of the input.
Cefa subseq_automaton(const Cefa& a, const std::vector<std::string>& regs, const std::string& r_start,
                      const std::string& r_len, bool with_post) {
  size_t k = a.num_registers();
  Cefa b(plus(regs, {r_start, r_len}));
  for (int s = 0; s < a.num_states(); ++s) b.add_state();
  int pre = b.add_state(true, false);
  int end = b.add_state(false, true);
  b.add_edge(pre, kSigma, pre);
  b.add_edge(pre, kSepRange, pre, zeros(k, {1, 0}));
  for (int s = 0; s < a.num_states(); ++s)
    for (const auto& e : a.edges(s)) {
      LabelParts parts = split_label(e.label);
      if (parts.sigma) b.add_edge(s, *parts.sigma, e.dst, extend(e.upd, {0, 0}));
      if (!parts.sep) continue;
      if (a.is_initial(s)) b.add_edge(pre, kSepRange, e.dst, extend(e.upd, {1, 0}));
      b.add_edge(s, kSepRange, e.dst, extend(e.upd, {0, 1}));
      if (a.is_final(e.dst)) b.add_edge(s, kSepRange, end, extend(e.upd, {0, 1}));
    }
  if (with_post) {
    b.add_edge(end, kSigma, end);
    b.add_edge(end, kSepRange, end);
  }
  return b;
}

}  // namespace

Alternatives pre_subseq(const Cefa& a, NameGen& names) {
  Alternatives alts;
  auto ap = std::make_shared<const Cefa>(a);
  for (bool exact : {true, false})
    alts.add([ap, &names, exact]() -> std::optional<PreimageAlternative> {
      const Cefa& a = *ap;
      auto regs = fresh_copy(a, names);
      std::string rs = names.fresh("start"), rl = names.fresh("len");
      auto x = restrict_to(subseq_automaton(a, regs, rs, rl, exact), format_automata().a0);
      if (!x) return std::nullopt;
      LiaFormula len = exact ? LiaFormula::eq(LinExpr::var(rl), it(1)) : LiaFormula::le(LinExpr::var(rl), it(1));
      return PreimageAlternative{{std::move(*x)}, var_terms(regs), LiaFormula::eq(LinExpr::var(rs), it(0)) && len};
    });

  // j = 0: the output is "†" and the start index must lie inside x.
  alts.add([ap, &names]() -> std::optional<PreimageAlternative> {
    const Cefa& a = *ap;
    auto regs = fresh_copy(a, names);
    std::string rs = names.fresh("start");
    size_t k = a.num_registers();
    Cefa b(plus(regs, {rs}));
    int pre = b.add_state(true, false), mid = b.add_state(), post = b.add_state(false, true);
    b.add_edge(pre, kSigma, pre);
    b.add_edge(pre, kSepRange, pre, zeros(k, {1}));
    for (int s : a.initial_states())
      for (const auto& e : a.edges(s))
        if (split_label(e.label).sep && a.is_final(e.dst)) b.add_edge(pre, kSepRange, mid, extend(e.upd, {1}));
    b.add_edge(mid, kSigma, mid);
    b.add_edge(mid, kSepRange, post);
    b.add_edge(post, kSigma, post);
    b.add_edge(post, kSepRange, post);
    auto x = restrict_to(b, format_automata().a0);
    if (!x) return std::nullopt;
    return PreimageAlternative{{std::move(*x)}, var_terms(regs),
                               LiaFormula::eq(LinExpr::var(rs), it(0)) && LiaFormula::eq(it(1), 0)};
  });
  return alts;
}

Alternatives pre_elem(const Cefa& a, NameGen& names) {
  Alternatives alts;
  auto ap = std::make_shared<const Cefa>(a);
  alts.add([ap, &names]() -> std::optional<PreimageAlternative> {
    const Cefa& a = *ap;
    auto regs = fresh_copy(a, names);
    std::string rk = names.fresh("k");
    size_t k = a.num_registers();
    Cefa b(plus(regs, {rk}));
    for (int s = 0; s < a.num_states(); ++s) b.add_state();
    int pre = b.add_state(true, false), post = b.add_state(false, true);
    b.add_edge(pre, kSigma, pre);
    b.add_edge(pre, kSepRange, pre, zeros(k, {1}));
    for (int s = 0; s < a.num_states(); ++s) {
      if (a.is_initial(s)) b.add_edge(pre, kSepRange, s, zeros(k, {1}));
      if (a.is_final(s)) b.add_edge(s, kSepRange, post);
      for (const auto& e : a.edges(s))
        if (auto sigma = split_label(e.label).sigma) b.add_edge(s, *sigma, e.dst, extend(e.upd, {0}));
    }
    b.add_edge(post, kSigma, post);
    b.add_edge(post, kSepRange, post);
    auto x = restrict_to(b, format_automata().a0);
    if (!x) return std::nullopt;
    return PreimageAlternative{{std::move(*x)}, var_terms(regs), LiaFormula::eq(LinExpr::var(rk), it(0))};
  });
  return alts;
}

Alternatives preimage(const XDef& d, const Cefa& a, NameGen& names) {
  switch (d.kind) {
    case XDefKind::Copy: {
      auto regs = fresh_copy(a, names);
      Alternatives alts;
      alts.add(PreimageAlternative{{relabel(a, regs, std::nullopt, std::nullopt)}, var_terms(regs), LiaFormula::truth()});
      return alts;
    }
    case XDefKind::Concat:
      return pre_concat(a, names);
    case XDefKind::Transduce:
      return pre_nft(nft_eliminate_epsilon(*d.nft), a, names);
    case XDefKind::Write:
      return pre_write(a, names);
    case XDefKind::Subseq:
      return pre_subseq(a, names);
    case XDefKind::Elem:
      return pre_elem(a, names);
  }
  return {};
}

Cefa strlen_cefa(const std::string& reg) {
  Cefa a({reg});
  int q = a.add_state(true, true);
  a.add_edge(q, universe_range(Universe::SigmaSep), q, {1});
  return a;
}

Cefa seqlen_cefa(const std::string& reg) {
  Cefa a({reg});
  int q = a.add_state(true, true);
  a.add_edge(q, kSigma, q, {0});
  a.add_edge(q, kSepRange, q, {1});
  return a;
}

}  // namespace seqstr
