#include <gtest/gtest.h>

#include <random>

#include "preimage_oracle.hpp"
#include "seqstr/interp.hpp"
#include "seqstr/preimage.hpp"
#include "seqstr/transducers.hpp"
#include "support.hpp"

using namespace seqstr;
namespace st = seqstr::testing;

namespace {

Word W(std::string_view s) { return from_utf8_sep(s); }

Cefa word_cefa(std::u32string_view w) { return cefa_from_nfa(nfa_word(w)); }

// q0 -†-> q1 -a-> q2 -a-> q2 -†-> q1, every transition adds 1 to r1.
Cefa example_automaton() {
  Cefa a({"r1"});
  int q0 = a.add_state(true, false), q1 = a.add_state(false, true), q2 = a.add_state();
  a.add_edge(q0, kSepRange, q1, {1});
  a.add_edge(q1, {'a', 'a'}, q2, {1});
  a.add_edge(q2, {'a', 'a'}, q2, {1});
  a.add_edge(q2, kSepRange, q1, {1});
  return a;
}

// Every (args, cost) combination accepted by one alternative whose binding
// holds for `indices`.
bool accepts(const PreimageAlternative& alt, const std::vector<Word>& args, const std::vector<Int>& indices,
             const CostVector& arg_costs_flat) {
  LiaModel m;
  for (size_t j = 0; j < indices.size(); ++j) m[index_placeholder(j)] = indices[j];
  size_t pos = 0;
  for (size_t i = 0; i < args.size(); ++i) {
    CostVector c;
    for (size_t r = 0; r < alt.args[i].num_registers(); ++r) c.push_back(arg_costs_flat.at(pos++));
    if (!cefa_accepts_with_cost(alt.args[i], args[i]).count(c)) return false;
    for (size_t r = 0; r < c.size(); ++r) m[alt.args[i].registers()[r]] = c[r];
  }
  return lia_eval(alt.binding, m);
}

std::set<CostVector> images(std::vector<PreimageAlternative> alts, const std::vector<Word>& args,
                            const std::vector<Int>& indices = {}) {
  return st::AlternativeCosts(std::move(alts)).costs({args, indices});
}

}  // namespace

TEST(Preimage, FreshNamesAreUnique) {
  NameGen names;
  std::set<std::string> seen;
  Cefa a = example_automaton();
  for (int k = 0; k < 3; ++k)
    for (auto& alt : pre_write(a, names).collect())
      for (const auto& arg : alt.args)
        for (const auto& r : arg.registers()) EXPECT_TRUE(seen.insert(r).second) << r;
  EXPECT_GT(seen.size(), 6u);
}

TEST(Preimage, ConcatSplitsOfAWord) {
  NameGen names;
  auto alts = pre_concat(word_cefa(U"ab"), names).collect();
  std::set<std::pair<Word, Word>> splits;
  for (const auto& alt : alts) {
    EXPECT_TRUE(alt.terms.empty());
    st::all_words({'a', 'b'}, 2, [&](const Word& x) {
      st::all_words({'a', 'b'}, 2, [&](const Word& y) {
        if (accepts(alt, {x, y}, {}, {})) splits.insert({x, y});
      });
    });
  }
  EXPECT_EQ(splits, (std::set<std::pair<Word, Word>>{{U"", U"ab"}, {U"a", U"b"}, {U"ab", U""}}));
}

TEST(Preimage, ConcatOfStrlenAddsLengths) {
  NameGen names;
  auto alts = pre_concat(strlen_cefa("r"), names).collect();
  ASSERT_FALSE(alts.empty());
  st::all_words({'a', kSeparator}, 4, [&](const Word& x) {
    st::all_words({'b'}, 4 - x.size(), [&](const Word& y) {
      EXPECT_EQ(images(alts, {x, y}), (std::set<CostVector>{{static_cast<Int>(x.size() + y.size())}}));
    });
  });
}

TEST(Preimage, NftIdentity) {
  Nft id;
  int q = id.add_state(true, true);
  id.add_edge(q, universe_range(Universe::SigmaSep), q, {OutSym::echo()});
  std::mt19937 rng(5);
  for (int k = 0; k < 20; ++k) {
    Cefa a = st::random_cefa(rng);
    NameGen names;
    auto alts = pre_nft(nft_eliminate_epsilon(id), a, names).collect();
    st::all_words({'a', 'b', kSeparator}, 4,
                  [&](const Word& w) { EXPECT_EQ(images(alts, {w}), cefa_accepts_with_cost(a, w)) << to_utf8(w); });
  }
}

TEST(Preimage, NftJoinWithStrlen) {
  NameGen names;
  auto alts = pre_nft(nft_eliminate_epsilon(join_nft(U"")), strlen_cefa("len"), names).collect();
  EXPECT_EQ(images(alts, {W("†ab†c†")}), (std::set<CostVector>{{3}}));
  EXPECT_EQ(images(alts, {W("†")}), (std::set<CostVector>{{0}}));
}

TEST(Preimage, NftSplitstr) {
  Regex b = Regex::symbol('b');
  NameGen names;
  auto alts = pre_nft(nft_eliminate_epsilon(splitstr_nft(b)), word_cefa(W("†a†a†")), names).collect();
  std::vector<Word> accepted;
  st::all_words({'a', 'b'}, 5, [&](const Word& w) {
    bool in_pre = !images(alts, {w}).empty();
    EXPECT_EQ(in_pre, enc_value(seq_split(b, w)) == W("†a†a†")) << to_utf8(w);
    if (in_pre) accepted.push_back(w);
  });
  EXPECT_EQ(accepted, (std::vector<Word>{U"aba"}));
}

TEST(Preimage, NftEmptyInputKeepsCosts) {
  NameGen names;
  auto alts = pre_nft(nft_eliminate_epsilon(splitstr_nft(Regex::symbol('b'))), seqlen_cefa("n"), names).collect();
  EXPECT_EQ(images(alts, {U""}), (std::set<CostVector>{{2}}));
  EXPECT_EQ(images(alts, {U"ab"}), (std::set<CostVector>{{3}}));
}

TEST(Preimage, WriteExample) {
  Cefa a = example_automaton();
  EXPECT_EQ(write_pivot_pairs(a), (std::vector<std::pair<int, int>>{{1, 2}}));
  NameGen names;
  auto alts = pre_write(a, names).collect();
  ASSERT_EQ(alts.size(), 2u);
  const auto& pivot = alts[0];
  ASSERT_EQ(pivot.args.size(), 2u);
  EXPECT_TRUE(cefa_accepts_with_cost(pivot.args[0], W("†ab†a†")).count({4, 1}));
  EXPECT_TRUE(cefa_accepts_with_cost(pivot.args[1], U"aa").count({2}));
  EXPECT_TRUE(accepts(pivot, {W("†ab†a†"), U"aa"}, {1}, {4, 1, 2}));
  EXPECT_FALSE(accepts(pivot, {W("†ab†a†"), U"aa"}, {2}, {4, 1, 2}));
  EXPECT_EQ(str_write(W("†ab†a†"), 1, U"aa"), W("†aa†a†"));
  EXPECT_EQ(cefa_accepts_with_cost(a, W("†aa†a†")), (std::set<CostVector>{{6}}));
  EXPECT_EQ(images(alts, {W("†ab†a†"), U"aa"}, {1}), (std::set<CostVector>{{6}}));
}

TEST(Preimage, SubseqExample) {
  Cefa a = example_automaton();
  NameGen names;
  auto alts = pre_subseq(a, names).collect();
  ASSERT_FALSE(alts.empty());
  EXPECT_TRUE(cefa_accepts_with_cost(alts[0].args[0], W("†a†aa†")).count({4, 2, 1}));
  EXPECT_EQ(images(alts, {W("†a†aa†")}, {2, 1}), (std::set<CostVector>{{4}}));
}

TEST(Preimage, SubseqEmptyRange) {
  NameGen names;
  auto alts = pre_subseq(word_cefa(W("†")), names).collect();
  EXPECT_EQ(images(alts, {W("†a†")}, {1, 0}), (std::set<CostVector>{{}}));
  EXPECT_TRUE(images(alts, {W("†a†")}, {2, 0}).empty());
}

TEST(Preimage, SubseqClampedAtTheEnd) {
  Word s = enc_value({U"a", U"b"});
  EXPECT_EQ(seq_extract({U"a", U"b"}, 1, 5), (std::vector<Word>{U"b"}));
  EXPECT_EQ(str_subseq(s, 2, 5), W("†b†"));
  NameGen names;
  auto alts = pre_subseq(word_cefa(W("†b†")), names).collect();
  EXPECT_EQ(images(alts, {s}, {2, 5}), (std::set<CostVector>{{}}));
  EXPECT_EQ(images(alts, {s}, {2, 1}), (std::set<CostVector>{{}}));
  EXPECT_TRUE(images(alts, {s}, {1, 5}).empty());
}

TEST(Preimage, ElemExamples) {
  NameGen names;
  auto alts = pre_elem(word_cefa(U"a"), names).collect();
  ASSERT_EQ(alts.size(), 1u);
  EXPECT_TRUE(cefa_accepts_with_cost(alts[0].args[0], W("††a†")).count({2}));
  EXPECT_EQ(seq_nth({U"", U"a"}, 1), Word(U"a"));
  EXPECT_EQ(str_elem(W("††a†"), 2), Word(U"a"));

  auto ab = pre_elem(word_cefa(U"ab"), names).collect();
  ASSERT_EQ(ab.size(), 1u);
  EXPECT_TRUE(cefa_accepts_with_cost(ab[0].args[0], W("†ab†ac†")).count({1}));
  EXPECT_FALSE(cefa_accepts_with_cost(ab[0].args[0], W("†ab†ac†")).count({2}));

  EXPECT_TRUE(pre_elem(cefa_from_nfa(nfa_empty()), names).collect().empty());
}

TEST(Preimage, CountingAutomata) {
  EXPECT_EQ(cefa_accepts_with_cost(strlen_cefa("n"), U"abc"), (std::set<CostVector>{{3}}));
  EXPECT_EQ(cefa_accepts_with_cost(seqlen_cefa("n"), W("†a†b†")), (std::set<CostVector>{{3}}));
  EXPECT_EQ(cefa_accepts_with_cost(seqlen_cefa("n"), W("†")), (std::set<CostVector>{{1}}));
  EXPECT_EQ(strlen_cefa("n").num_states(), 1);
  EXPECT_EQ(seqlen_cefa("n").num_states(), 1);
}

TEST(PreimageProperty, SoundAndCompleteOnRandomAutomata) {
  std::mt19937 rng(2024);
  const st::PreOp ops[] = {st::PreOp::Concat,   st::PreOp::Write, st::PreOp::Subseq,
                           st::PreOp::Elem,     st::PreOp::Filter, st::PreOp::Split,
                           st::PreOp::MatchAll, st::PreOp::Join};
  std::map<st::PreOp, long> hits;
  for (int k = 0; k < 160; ++k) {
    st::PreOp op = ops[k % 8];
    Cefa a = st::random_cefa(rng);
    Regex e = st::random_regex(rng, 2);
    auto r = st::check_preimage(op, a, e);
    EXPECT_TRUE(r.failure.empty()) << r.failure;
    hits[op] += r.hits;
  }
  for (st::PreOp op : ops) EXPECT_GT(hits[op], 0) << st::pre_op_name(op);
}
