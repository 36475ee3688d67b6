#include <gtest/gtest.h>

#include "seqstr/nfa.hpp"
#include "seqstr/nft.hpp"
#include "seqstr/regex.hpp"
#include "support.hpp"

using namespace seqstr;
using seqstr::testing::all_words;

namespace {

Regex classic(std::string_view s) { return parse_regex(s, RegexDialect::Classic); }
Word W(std::string_view s) { return from_utf8_sep(s); }

}  // namespace

TEST(Regex, ParseExamples) {
  EXPECT_EQ(classic("a"), Regex::range('a', 'a'));
  EXPECT_EQ(classic("(ab)*"), Regex::star(Regex::concat(Regex::symbol('a'), Regex::symbol('b'))));
  Regex digit = Regex::range('0', '9');
  EXPECT_EQ(classic("[0-9]+"), Regex::concat(digit, Regex::star(digit)));
}

TEST(Regex, ParseErrors) {
  EXPECT_THROW(classic("(ab"), ParseError);
  EXPECT_THROW(classic("[z-a]"), ParseError);
  try {
    classic("ab)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 2u);
  }
  EXPECT_THROW(Regex::range('z', 'a'), std::invalid_argument);
}

TEST(Regex, SmtLibDialect) {
  Regex r = parse_regex("(re.+ (re.range \"0\" \"9\"))", RegexDialect::SmtLib);
  EXPECT_EQ(r, classic("[0-9]+"));
  Regex s = parse_regex("(re.++ (str.to_re \"ab\") (re.* re.allchar))", RegexDialect::SmtLib);
  EXPECT_EQ(s, Regex::concat(Regex::literal(U"ab"), Regex::all()));
}

TEST(Regex, PrinterRoundTrip) {
  std::mt19937 rng(3);
  for (int i = 0; i < 300; ++i) {
    Regex e = seqstr::testing::random_regex(rng, 4);
    EXPECT_EQ(classic(e.to_string()), e) << e.to_string();
    EXPECT_EQ(parse_regex(e.to_smtlib(), RegexDialect::SmtLib), e) << e.to_smtlib();
  }
}

TEST(Nfa, CompileBasics) {
  EXPECT_TRUE(nfa_is_empty(compile_regex(Regex::empty())));
  Nfa eps = compile_regex(Regex::epsilon());
  EXPECT_TRUE(nfa_accepts(eps, U""));
  EXPECT_FALSE(nfa_accepts(eps, U"a"));
  Nfa ab = compile_regex(classic("ab"));
  all_words({'a', 'b'}, 3, [&](const Word& w) { EXPECT_EQ(nfa_accepts(ab, w), w == U"ab"); });
  Nfa astar = compile_regex(classic("a*"));
  EXPECT_TRUE(nfa_accepts(astar, U"aaa"));
  EXPECT_FALSE(nfa_accepts(astar, U"b"));
}

TEST(Nfa, IntersectExamples) {
  Nfa astar = compile_regex(classic("a*"));
  Nfa all = nfa_universal(Universe::Sigma);
  Nfa bstar = compile_regex(classic("b*"));
  all_words({'a', 'b'}, 4, [&](const Word& w) {
    EXPECT_EQ(nfa_accepts(nfa_intersect(astar, all), w), nfa_accepts(astar, w));
    EXPECT_EQ(nfa_accepts(nfa_intersect(astar, bstar), w), w.empty());
  });
}

TEST(Nfa, ComplementExamples) {
  EXPECT_TRUE(nfa_is_empty(nfa_complement(nfa_universal(Universe::Sigma), Universe::Sigma)));
  Nfa full = nfa_complement(nfa_empty(), Universe::Sigma);
  all_words({'a', 'b', 0x10FFFF}, 3, [&](const Word& w) { EXPECT_TRUE(nfa_accepts(full, w)); });
  EXPECT_FALSE(nfa_accepts(full, W("†")));
  Nfa with_sep = nfa_complement(nfa_empty(), Universe::SigmaSep);
  EXPECT_TRUE(nfa_accepts(with_sep, W("a†")));
}

TEST(Nfa, ShortestWord) {
  auto w = nfa_shortest_word(compile_regex(classic("[0-9]{3}x")));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->size(), 4u);
  EXPECT_FALSE(nfa_shortest_word(nfa_empty()));
}

TEST(Nfa, TextFormat) {
  std::string t = compile_regex(classic("a")).to_text();
  EXPECT_NE(t.find("61-61"), std::string::npos);
}

TEST(NfaProperty, CompileAgreesWithRecursiveMatcher) {
  std::mt19937 rng(17);
  for (int i = 0; i < 200; ++i) {
    Regex e = seqstr::testing::random_regex(rng, 3);
    Nfa a = compile_regex(e);
    all_words({'a', 'b'}, 5, [&](const Word& w) {
      EXPECT_EQ(nfa_accepts(a, w), seqstr::testing::regex_matches(e, w)) << e.to_string() << " " << to_utf8(w);
    });
  }
}

TEST(NfaProperty, IntersectAndComplement) {
  std::mt19937 rng(23);
  for (int i = 0; i < 80; ++i) {
    Nfa a = compile_regex(seqstr::testing::random_regex(rng, 3));
    Nfa b = compile_regex(seqstr::testing::random_regex(rng, 3));
    Nfa both = nfa_intersect(a, b);
    Nfa na = nfa_complement(a, Universe::Sigma);
    Nfa lhs = nfa_complement(both, Universe::Sigma);
    Nfa rhs = nfa_union(na, nfa_complement(b, Universe::Sigma));
    all_words({'a', 'b'}, 5, [&](const Word& w) {
      bool in_a = nfa_accepts(a, w), in_b = nfa_accepts(b, w);
      EXPECT_EQ(nfa_accepts(both, w), in_a && in_b);
      EXPECT_NE(nfa_accepts(na, w), in_a);
      EXPECT_EQ(nfa_accepts(lhs, w), nfa_accepts(rhs, w));
    });
  }
}

TEST(Nft, IdentityAndRelabel) {
  Nft id;
  int q = id.add_state(true, true);
  id.add_edge(q, kSigma, q, {OutSym::echo()});
  EXPECT_EQ(nft_outputs(id, U"ab", 4), std::vector<Word>{U"ab"});
  Nft relabel;
  int p = relabel.add_state(true, true);
  relabel.add_edge(p, {'a', 'a'}, p, output_of(U"b"));
  EXPECT_EQ(nft_outputs(relabel, U"aa", 4), std::vector<Word>{U"bb"});
  EXPECT_TRUE(nft_outputs(relabel, U"ab", 4).empty());
}

TEST(Nft, OutputOverflow) {
  Nft t;
  int q = t.add_state(true, true);
  t.add_edge(q, kSigma, q, output_of(U"x"));
  t.add_edge(q, kSigma, q, output_of(U"y"));
  EXPECT_EQ(nft_outputs(t, U"ab", 8).size(), 4u);
  EXPECT_THROW(nft_outputs(t, U"abc", 4), OutputOverflow);
}

TEST(Nft, EpsilonEliminationPreservesOutputs) {
  // eps/"<" then echo each symbol then eps/">".
  Nft t;
  int s = t.add_state(true, false);
  int m = t.add_state();
  int f = t.add_state(false, true);
  t.add_epsilon(s, m, output_of(U"<"));
  t.add_edge(m, kSigma, m, {OutSym::echo()});
  t.add_epsilon(m, f, output_of(U">"));
  EpsFreeNft e = nft_eliminate_epsilon(t);
  EXPECT_FALSE(e.nft.has_epsilon());
  EXPECT_EQ(e.empty_input_outputs, std::vector<Word>{U"<>"});
  all_words({'a', 'b'}, 4, [&](const Word& w) {
    if (w.empty()) return;
    EXPECT_EQ(nft_outputs(e.nft, w, 4), nft_outputs(t, w, 4));
  });
}
