#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "script_gen.hpp"
#include "seqstr/encode.hpp"
#include "support.hpp"

using namespace seqstr;
namespace st = seqstr::testing;

namespace {

using Seq = std::vector<Word>;

Word W(std::string_view s) { return from_utf8_sep(s); }

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(SEQSTR_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Seq> all_sequences(size_t max_elems, size_t max_len) {
  std::vector<Word> words;
  st::all_words({'a', 'b'}, max_len, [&](const Word& w) { words.push_back(w); });
  std::vector<Seq> out{{}};
  for (size_t begin = 0, n = 1; n <= max_elems; ++n) {
    size_t end = out.size();
    for (size_t k = begin; k < end; ++k)
      for (const auto& w : words) {
        Seq s = out[k];
        s.push_back(w);
        out.push_back(s);
      }
    begin = end;
  }
  return out;
}

std::vector<std::string> def_texts(const XStrScript& x) {
  std::vector<std::string> out;
  for (const auto& d : x.defs) out.push_back(xdef_to_string(d));
  return out;
}

}  // namespace

TEST(Encode, Values) {
  EXPECT_EQ(enc_value({U"ab", U"ac"}), W("†ab†ac†"));
  EXPECT_EQ(enc_value({}), W("†"));
  EXPECT_EQ(enc_value({U"", U"a"}), W("††a†"));
  EXPECT_THROW(enc_value({W("a†")}), SeparatorInElement);
  EXPECT_EQ(decode(W("††a†")), (Seq{U"", U"a"}));
  EXPECT_EQ(decode(W("a†")), std::nullopt);
  EXPECT_EQ(decode(U""), std::nullopt);
}

TEST(Encode, FormatAutomata) {
  const auto& fa = format_automata();
  EXPECT_TRUE(nfa_accepts(fa.a0, W("†")));
  EXPECT_TRUE(nfa_accepts(fa.a0, W("†ab†ac†")));
  EXPECT_FALSE(nfa_accepts(fa.a0, W("ab†")));
  EXPECT_FALSE(nfa_accepts(fa.a0, W("†ab")));
  EXPECT_FALSE(nfa_accepts(fa.a0, U""));
  EXPECT_TRUE(nfa_accepts(fa.a1, U"ab"));
  EXPECT_FALSE(nfa_accepts(fa.a1, W("a†b")));
}

TEST(Encode, StringOperations) {
  EXPECT_EQ(str_elem(W("†ab†ac†"), 1), Word(U"ab"));
  EXPECT_EQ(str_elem(W("†ab†ac†"), 3), std::nullopt);
  EXPECT_EQ(str_write(W("†ab†ac†"), 2, U"x"), W("†ab†x†"));
  EXPECT_EQ(str_subseq(W("†a†b†c†"), 2, 5), W("†b†c†"));
  EXPECT_EQ(str_subseq(W("†a†b†c†"), 2, 0), W("†"));
  EXPECT_EQ(str_join(W("†a†b†"), U","), U"a,b");
  EXPECT_EQ(count_separators(W("†a†b†")), 3);
}

TEST(EncodeProperty, DecodeInvertsEncode) {
  auto seqs = all_sequences(3, 2);
  std::set<Word> seen;
  for (const auto& s : seqs) {
    Word w = enc_value(s);
    EXPECT_TRUE(nfa_accepts(format_automata().a0, w));
    EXPECT_EQ(decode(w), s);
    EXPECT_TRUE(seen.insert(w).second);
  }
}

TEST(EncodeProperty, StringOperationsMirrorSequenceOperations) {
  for (const auto& s : all_sequences(3, 2)) {
    Word x = enc_value(s);
    EXPECT_EQ(count_separators(x) - 1, static_cast<Int>(s.size()));
    EXPECT_EQ(str_join(x, U"-"), seq_join(s, U"-"));
    for (Int i = -2; i <= 4; ++i) {
      EXPECT_EQ(str_elem(x, i + 1), seq_nth(s, i));
      EXPECT_EQ(str_write(x, i + 1, U"zz"), enc_value(seq_update(s, i, U"zz")));
      for (Int j = -1; j <= 4; ++j) {
        auto got = str_subseq(x, i + 1, j);
        auto want = seq_extract(s, i, j);
        ASSERT_EQ(got.has_value(), want.has_value());
        if (want) {
          EXPECT_EQ(*got, enc_value(*want));
        }
      }
    }
  }
}

TEST(EncFormula, ConcatExample) {
  Script s = normalize(parse_script(read_data("concat_short.smt2")));
  XStrScript x = enc_formula(s);
  EXPECT_EQ(x.vars.at("s0"), VarTag::Seq);
  EXPECT_EQ(x.vars.at("u"), VarTag::Plain);
  ASSERT_EQ(x.arith.size(), 1u);
  EXPECT_EQ(x.arith[0].vars(), (std::set<std::string>{"#cnt(s1)"}));
  EXPECT_FALSE(lia_eval(x.arith[0], {{"#cnt(s1)", 3}}));
  EXPECT_TRUE(lia_eval(x.arith[0], {{"#cnt(s1)", 2}}));
  BruteForceBounds b;
  b.max_len = 2;
  b.max_seq = 2;
  EXPECT_FALSE(xstr_brute_force(x, b).sat);

  // enc(s1) = enc(s0) . "†u†v†" once the auxiliary variables are computed.
  std::map<std::string, Word> m{{"s0", W("†a†")}, {"u", U"b"}, {"v", U""}};
  for (const XDef* d : [&] {
         auto order = xstr_propagation_order(x);
         std::reverse(order.begin(), order.end());
         return order;
       }())
    m[d->lhs] = *xstr_eval_def(*d, m, {});
  EXPECT_EQ(m.at("s1"), W("†a†b††"));
}

TEST(EncFormula, VersionPipelineShape) {
  XStrScript x = enc_formula(normalize(parse_script(read_data("version_pipeline.smt2"))));
  auto defs = def_texts(x);
  auto has = [&](const std::string& needle) {
    return std::any_of(defs.begin(), defs.end(), [&](const std::string& d) { return d.find(needle) != std::string::npos; });
  };
  EXPECT_TRUE(has("numbers = splitstr_"));
  EXPECT_TRUE(has("= elem(numbers, 1)"));
  EXPECT_TRUE(has("numbers1 = subseq(numbers, 2, (+ #cnt(numbers) (- 2)))")) << x.to_text();
  EXPECT_TRUE(has("= join_(numbers1)"));
  EXPECT_EQ(x.vars.at("numbers"), VarTag::Seq);
  EXPECT_EQ(x.vars.at("result"), VarTag::Plain);
}

TEST(EncFormula, PureStringScript) {
  Script s = normalize(parse_script(
      "(declare-fun x () String)(declare-fun y () String)"
      "(assert (= x (str.++ y y)))(assert (str.in_re y (re.+ (str.to_re \"a\"))))(assert (< (str.len x) 5))"));
  XStrScript x = enc_formula(s);
  EXPECT_EQ(def_texts(x), (std::vector<std::string>{"x = y . y"}));
  EXPECT_EQ(x.memberships.size(), 1u);
  EXPECT_TRUE(x.fixed.empty());
  auto r = xstr_brute_force(x, {});
  ASSERT_TRUE(r.sat);
  EXPECT_TRUE(xstr_check_model(x, r.strings, r.ints));
  EXPECT_EQ(r.strings.at("x"), U"aa");
}

TEST(EncFormulaProperty, EquisatisfiableWithinBounds) {
  BruteForceBounds b;
  b.max_len = 3;
  b.max_seq = 3;
  b.int_range = std::make_pair<Int, Int>(-2, 5);
  b.max_candidates = 3'000'000;
  int compared = 0, sat = 0;
  for (unsigned seed = 0; seed < 120; ++seed) {
    st::ScriptGen gen(1000 + seed);
    std::string text = gen.straight_line(1 + seed % 3, 1 + seed % 2);
    Script s = normalize(parse_script(text));
    ASSERT_TRUE(check_straight_line(s).ok) << text;
    BruteForceResult r = brute_force_sat(s, b);
    XStrScript x = enc_formula(s);
    XStrBruteForceResult xr = xstr_brute_force(x, b);
    if (r.status == BruteForceResult::Status::GaveUp || xr.gave_up) continue;
    EXPECT_EQ(r.status == BruteForceResult::Status::Sat, xr.sat) << text << x.to_text();
    if (xr.sat) {
      EXPECT_TRUE(xstr_check_model(x, xr.strings, xr.ints));
      ++sat;
    }
    ++compared;
  }
  EXPECT_GE(compared, 100);
  EXPECT_GE(sat, 30);
}
