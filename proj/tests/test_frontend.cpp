#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "script_gen.hpp"
#include "seqstr/frontend.hpp"
#include "seqstr/interp.hpp"

using namespace seqstr;

namespace {

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(SEQSTR_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string atoms_text(const Script& s) {
  std::string out;
  for (const auto& a : s.atoms) out += atom_to_string(a) + "\n";
  return out;
}

const char* kDecls =
    "(declare-fun x () String)(declare-fun y () String)(declare-fun z () (Seq String))"
    "(declare-fun s () (Seq String))(declare-fun t () (Seq String))(declare-fun u () String)"
    "(declare-fun i () Int)";

Script parse(const std::string& body) { return parse_script(std::string(kDecls) + body); }

}  // namespace

TEST(Frontend, VersionPipelineHasSevenAssertions) {
  Script s = parse_script(read_data("version_pipeline.smt2"));
  EXPECT_EQ(s.atoms.size(), 7u);
  EXPECT_EQ(s.vars.size(), 5u);
  EXPECT_EQ(s.vars.at("numbers"), Sort::Seq);
  EXPECT_TRUE(s.check_sat);
  EXPECT_EQ(s.atoms[0].kind, AtomKind::Member);
  EXPECT_EQ(s.atoms[2].kind, AtomKind::Arith);
  EXPECT_EQ(s.atoms[1].rhs->op, Op::Split);
  EXPECT_EQ(s.atoms[4].rhs->op, Op::Extract);
  // The negated postcondition becomes a complement membership.
  EXPECT_EQ(s.atoms[6].re.kind(), RegexKind::Complement);
}

TEST(Frontend, SimpleForms) {
  Script s = parse("(assert (= s (seq.++ t z)))");
  ASSERT_EQ(s.atoms.size(), 1u);
  EXPECT_EQ(s.atoms[0].kind, AtomKind::Equal);
  EXPECT_EQ(s.atoms[0].rhs->op, Op::SeqConcat);

  s = parse("(assert (str.in_re x (re.* (str.to_re \"a\"))))");
  ASSERT_EQ(s.atoms.size(), 1u);
  EXPECT_EQ(s.atoms[0].kind, AtomKind::Member);
  EXPECT_TRUE(regex_match(s.atoms[0].re, U"aaa"));
  EXPECT_FALSE(regex_match(s.atoms[0].re, U"ab"));
}

TEST(Frontend, SurfaceOperators) {
  Script s = parse(
      "(assert (= t (seq.update s 1 (seq.unit u))))"
      "(assert (= z (seq.filterre s (re.+ (str.to_re \"a\")))))"
      "(assert (= x (seq.joinw s \",\")))"
      "(assert (= s (str.matchall u re.allchar)))"
      "(assert (>= (+ i (* 2 (str.len y))) (- 3)))"
      "(assert (distinct i 4))");
  ASSERT_EQ(s.atoms.size(), 6u);
  EXPECT_EQ(s.atoms[0].rhs->op, Op::Update);
  EXPECT_EQ(s.atoms[0].rhs->args[2]->op, Op::Var);
  EXPECT_EQ(s.atoms[2].rhs->str, U",");
  EXPECT_EQ(s.atoms[4].rel, LiaRel::Ge);
  EXPECT_EQ(s.atoms[5].rel, LiaRel::Ne);
  EXPECT_EQ(term_to_string(*s.atoms[2].rhs), "(seq.join s \",\")");
}

TEST(Frontend, Errors) {
  try {
    parse("(assert (= x\n  nope))");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("nope"), std::string::npos);
    EXPECT_GT(e.line(), 1u);
  }
  try {
    parse("(assert (= i (str.len s)))");
    FAIL();
  } catch (const SortError& e) {
    EXPECT_NE(std::string(e.what()).find("str.len"), std::string::npos);
  }
  EXPECT_THROW(parse("(assert (or (= x y) (= x u)))"), FragmentError);
  EXPECT_THROW(parse("(assert (not (= x y)))"), FragmentError);
  EXPECT_THROW(parse("(assert (distinct s t))"), FragmentError);
  EXPECT_THROW(parse("(assert (= i (* i i)))"), FragmentError);
  EXPECT_THROW(parse("(declare-fun x () String)"), ParseError);
  EXPECT_THROW(parse("(assert (= x s))"), SortError);
}

TEST(Normalize, JoinIsFlattened) {
  Script s = normalize(parse("(assert (= x (str.++ y (seq.join z \"\"))))"));
  ASSERT_EQ(s.atoms.size(), 2u);
  EXPECT_EQ(atoms_text(s), "(= #t1 (seq.join z \"\"))\n(= x (str.++ y #t1))\n");
  EXPECT_EQ(s.fresh.count("#t1"), 1u);
}

TEST(Normalize, BothSidesCompound) {
  Script s = normalize(parse("(assert (= (str.++ x y) (seq.join z \"\")))"));
  EXPECT_EQ(atoms_text(s), "(= #t1 (str.++ x y))\n(= #t2 (seq.join z \"\"))\n(= #t1 #t2)\n");
  EXPECT_FALSE(check_straight_line(s).ok);
}

TEST(Normalize, GroundTermsFold) {
  Script s = normalize(parse("(assert (= x (str.++ \"a\" (seq.nth (seq.++ (seq.unit \"b\") (seq.unit \"c\")) 1))))"));
  ASSERT_EQ(s.atoms.size(), 1u);
  EXPECT_EQ(atoms_text(s), "(= x \"ac\")\n");
  EXPECT_FALSE(is_definition(s.atoms[0]));

  s = normalize(parse("(assert (= x (seq.nth (as seq.empty (Seq String)) 0)))"));
  ASSERT_EQ(s.atoms.size(), 1u);
  EXPECT_EQ(atoms_text(s), "(= 0 1)\n");
}

TEST(Normalize, LengthsAndMemberships) {
  Script s = normalize(parse("(assert (< (seq.len (str.splitre (str.++ x \"a\") (str.to_re \"b\"))) i))"
                             "(assert (str.in_re (seq.nth s 0) (re.* (str.to_re \"a\"))))"));
  for (const auto& a : s.atoms) {
    if (a.kind == AtomKind::Member) {
      EXPECT_EQ(a.lhs->op, Op::Var);
    }
    if (a.kind == AtomKind::Equal) {
      EXPECT_EQ(a.lhs->op, Op::Var);
      for (const auto& arg : a.rhs->args)
        if (arg->sort != Sort::Int) {
          EXPECT_TRUE(arg->op == Op::Var || arg->op == Op::StrLit || arg->op == Op::SeqLit);
        }
    }
  }
  EXPECT_TRUE(check_straight_line(s).ok);
}

TEST(Normalize, Idempotent) {
  Script once = normalize(parse_script(read_data("version_pipeline.smt2")));
  Script twice = normalize(once);
  EXPECT_EQ(atoms_text(once), atoms_text(twice));
  EXPECT_EQ(once.vars, twice.vars);
}

TEST(DependencyGraph, SplitThenExtractIsStraightLine) {
  Script s = normalize(parse(
      "(assert (= s (str.splitre u (str.to_re \"a\"))))"
      "(assert (= t (seq.extract s 1 (- (seq.len s) 1))))"));
  DependencyGraph g = dependency_graph(s);
  EXPECT_EQ(g.edges.at("s"), (std::set<std::string>{"u"}));
  EXPECT_EQ(g.edges.at("t"), (std::set<std::string>{"s"}));
  EXPECT_EQ(g.edges.size(), 2u);
  EXPECT_TRUE(check_straight_line(s).ok);
  auto order = definitions_in_propagation_order(s);
  ASSERT_EQ(order.size(), 2u);
  EXPECT_EQ(order[0]->lhs->name, "t");
  EXPECT_EQ(order[1]->lhs->name, "s");
}

TEST(DependencyGraph, SelfDependency) {
  Script s = normalize(parse("(assert (= s (seq.extract s 1 (- (seq.len s) 1))))"));
  DependencyGraph g = dependency_graph(s);
  EXPECT_EQ(g.edges.at("s"), (std::set<std::string>{"s"}));
  StraightLineReport r = check_straight_line(s);
  EXPECT_FALSE(r.ok);
  ASSERT_FALSE(r.violations.empty());
  EXPECT_NE(r.violations[0].find("cyclic"), std::string::npos);
}

TEST(DependencyGraph, NoEqualities) {
  Script s = normalize(parse("(assert (str.in_re x (str.to_re \"a\")))"));
  DependencyGraph g = dependency_graph(s);
  EXPECT_TRUE(g.edges.empty());
  EXPECT_EQ(g.vertices.size(), 6u);
}

TEST(DependencyGraph, DoubleDefinition) {
  Script s = normalize(parse("(assert (= x (str.++ y u)))(assert (= x (seq.nth s 0)))"));
  StraightLineReport r = check_straight_line(s);
  EXPECT_FALSE(r.ok);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_NE(r.violations[0].find("'x'"), std::string::npos);
}

TEST(DependencyGraph, VersionPipelineIsStraightLine) {
  Script s = normalize(parse_script(read_data("version_pipeline.smt2")));
  EXPECT_TRUE(check_straight_line(s).ok);
}

TEST(NormalizeProperty, PreservesBruteForceVerdicts) {
  BruteForceBounds bounds;
  bounds.max_len = 3;
  bounds.max_seq = 2;
  bounds.max_candidates = 2'000'000;
  int compared = 0, sat = 0;
  for (unsigned seed = 0; seed < 150; ++seed) {
    seqstr::testing::ScriptGen gen(seed);
    std::string text = gen.free_form(1 + static_cast<int>(seed % 3));
    Script s;
    try {
      s = parse_script(text);
    } catch (const FragmentError&) {
      continue;
    }
    BruteForceResult before = brute_force_sat(s, bounds);
    Script n = normalize(s);
    BruteForceResult after = brute_force_sat(n, bounds);
    if (before.status == BruteForceResult::Status::GaveUp || after.status == BruteForceResult::Status::GaveUp) continue;
    // Every model of the normalized script restricts to a model of the
    // original. Fresh variables of a straight-line result are computed rather
    // than enumerated, so there the verdicts must agree exactly.
    if (after.status == BruteForceResult::Status::Sat) {
      EXPECT_TRUE(check_model(s, after.model)) << text;
    }
    if (check_straight_line(n).ok) {
      EXPECT_EQ(before.status, after.status) << text;
    }
    if (before.status == BruteForceResult::Status::Sat) ++sat;
    ++compared;
  }
  EXPECT_GE(compared, 100);
  EXPECT_GE(sat, 20);
}
