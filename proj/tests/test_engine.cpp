#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "script_gen.hpp"
#include "seqstr/engine.hpp"

using namespace seqstr;
namespace st = seqstr::testing;

namespace {

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(SEQSTR_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict solve_text(const std::string& text, const SolveOptions& opts = {}) { return solve(parse_script(text), opts); }

}  // namespace

TEST(Engine, MembershipAndLength) {
  Script s = parse_script("(declare-fun x () String)(assert (str.in_re x (re.+ (str.to_re \"a\"))))"
                          "(assert (= (str.len x) 2))");
  Verdict v = solve(s);
  ASSERT_EQ(v.status, Verdict::Status::Sat) << v.reason;
  EXPECT_EQ(v.model.at("x"), Value::of_str(U"aa"));
  EXPECT_TRUE(check_model(s, v.model));
}

TEST(Engine, NegativeLengthIsUnsat) {
  EXPECT_EQ(solve_text("(declare-fun x () String)(assert (< (str.len x) 0))").status, Verdict::Status::Unsat);
}

TEST(Engine, AppendingTwoElements) {
  Verdict v = solve_text(read_data("concat_short.smt2"));
  EXPECT_EQ(v.status, Verdict::Status::Unsat) << v.reason;
}

TEST(Engine, SplitIntoThree) {
  Script s = parse_script(read_data("split_count.smt2"));
  Verdict v = solve(s);
  ASSERT_EQ(v.status, Verdict::Status::Sat) << v.reason;
  EXPECT_TRUE(check_model(s, v.model));
  EXPECT_EQ(v.model.at("s").seq.size(), 3u);
  EXPECT_NE(model_to_smtlib(s, v.model).find("(define-fun s () (Seq String)"), std::string::npos);
}

TEST(Engine, WriteThenRead) {
  Script s = parse_script(
      "(declare-fun s () (Seq String))(declare-fun t () (Seq String))(declare-fun u () String)"
      "(assert (= t (seq.update s 1 (seq.unit u))))"
      "(assert (str.in_re u (re.+ (str.to_re \"a\"))))"
      "(assert (str.in_re (seq.nth t 1) (str.to_re \"b\")))");
  EXPECT_EQ(solve(s).status, Verdict::Status::Unsat);
  Script sat = parse_script(
      "(declare-fun s () (Seq String))(declare-fun t () (Seq String))(declare-fun u () String)"
      "(assert (= t (seq.update s 1 (seq.unit u))))"
      "(assert (str.in_re u (re.+ (str.to_re \"a\"))))"
      "(assert (str.in_re (seq.nth t 0) (str.to_re \"b\")))(assert (= (seq.len s) 3))");
  Verdict v = solve(sat);
  ASSERT_EQ(v.status, Verdict::Status::Sat) << v.reason;
  EXPECT_EQ(v.model.at("s").seq.size(), 3u);
  EXPECT_EQ(v.model.at("t").seq.at(0), U"b");
}

TEST(Engine, SymbolicExtract) {
  Script s = parse_script(
      "(declare-fun s () (Seq String))(declare-fun r () (Seq String))(declare-fun i () Int)(declare-fun j () Int)"
      "(assert (= r (seq.extract s i j)))(assert (= (seq.len r) 2))(assert (> j 4))"
      "(assert (str.in_re (seq.nth r 1) (str.to_re \"ab\")))");
  Verdict v = solve(s);
  ASSERT_EQ(v.status, Verdict::Status::Sat) << v.reason;
  EXPECT_TRUE(check_model(s, v.model));
}

TEST(Engine, VersionPipelineIsOracleConsistent) {
  Script s = parse_script(read_data("version_pipeline.smt2"));
  Verdict v = solve(s);
  ASSERT_NE(v.status, Verdict::Status::Unknown) << v.reason;
  if (v.status == Verdict::Status::Sat) {
    EXPECT_TRUE(check_model(s, v.model));
  } else {
    BruteForceBounds b;
    b.max_len = 4;
    b.max_seq = 3;
    b.alpha = {'0', '1', 'a', '.'};
    EXPECT_NE(brute_force_sat(s, b).status, BruteForceResult::Status::Sat);
  }
}

TEST(Engine, OutsideTheFragmentIsUnknown) {
  Verdict v = solve_text("(declare-fun x () String)(declare-fun y () String)"
                         "(assert (= x (str.++ y \"a\")))(assert (= y (str.++ x \"a\")))");
  EXPECT_EQ(v.status, Verdict::Status::Unknown);
  EXPECT_NE(v.reason.find("straight-line"), std::string::npos);
}

TEST(Engine, ProductLimitIsUnknown) {
  SolveOptions o;
  o.max_product_states = 2;
  Verdict v = solve_text(read_data("split_count.smt2"), o);
  EXPECT_EQ(v.status, Verdict::Status::Unknown);
  EXPECT_NE(v.reason.find("state limit"), std::string::npos);
}

TEST(EngineProperty, AgreesWithBruteForce) {
  BruteForceBounds b;
  b.max_len = 3;
  b.max_seq = 3;
  b.max_candidates = 3'000'000;
  SolveOptions o;
  o.timeout = std::chrono::milliseconds(20000);
  int sat = 0, unsat = 0;
  for (unsigned seed = 0; seed < 120; ++seed) {
    st::ScriptGen gen(5000 + seed);
    std::string text = gen.straight_line(1 + seed % 3, 1 + seed % 3);
    Script s = parse_script(text);
    Verdict v = solve(s, o);
    ASSERT_NE(v.status, Verdict::Status::Unknown) << v.reason << "\n" << text;
    BruteForceResult r = brute_force_sat(s, b);
    if (r.status == BruteForceResult::Status::Sat) {
      EXPECT_EQ(v.status, Verdict::Status::Sat) << text;
    }
    if (v.status == Verdict::Status::Sat) {
      EXPECT_TRUE(check_model(s, v.model)) << text;
      ++sat;
    } else {
      ++unsat;
    }
  }
  EXPECT_GT(sat, 30);
  EXPECT_GT(unsat, 5);
}
