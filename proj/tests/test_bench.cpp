#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "seqstr/bench.hpp"

using namespace seqstr;
namespace fs = std::filesystem;

namespace {

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(SEQSTR_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("seqstr_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

size_t count_lines(const std::string& s) { return static_cast<size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Generator, SameSeedGivesSameBytes) {
  for (int id : {1, 2, 3})
    for (std::uint32_t seed : {0u, 7u, 123u}) {
      EXPECT_EQ(gen_template(id, seed, false).text, gen_template(id, seed, false).text);
      EXPECT_EQ(gen_template(id, seed, true).text, gen_template(id, seed, true).text);
    }
  EXPECT_NE(gen_template(1, 1, false).text, gen_template(1, 2, false).text);
}

TEST(Generator, FirstTemplateShape) {
  BenchInstance inst = gen_template(1, 7, false);
  EXPECT_EQ(inst.name, "t1_s7_conc");
  EXPECT_EQ(inst.seq_vars, 2);
  EXPECT_EQ(inst.str_vars, 2);
  EXPECT_EQ(inst.int_vars, 0);
  EXPECT_NE(inst.text.find("(= s2 (seq.update (seq.update s1 "), std::string::npos);
  EXPECT_NE(inst.text.find("(< (seq.len s2) (str.len u2))"), std::string::npos);
  Script s = parse_script(inst.text);
  EXPECT_TRUE(check_straight_line(normalize(s)).ok);

  BenchInstance sym = gen_template(1, 7, true);
  EXPECT_TRUE(sym.symbolic_indices);
  EXPECT_EQ(sym.int_vars, 4);
}

TEST(Generator, EveryInstanceIsStraightLine) {
  for (const auto& inst : seq_base_suite()) {
    Script s = parse_script(inst.text);
    EXPECT_TRUE(check_straight_line(normalize(s)).ok) << inst.name;
  }
}

TEST(Generator, SuiteComposition) {
  auto suite = seq_base_suite();
  ASSERT_EQ(suite.size(), 140u);
  int per[4] = {0, 0, 0, 0}, symbolic = 0;
  for (const auto& i : suite) ++per[i.template_id], symbolic += i.symbolic_indices;
  EXPECT_EQ(per[1], 40);
  EXPECT_EQ(per[2], 40);
  EXPECT_EQ(per[3], 60);
  EXPECT_EQ(symbolic, 40);
}

TEST(Generator, UnknownTemplateThrows) { EXPECT_THROW(gen_template(4, 0, false), std::invalid_argument); }

TEST(Harness, EmptyDirectory) {
  fs::path dir = fresh_dir("empty");
  BenchReport r = run_harness(load_scripts(dir.string()), SolveOptions{});
  EXPECT_TRUE(r.rows.empty());
  EXPECT_EQ(r.csv(), "instance,verdict,time_ms\n");
  EXPECT_EQ(r.average_seconds(), 0.0);
  fs::remove_all(dir);
}

TEST(Harness, OneUnsatFile) {
  fs::path dir = fresh_dir("unsat");
  std::ofstream(dir / "concat_short.smt2") << read_data("concat_short.smt2");
  std::ofstream(dir / "notes.txt") << "ignored";
  BenchReport r = run_harness(load_scripts(dir.string()), SolveOptions{});
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.count("unsat"), 1);
  EXPECT_EQ(r.solved(), 1);
  fs::remove_all(dir);
}

TEST(Harness, CsvHasOneLinePerInstance) {
  std::vector<std::pair<std::string, std::string>> scripts;
  for (std::uint32_t seed = 0; seed < 6; ++seed) {
    BenchInstance inst = gen_template(3, seed, false);
    scripts.emplace_back(inst.name, inst.text);
  }
  scripts.emplace_back("broken", "(assert");
  SolveOptions o;
  o.timeout = std::chrono::milliseconds(20000);
  BenchReport r = run_harness(scripts, o, 2);
  EXPECT_EQ(count_lines(r.csv()), scripts.size() + 1);
  EXPECT_TRUE(std::is_sorted(r.rows.begin(), r.rows.end(),
                             [](const BenchRow& a, const BenchRow& b) { return a.instance < b.instance; }));
  EXPECT_EQ(r.count("error"), 1);
  std::string summary = r.summary();
  for (const char* label : {"sat", "unsat", "solved", "unknown/timeout", "avg. time (s)"})
    EXPECT_NE(summary.find(label), std::string::npos) << label;
}

TEST(Harness, SatVerdictsCarryVerifiedModels) {
  SolveOptions o;
  o.timeout = std::chrono::milliseconds(20000);
  int sat = 0;
  for (std::uint32_t seed = 0; seed < 8; ++seed) {
    Script s = parse_script(gen_template(3, seed, false).text);
    Verdict v = solve(s, o);
    if (v.status != Verdict::Status::Sat) continue;
    ++sat;
    EXPECT_TRUE(check_model(s, v.model)) << seed;
  }
  EXPECT_GT(sat, 0);
}
