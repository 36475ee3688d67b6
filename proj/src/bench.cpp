#include "seqstr/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace seqstr {

namespace {

// Draws by plain modulo so that generated bytes do not depend on the
// standard library's distribution implementations.
class Draw {
 public:
  explicit Draw(std::uint32_t seed) : rng_(seed) {}
  int below(int n) { return static_cast<int>(rng_() % static_cast<std::uint32_t>(n)); }
  int between(int lo, int hi) { return lo + below(hi - lo + 1); }

 private:
  std::mt19937 rng_;
};

std::string quoted_char(char c) { return std::string("\"") + c + "\""; }

/// A character class of width at most 10 inside [0-9] or [a-z].
std::string class_leaf(Draw& d) {
  bool digits = d.below(2) == 0;
  char base = digits ? '0' : 'a';
  int span = digits ? 10 : 26;
  int width = d.between(1, 10);
  int lo = d.below(span - width + 1);
  char a = static_cast<char>(base + lo), b = static_cast<char>(base + lo + width - 1);
  if (a == b) return "(str.to_re " + quoted_char(a) + ")";
  return "(re.range " + quoted_char(a) + " " + quoted_char(b) + ")";
}

/// Random regex of depth at most `depth`; stars apply to classes only.
std::string random_regex(Draw& d, int depth) {
  int kind = depth <= 1 ? d.below(2) * 3 : d.below(4);
  switch (kind) {
    case 0:
      return class_leaf(d);
    case 1:
      return "(re.++ " + random_regex(d, depth - 1) + " " + random_regex(d, depth - 1) + ")";
    case 2:
      return "(re.union " + random_regex(d, depth - 1) + " " + random_regex(d, depth - 1) + ")";
    default:
      return std::string(d.below(2) ? "(re.+ " : "(re.* ") + class_leaf(d) + ")";
  }
}

class ScriptBuilder {
 public:
  void seq(const std::string& v) { decl(v, "(Seq String)"), ++seq_vars; }
  void str(const std::string& v) { decl(v, "String"), ++str_vars; }
  void integer(const std::string& v) { decl(v, "Int"), ++int_vars; }
  void assert_(const std::string& f) { body_ += "(assert " + f + ")\n"; }
  std::string text() const { return "(set-logic QF_SSEQ)\n" + decls_ + body_ + "(check-sat)\n"; }

  int seq_vars = 0, str_vars = 0, int_vars = 0;

 private:
  void decl(const std::string& v, const std::string& sort) { decls_ += "(declare-fun " + v + " () " + sort + ")\n"; }
  std::string decls_, body_;
};

std::string update(const std::string& s, const std::string& i, const std::string& u) {
  return "(seq.update " + s + " " + i + " (seq.unit " + u + "))";
}

std::string nth(const std::string& s, const std::string& i) { return "(seq.nth " + s + " " + i + ")"; }

/// Index operands: fresh integer variables or constants in [0, hi].
class Indices {
 public:
  Indices(ScriptBuilder& b, Draw& d, bool symbolic, int hi) : b_(b), d_(d), symbolic_(symbolic), hi_(hi) {}
  std::string next(const std::string& name) {
    if (!symbolic_) return std::to_string(d_.between(0, hi_));
    b_.integer(name);
    return name;
  }

 private:
  ScriptBuilder& b_;
  Draw& d_;
  bool symbolic_;
  int hi_;
};

// u1 ∈ e1 ∧ s2 = s1[n1 -> u1, n2 -> u1] ∧ u2 = nth(s2, m1) · nth(s2, m2) ∧ u2 ∈ e2
// ∧ seqlen(s2) < strlen(u2)
void template1(ScriptBuilder& b, Draw& d, bool symbolic) {
  b.seq("s1"), b.seq("s2"), b.str("u1"), b.str("u2");
  Indices ix(b, d, symbolic, 10);
  std::string n1 = ix.next("n1"), n2 = ix.next("n2"), m1 = ix.next("m1"), m2 = ix.next("m2");
  b.assert_("(str.in_re u1 " + random_regex(d, 3) + ")");
  b.assert_("(= s2 " + update(update("s1", n1, "u1"), n2, "u1") + ")");
  b.assert_("(= u2 (str.++ " + nth("s2", m1) + " " + nth("s2", m2) + "))");
  b.assert_("(str.in_re u2 " + random_regex(d, 3) + ")");
  b.assert_("(< (seq.len s2) (str.len u2))");
}

// u1 ∈ e1 ∧ s2 = s1[n1 -> u1, n2 -> u2] ∧ s3 = s2[n3, l1] · s2[n4, l2]
// ∧ u3 = nth(s3, m1) · ... · nth(s3, m4) ∧ u3 ∈ e2 ∧ seqlen(s3) < strlen(u3) + 1
void template2(ScriptBuilder& b, Draw& d, bool symbolic) {
  b.seq("s1"), b.seq("s2"), b.seq("s3"), b.str("u1"), b.str("u2"), b.str("u3");
  Indices ix(b, d, symbolic, 10);
  std::string n1 = ix.next("n1"), n2 = ix.next("n2"), n3 = ix.next("n3"), l1 = ix.next("l1"), n4 = ix.next("n4"),
              l2 = ix.next("l2");
  std::vector<std::string> m;
  for (int k = 1; k <= 4; ++k) m.push_back(ix.next("m" + std::to_string(k)));
  b.assert_("(str.in_re u1 " + random_regex(d, 3) + ")");
  b.assert_("(= s2 " + update(update("s1", n1, "u1"), n2, "u2") + ")");
  b.assert_("(= s3 (seq.++ (seq.extract s2 " + n3 + " " + l1 + ") (seq.extract s2 " + n4 + " " + l2 + ")))");
  std::string reads;
  for (const auto& i : m) reads += " " + nth("s3", i);
  b.assert_("(= u3 (str.++" + reads + "))");
  b.assert_("(str.in_re u3 " + random_regex(d, 3) + ")");
  b.assert_("(< (seq.len s3) (+ (str.len u3) 1))");
}

// s_k = s_{k-1}[m_k -> w_k] for k = 1..i, then j reads u_l = nth(s_c, n_l)
// from random versions s_c, each u_l ∈ e_l.
void template3(ScriptBuilder& b, Draw& d) {
  int writes = d.between(0, 20), reads = d.between(0, 20);
  b.seq("s0");
  for (int k = 1; k <= writes; ++k) {
    std::string s = "s" + std::to_string(k), w = "w" + std::to_string(k);
    b.seq(s), b.str(w);
    b.assert_("(= " + s + " " + update("s" + std::to_string(k - 1), std::to_string(d.between(0, 5)), w) + ")");
  }
  for (int l = 1; l <= reads; ++l) {
    std::string u = "u" + std::to_string(l);
    b.str(u);
    b.assert_("(= " + u + " " + nth("s" + std::to_string(d.between(0, writes)), std::to_string(d.between(0, 5))) + ")");
    b.assert_("(str.in_re " + u + " " + random_regex(d, 3) + ")");
  }
}

}  // namespace

BenchInstance gen_template(int id, std::uint32_t seed, bool symbolic_indices) {
  if (id < 1 || id > 3) throw std::invalid_argument("unknown template " + std::to_string(id));
  Draw d(seed * 3u + static_cast<std::uint32_t>(id));
  ScriptBuilder b;
  if (id == 1) template1(b, d, symbolic_indices);
  if (id == 2) template2(b, d, symbolic_indices);
  if (id == 3) template3(b, d);
  BenchInstance inst;
  inst.template_id = id;
  inst.seed = seed;
  inst.symbolic_indices = id != 3 && symbolic_indices;
  inst.name = "t" + std::to_string(id) + "_s" + std::to_string(seed) + (inst.symbolic_indices ? "_sym" : "_conc");
  inst.text = b.text();
  inst.seq_vars = b.seq_vars;
  inst.str_vars = b.str_vars;
  inst.int_vars = b.int_vars;
  return inst;
}

std::vector<BenchInstance> seq_base_suite(std::uint32_t seed) {
  std::vector<BenchInstance> out;
  for (int id : {1, 2})
    for (std::uint32_t k = 0; k < 40; ++k) out.push_back(gen_template(id, seed + k, k < 20));
  for (std::uint32_t k = 0; k < 60; ++k) out.push_back(gen_template(3, seed + k, false));
  return out;
}

int BenchReport::count(const std::string& verdict) const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [&](const BenchRow& r) { return r.verdict == verdict; }));
}

double BenchReport::average_seconds() const {
  if (rows.empty()) return 0;
  double total = 0;
  for (const auto& r : rows) total += r.time_ms;
  return total / 1000.0 / static_cast<double>(rows.size());
}

std::string BenchReport::csv() const {
  std::string out = "instance,verdict,time_ms\n";
  for (const auto& r : rows) out += r.instance + "," + r.verdict + "," + std::to_string(r.time_ms) + "\n";
  return out;
}

std::string BenchReport::summary() const {
  std::ostringstream os;
  os << std::left << std::setw(18) << "sat" << count("sat") << "\n"
     << std::setw(18) << "unsat" << count("unsat") << "\n"
     << std::setw(18) << "solved" << solved() << "\n"
     << std::setw(18) << "unknown/timeout" << count("unknown") + count("error") << "\n"
     << std::setw(18) << "avg. time (s)" << std::fixed << std::setprecision(3) << average_seconds() << "\n";
  return os.str();
}

BenchReport run_harness(const std::vector<std::pair<std::string, std::string>>& scripts, const SolveOptions& opts,
                        int jobs) {
  BenchReport report;
  report.rows.resize(scripts.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < scripts.size(); k = next++) {
      BenchRow& row = report.rows[k];
      row.instance = scripts[k].first;
      auto t0 = std::chrono::steady_clock::now();
      try {
        Verdict v = solve(parse_script(scripts[k].second), opts);
        row.verdict = status_name(v.status);
        row.detail = v.reason;
      } catch (const std::exception& e) {
        row.verdict = "error";
        row.detail = e.what();
      }
      row.time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::max(jobs, 1); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::sort(report.rows.begin(), report.rows.end(),
            [](const BenchRow& a, const BenchRow& b) { return a.instance < b.instance; });
  return report;
}

std::vector<std::pair<std::string, std::string>> load_scripts(const std::string& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".smt2") continue;
    std::ifstream in(entry.path());
    std::stringstream ss;
    ss << in.rdbuf();
    out.emplace_back(entry.path().filename().string(), ss.str());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace seqstr
