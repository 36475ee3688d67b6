// Generator for the three sequence benchmark templates and a harness that
// solves a suite and summarizes the verdicts.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "seqstr/engine.hpp"

namespace seqstr {

struct BenchInstance {
  int template_id = 1;
  std::uint32_t seed = 0;
  bool symbolic_indices = false;
  std::string name;  // e.g. "t1_s7_conc"
  std::string text;  // SMT-LIB script
  int seq_vars = 0;
  int str_vars = 0;
  int int_vars = 0;
};

/// Deterministic in (id, seed, symbolic): the same arguments give the same
/// bytes. Throws std::invalid_argument for ids other than 1, 2 and 3.
BenchInstance gen_template(int id, std::uint32_t seed, bool symbolic_indices);

/// 140 instances: 40 of template 1 and 40 of template 2 (half with symbolic
/// indices) and 60 of template 3.
std::vector<BenchInstance> seq_base_suite(std::uint32_t seed = 0);

struct BenchRow {
  std::string instance;
  std::string verdict;  // sat, unsat, unknown or error
  long time_ms = 0;
  std::string detail;   // reason for unknown or error
};

struct BenchReport {
  std::vector<BenchRow> rows;  // sorted by instance name

  int count(const std::string& verdict) const;
  int solved() const { return count("sat") + count("unsat"); }
  double average_seconds() const;
  /// `instance,verdict,time_ms` with a header line.
  std::string csv() const;
  /// One line per row label: sat, unsat, solved, unknown/timeout, avg. time.
  std::string summary() const;
};

/// Solves every (name, script) pair with up to `jobs` threads.
BenchReport run_harness(const std::vector<std::pair<std::string, std::string>>& scripts, const SolveOptions& opts,
                        int jobs = 1);

/// The `.smt2` files of a directory, sorted by file name.
std::vector<std::pair<std::string, std::string>> load_scripts(const std::string& dir);

}  // namespace seqstr
