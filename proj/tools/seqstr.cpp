// Command-line front end: solve a script, generate benchmark instances, or
// run a directory of scripts and report verdicts.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "seqstr/bench.hpp"
#include "seqstr/engine.hpp"

using namespace seqstr;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInternal = 1;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_solve(const std::string& path, bool print_model, bool check, long timeout_ms, size_t max_states) {
  Script s;
  try {
    s = parse_script(read_file(path));
  } catch (const ParseError& e) {
    std::cerr << path << ":" << e.what() << "\n";
    return kExitInput;
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  }
  SolveOptions opts;
  opts.timeout = std::chrono::milliseconds(timeout_ms);
  opts.max_product_states = max_states;
  Verdict v = solve(s, opts);
  std::cout << status_name(v.status) << "\n";
  if (v.status == Verdict::Status::Unknown && !v.reason.empty()) std::cerr << "reason: " << v.reason << "\n";
  if (v.status == Verdict::Status::Sat) {
    if (print_model || s.get_model) std::cout << model_to_smtlib(s, v.model) << "\n";
    if (check && !check_model(s, v.model)) {
      std::cerr << "model check failed\n";
      return kExitInternal;
    }
  }
  return 0;
}

int run_gen(int id, int count, std::uint32_t seed, bool symbolic, const std::string& out) {
  std::filesystem::create_directories(out);
  for (int k = 0; k < count; ++k) {
    BenchInstance inst = gen_template(id, seed + static_cast<std::uint32_t>(k), symbolic);
    std::ofstream f(std::filesystem::path(out) / (inst.name + ".smt2"));
    f << inst.text;
  }
  return 0;
}

int run_bench(const std::string& dir, long timeout_ms, const std::string& csv, int jobs) {
  SolveOptions opts;
  opts.timeout = std::chrono::milliseconds(timeout_ms);
  BenchReport report = run_harness(load_scripts(dir), opts, jobs);
  if (!csv.empty()) {
    std::ofstream f(csv);
    f << report.csv();
  } else {
    std::cout << report.csv();
  }
  std::cout << report.summary();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedure for straight-line string sequence constraints"};
  app.require_subcommand(1);

  std::string path;
  bool model = false, check = false;
  long timeout_ms = 60000;
  size_t max_states = SolveOptions{}.max_product_states;
  auto* solve_cmd = app.add_subcommand("solve", "Decide a script");
  solve_cmd->add_option("file", path, "SMT-LIB script")->required();
  solve_cmd->add_flag("--model", model, "Print the model when sat");
  solve_cmd->add_flag("--check-model", check, "Re-verify the model against the script");
  solve_cmd->add_option("--timeout-ms", timeout_ms, "Wall-clock limit in milliseconds");
  solve_cmd->add_option("--max-product-states", max_states, "Largest automaton product");

  int template_id = 1, count = 1;
  std::uint32_t seed = 0;
  bool symbolic = false;
  std::string out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate benchmark instances");
  gen_cmd->add_option("--template", template_id, "Template id")->required()->check(CLI::Range(1, 3));
  gen_cmd->add_option("--count", count, "Number of instances")->required();
  gen_cmd->add_option("--seed", seed, "First seed")->required();
  gen_cmd->add_flag("--symbolic-indices", symbolic, "Use integer variables as indices");
  gen_cmd->add_option("--out", out, "Output directory")->required();

  std::string dir, csv;
  long bench_timeout = 60000;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* bench_cmd = app.add_subcommand("bench", "Solve every .smt2 file of a directory");
  bench_cmd->add_option("--dir", dir, "Directory of scripts")->required()->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--timeout-ms", bench_timeout, "Per-instance limit in milliseconds");
  bench_cmd->add_option("--csv", csv, "CSV output file");
  bench_cmd->add_option("--jobs", jobs, "Parallel solver threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*solve_cmd) return run_solve(path, model, check, timeout_ms, max_states);
    if (*gen_cmd) return run_gen(template_id, count, seed, symbolic, out);
    return run_bench(dir, bench_timeout, csv, jobs);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
