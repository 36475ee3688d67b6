// Decision procedure for straight-line scripts: back-propagation of CEFA
// constraints through the encoded definitions, a final register-image check
// and a verified model.
#pragma once

#include <chrono>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "seqstr/frontend.hpp"
#include "seqstr/interp.hpp"

namespace seqstr {

struct SolveOptions {
  /// Wall-clock budget; zero means unlimited.
  std::chrono::milliseconds timeout{60000};
  /// Largest automaton any product may build; zero means unlimited.
  size_t max_product_states = 500000;
  long lia_node_limit = 200000;
};

struct SolveStats {
  long alternatives = 0;  // pre-image alternatives entered
  long final_checks = 0;
  long pruning_checks = 0;
};

struct Verdict {
  enum class Status { Sat, Unsat, Unknown };
  Status status = Status::Unknown;
  Assignment model;    // Sat: every declared variable
  std::string reason;  // Unknown: why no verdict was reached
  SolveStats stats;
};

std::string status_name(Verdict::Status s);

/// A model failed verification; indicates a bug in the solver.
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Normalizes and solves a parsed script. Scripts outside the straight-line
/// fragment yield Unknown.
Verdict solve(const Script& s, const SolveOptions& opts = {});

/// `(model (define-fun x () String "...") ...)` over the declared variables.
std::string model_to_smtlib(const Script& s, const Assignment& m);

}  // namespace seqstr
