// Random CEFAs over {a, b} with small integer updates, and a direct check of
// the register-image formula at a fixed cost vector.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "seqstr/cefa.hpp"

namespace seqstr::testing {

inline Cefa random_register_cefa(std::mt19937& rng, int regs, const std::string& prefix) {
  std::vector<std::string> names;
  for (int k = 0; k < regs; ++k) names.push_back(prefix + std::to_string(k));
  Cefa a(names);
  std::uniform_int_distribution<int> nstates(1, 4), coin(0, 2), upd(-2, 2), sym(0, 1);
  int n = nstates(rng);
  for (int q = 0; q < n; ++q) a.add_state(q == 0 || (q == 1 && coin(rng) == 0), coin(rng) == 0);
  a.set_final(n - 1);
  std::uniform_int_distribution<int> st(0, n - 1), nedges(n, 2 * n + 1);
  int m = nedges(rng);
  for (int e = 0; e < m; ++e) {
    CostVector v;
    for (int k = 0; k < regs; ++k) v.push_back(upd(rng));
    a.add_edge(st(rng), sym(rng) ? CharRange{'a', 'a'} : CharRange{'b', 'b'}, st(rng), v);
  }
  return a;
}

/// Status of the image formula conjoined with `registers = c`.
inline LiaResult::Status image_status_at(const Cefa& a, const CostVector& c) {
  RegisterImage img = cefa_register_image(a);
  std::vector<LiaFormula> parts{img.formula};
  for (size_t k = 0; k < c.size(); ++k) parts.push_back(LiaFormula::eq(LinExpr::var(a.registers()[k]), c[k]));
  return lia_check_sat(LiaFormula::conj(parts)).status;
}

}  // namespace seqstr::testing
