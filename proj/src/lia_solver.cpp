// Decision procedure for conjunctions and disjunctions of linear integer
// constraints: integer equality elimination, rational simplex in the
// bounded-variable style, branch and bound on fractional values, and case
// splitting on disjunctions the current model violates.
#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <optional>

#include "seqstr/lia.hpp"

namespace seqstr {

namespace {

constexpr int kMaxBranchDepth = 2000;

enum class Outcome { Sat, Unsat, Unknown };

// sum(a_i * x_i) + c  (= or <=)  0
struct Row {
  std::map<int, mpz_class> a;
  mpz_class c;
  bool eq = false;
};

mpz_class floor_div(const mpz_class& n, const mpz_class& d) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return q;
}

mpz_class ceil_div(const mpz_class& n, const mpz_class& d) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return q;
}

// Divides by the coefficient gcd, tightening inequalities. Returns false when
// the row alone is unsatisfiable; sets `trivial` when it always holds.
bool normalize(Row& r, bool& trivial) {
  trivial = false;
  mpz_class g = 0;
  for (const auto& [v, k] : r.a) g = gcd(g, k);
  if (g == 0) {
    trivial = r.eq ? r.c == 0 : r.c <= 0;
    return trivial;
  }
  if (g == 1) return true;
  if (r.eq) {
    if (r.c % g != 0) return false;
    r.c /= g;
  } else {
    // sum(a x) <= -c  becomes  sum(a/g x) <= floor(-c/g)
    r.c = -floor_div(-r.c, g);
  }
  for (auto& [v, k] : r.a) k /= g;
  return true;
}

void substitute(Row& r, int var, const Row& def) {
  auto it = r.a.find(var);
  if (it == r.a.end()) return;
  mpz_class k = it->second;
  r.a.erase(it);
  for (const auto& [v, d] : def.a) {
    mpz_class& slot = r.a[v];
    slot += k * d;
    if (slot == 0) r.a.erase(v);
  }
  r.c += k * def.c;
}

// Bounded-variable simplex over the rationals.
class Simplex {
 public:
  explicit Simplex(int structural) : structural_(structural) {
    for (int i = 0; i < structural; ++i) add_var();
  }

  int add_var() {
    lo_.emplace_back();
    hi_.emplace_back();
    val_.emplace_back(0);
    row_of_.push_back(-1);
    return static_cast<int>(val_.size()) - 1;
  }

  // New basic variable s = sum(a_j x_j) over structural variables.
  int add_row(const std::map<int, mpz_class>& a) {
    int s = add_var();
    std::map<int, mpq_class> row;
    mpq_class value = 0;
    for (const auto& [j, k] : a) {
      mpq_class kq(k);
      if (row_of_[j] >= 0) {
        // Express through the current nonbasic variables.
        for (const auto& [n, c] : rows_[row_of_[j]]) {
          mpq_class& slot = row[n];
          slot += kq * c;
          if (slot == 0) row.erase(n);
        }
      } else {
        mpq_class& slot = row[j];
        slot += kq;
        if (slot == 0) row.erase(j);
      }
      value += kq * val_[j];
    }
    row_of_[s] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(row));
    row_var_.push_back(s);
    val_[s] = value;
    return s;
  }

  std::optional<mpq_class>& lo(int v) { return lo_[v]; }
  std::optional<mpq_class>& hi(int v) { return hi_[v]; }
  const mpq_class& value(int v) const { return val_[v]; }
  bool is_basic(int v) const { return row_of_[v] >= 0; }
  int num_vars() const { return static_cast<int>(val_.size()); }

  // Moves a nonbasic variable into its bounds after a bound change.
  void repair_nonbasic(int v) {
    if (is_basic(v)) return;
    if (lo_[v] && val_[v] < *lo_[v])
      update(v, *lo_[v]);
    else if (hi_[v] && val_[v] > *hi_[v])
      update(v, *hi_[v]);
  }

  // Returns Sat when all bounds hold, Unsat on conflict.
  Outcome check(const LiaOptions& opts, long& budget) {
    while (true) {
      if (--budget < 0) return Outcome::Unknown;
      if (opts.deadline && (budget & 63) == 0 && std::chrono::steady_clock::now() > *opts.deadline)
        return Outcome::Unknown;
      int b = -1;
      bool raise = false;
      for (size_t r = 0; r < rows_.size(); ++r) {
        int v = row_var_[r];
        bool below = lo_[v] && val_[v] < *lo_[v];
        bool above = hi_[v] && val_[v] > *hi_[v];
        if ((below || above) && (b < 0 || v < b)) {
          b = v;
          raise = below;
        }
      }
      if (b < 0) return Outcome::Sat;
      const auto& row = rows_[row_of_[b]];
      int pick = -1;
      for (const auto& [j, k] : row) {
        bool can_up = !hi_[j] || val_[j] < *hi_[j];
        bool can_down = !lo_[j] || val_[j] > *lo_[j];
        bool ok = raise ? ((k > 0 && can_up) || (k < 0 && can_down)) : ((k < 0 && can_up) || (k > 0 && can_down));
        if (ok && (pick < 0 || j < pick)) pick = j;
      }
      if (pick < 0) return Outcome::Unsat;
      pivot_and_update(b, pick, raise ? *lo_[b] : *hi_[b]);
    }
  }

 private:
  void update(int j, const mpq_class& v) {
    mpq_class delta = v - val_[j];
    for (size_t r = 0; r < rows_.size(); ++r) {
      auto it = rows_[r].find(j);
      if (it != rows_[r].end()) val_[row_var_[r]] += it->second * delta;
    }
    val_[j] = v;
  }

  void pivot_and_update(int b, int j, const mpq_class& v) {
    int rb = row_of_[b];
    mpq_class a = rows_[rb].at(j);
    mpq_class theta = (v - val_[b]) / a;
    val_[b] = v;
    val_[j] += theta;
    for (size_t r = 0; r < rows_.size(); ++r) {
      if (static_cast<int>(r) == rb) continue;
      auto it = rows_[r].find(j);
      if (it != rows_[r].end()) val_[row_var_[r]] += it->second * theta;
    }
    // Solve row rb for x_j: x_j = (b - sum_{i != j} a_i x_i) / a.
    std::map<int, mpq_class> def;
    for (const auto& [i, k] : rows_[rb])
      if (i != j) def[i] = -k / a;
    def[b] = 1 / a;
    for (size_t r = 0; r < rows_.size(); ++r) {
      if (static_cast<int>(r) == rb) continue;
      auto it = rows_[r].find(j);
      if (it == rows_[r].end()) continue;
      mpq_class k = it->second;
      rows_[r].erase(it);
      for (const auto& [i, d] : def) {
        mpq_class& slot = rows_[r][i];
        slot += k * d;
        if (slot == 0) rows_[r].erase(i);
      }
    }
    rows_[rb] = std::move(def);
    row_var_[rb] = j;
    row_of_[j] = rb;
    row_of_[b] = -1;
  }

  int structural_;
  std::vector<std::optional<mpq_class>> lo_, hi_;
  std::vector<mpq_class> val_;
  std::vector<int> row_of_;
  std::vector<std::map<int, mpq_class>> rows_;
  std::vector<int> row_var_;
};

class ConjunctionSolver {
 public:
  ConjunctionSolver(int nvars, const LiaOptions& opts) : nvars_(nvars), opts_(opts) {}

  Outcome solve(std::vector<Row> rows, std::vector<mpz_class>& model) {
    std::vector<Row> work;
    for (auto& r : rows) {
      bool trivial;
      if (!normalize(r, trivial)) return Outcome::Unsat;
      if (!trivial) work.push_back(std::move(r));
    }
    std::vector<std::pair<int, Row>> defs;
    if (!eliminate_equalities(work, defs)) return Outcome::Unsat;

    std::vector<mpz_class> values(nvars_, 0);
    Outcome o = solve_inequalities(work, values);
    if (o != Outcome::Sat) return o;
    for (auto it = defs.rbegin(); it != defs.rend(); ++it) {
      mpz_class v = it->second.c;
      for (const auto& [j, k] : it->second.a) v += k * values[j];
      values[it->first] = v;
    }
    values.resize(original_);
    model = std::move(values);
    return Outcome::Sat;
  }

  void set_original(int n) { original_ = n; }

 private:
  int fresh() { return nvars_++; }

  bool eliminate_equalities(std::vector<Row>& rows, std::vector<std::pair<int, Row>>& defs) {
    while (true) {
      int best_row = -1;
      int best_var = -1;
      mpz_class best_abs;
      for (size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].eq) continue;
        for (const auto& [v, k] : rows[r].a) {
          mpz_class ak = abs(k);
          if (best_row < 0 || ak < best_abs) {
            best_row = static_cast<int>(r);
            best_var = v;
            best_abs = ak;
          }
        }
      }
      if (best_row < 0) return true;
      Row eq = rows[best_row];
      mpz_class ak = eq.a.at(best_var);
      if (ak < 0) {
        for (auto& [v, k] : eq.a) k = -k;
        eq.c = -eq.c;
        ak = -ak;
      }
      Row def;
      if (ak == 1) {
        // x = -(rest + c)
        for (const auto& [v, k] : eq.a)
          if (v != best_var) def.a[v] = -k;
        def.c = -eq.c;
        rows.erase(rows.begin() + best_row);
      } else {
        // x = z - sum(floor(a_i/ak) x_i) - floor(c/ak) shrinks the coefficients.
        int z = fresh();
        def.a[z] = 1;
        for (const auto& [v, k] : eq.a)
          if (v != best_var) {
            mpz_class q = floor_div(k, ak);
            if (q != 0) def.a[v] = -q;
          }
        mpz_class qc = floor_div(eq.c, ak);
        def.c = -qc;
      }
      for (auto& r : rows) substitute(r, best_var, def);
      for (auto& [v, d] : defs) substitute(d, best_var, def);
      defs.emplace_back(best_var, def);
      std::vector<Row> kept;
      for (auto& r : rows) {
        bool trivial;
        if (!normalize(r, trivial)) return false;
        if (!trivial) kept.push_back(std::move(r));
      }
      rows.swap(kept);
    }
  }

  Outcome solve_inequalities(const std::vector<Row>& rows, std::vector<mpz_class>& values) {
    // Variables that still occur.
    std::map<int, int> index;
    for (const auto& r : rows)
      for (const auto& [v, k] : r.a) index.emplace(v, 0);
    int n = 0;
    for (auto& [v, i] : index) i = n++;
    Simplex sx(n);
    // Rows with one variable become bounds; parallel rows share a slack.
    std::map<std::map<int, mpz_class>, int> slack_of;
    for (const auto& r : rows) {
      // sum(a x) <= -c
      mpz_class rhs = -r.c;
      if (r.a.size() == 1) {
        auto [v, k] = *r.a.begin();
        int j = index.at(v);
        if (k > 0) {
          mpq_class b(floor_div(rhs, k));
          if (!sx.hi(j) || b < *sx.hi(j)) sx.hi(j) = b;
        } else {
          mpq_class b(ceil_div(rhs, k));
          if (!sx.lo(j) || b > *sx.lo(j)) sx.lo(j) = b;
        }
        continue;
      }
      std::map<int, mpz_class> key;
      for (const auto& [v, k] : r.a) key[index.at(v)] = k;
      bool negated = key.begin()->second < 0;
      if (negated) {
        for (auto& [v, k] : key) k = -k;
      }
      auto it = slack_of.find(key);
      int s = it == slack_of.end() ? slack_of[key] = sx.add_row(key) : it->second;
      if (!negated) {
        mpq_class b(rhs);
        if (!sx.hi(s) || b < *sx.hi(s)) sx.hi(s) = b;
      } else {
        mpq_class b(-rhs);
        if (!sx.lo(s) || b > *sx.lo(s)) sx.lo(s) = b;
      }
    }
    for (int j = 0; j < sx.num_vars(); ++j) {
      if (sx.lo(j) && sx.hi(j) && *sx.lo(j) > *sx.hi(j)) return Outcome::Unsat;
      sx.repair_nonbasic(j);
    }
    long nodes = 0;
    long budget = opts_.node_limit * 50;
    Outcome o = branch(sx, n, nodes, budget, 0);
    if (o != Outcome::Sat) return o;
    for (const auto& [v, i] : index) values[v] = best_[i];
    return Outcome::Sat;
  }

  Outcome branch(Simplex& sx, int n, long& nodes, long& budget, int depth) {
    if (++nodes > opts_.node_limit || depth > kMaxBranchDepth) return Outcome::Unknown;
    if (opts_.deadline && std::chrono::steady_clock::now() > *opts_.deadline) return Outcome::Unknown;
    Outcome o = sx.check(opts_, budget);
    if (o != Outcome::Sat) return o;
    int frac = -1;
    for (int j = 0; j < n; ++j)
      if (sx.value(j).get_den() != 1) {
        frac = j;
        break;
      }
    if (frac < 0) {
      best_.assign(n, 0);
      for (int j = 0; j < n; ++j) best_[j] = sx.value(j).get_num();
      return Outcome::Sat;
    }
    mpz_class fl = floor_div(sx.value(frac).get_num(), sx.value(frac).get_den());
    bool unknown = false;
    bool down_first = sx.value(frac) >= 0;
    for (int side = 0; side < 2; ++side) {
      bool down = (side == 0) == down_first;
      auto saved_lo = sx.lo(frac);
      auto saved_hi = sx.hi(frac);
      if (down) {
        sx.hi(frac) = mpq_class(fl);
      } else {
        sx.lo(frac) = mpq_class(fl + 1);
      }
      if (!(sx.lo(frac) && sx.hi(frac) && *sx.lo(frac) > *sx.hi(frac))) {
        sx.repair_nonbasic(frac);
        Outcome r = branch(sx, n, nodes, budget, depth + 1);
        if (r == Outcome::Sat) return r;
        if (r == Outcome::Unknown) unknown = true;
      }
      sx.lo(frac) = saved_lo;
      sx.hi(frac) = saved_hi;
      if (unknown && nodes > opts_.node_limit) break;
    }
    return unknown ? Outcome::Unknown : Outcome::Unsat;
  }

  int nvars_;
  int original_ = 0;
  const LiaOptions& opts_;
  std::vector<mpz_class> best_;
};

// Splits a formula into hard atoms and pending case splits.
void flatten(const LiaFormula& f, std::vector<LiaFormula>& atoms, std::vector<LiaFormula>& pending, bool& contradiction) {
  switch (f.kind()) {
    case LiaFormula::Kind::True:
      return;
    case LiaFormula::Kind::False:
      contradiction = true;
      return;
    case LiaFormula::Kind::Atom:
      if (f.rel() == LiaRel::Ne)
        pending.push_back(f);
      else
        atoms.push_back(f);
      return;
    case LiaFormula::Kind::And:
      for (const auto& c : f.children()) flatten(c, atoms, pending, contradiction);
      return;
    case LiaFormula::Kind::Or:
      pending.push_back(f);
      return;
  }
}

class DisjunctiveSolver {
 public:
  DisjunctiveSolver(const LiaFormula& f, const LiaOptions& opts) : opts_(opts) {
    for (const auto& v : f.vars()) {
      index_[v] = static_cast<int>(names_.size());
      names_.push_back(v);
    }
  }

  Outcome search(std::vector<LiaFormula> atoms, std::vector<LiaFormula> pending, LiaModel& model) {
    if (opts_.deadline && std::chrono::steady_clock::now() > *opts_.deadline) return Outcome::Unknown;
    std::vector<Row> rows;
    for (const auto& a : atoms) rows.push_back(to_row(a));
    ConjunctionSolver cs(static_cast<int>(names_.size()), opts_);
    cs.set_original(static_cast<int>(names_.size()));
    std::vector<mpz_class> values;
    Outcome o = cs.solve(std::move(rows), values);
    if (o != Outcome::Sat) return o;
    LiaModel m;
    for (size_t i = 0; i < names_.size(); ++i) {
      if (!values[i].fits_slong_p()) return Outcome::Unknown;
      m[names_[i]] = values[i].get_si();
    }
    size_t violated = pending.size();
    for (size_t i = 0; i < pending.size(); ++i)
      if (!lia_eval(pending[i], m)) {
        violated = i;
        break;
      }
    if (violated == pending.size()) {
      model = std::move(m);
      return Outcome::Sat;
    }
    LiaFormula split = pending[violated];
    pending.erase(pending.begin() + violated);
    std::vector<LiaFormula> cases;
    if (split.kind() == LiaFormula::Kind::Atom) {
      cases.push_back(LiaFormula::atom(split.expr(), LiaRel::Lt, 0));
      cases.push_back(LiaFormula::atom(split.expr(), LiaRel::Gt, 0));
    } else {
      cases = split.children();
    }
    bool unknown = false;
    for (const auto& c : cases) {
      std::vector<LiaFormula> a2 = atoms;
      std::vector<LiaFormula> p2 = pending;
      bool contradiction = false;
      flatten(c, a2, p2, contradiction);
      if (contradiction) continue;
      Outcome r = search(std::move(a2), std::move(p2), model);
      if (r == Outcome::Sat) return r;
      if (r == Outcome::Unknown) unknown = true;
    }
    return unknown ? Outcome::Unknown : Outcome::Unsat;
  }

 private:
  Row to_row(const LiaFormula& atom) const {
    Row r;
    LinExpr e = atom.expr();
    // Normal forms: e = 0 or e <= 0.
    Int sign = 1;
    Int shift = 0;
    switch (atom.rel()) {
      case LiaRel::Eq:
        r.eq = true;
        break;
      case LiaRel::Le:
        break;
      case LiaRel::Lt:
        shift = 1;
        break;
      case LiaRel::Ge:
        sign = -1;
        break;
      case LiaRel::Gt:
        sign = -1;
        shift = 1;
        break;
      case LiaRel::Ne:
        break;
    }
    for (const auto& [v, k] : e.coeffs()) r.a[index_.at(v)] = mpz_class(static_cast<long>(k)) * sign;
    r.c = mpz_class(static_cast<long>(e.constant())) * sign + shift;
    return r;
  }

  const LiaOptions& opts_;
  std::map<std::string, int> index_;
  std::vector<std::string> names_;
};

}  // namespace

LiaResult lia_check_sat(const LiaFormula& f, const LiaOptions& opts) {
  LiaResult result;
  std::vector<LiaFormula> atoms, pending;
  bool contradiction = false;
  flatten(f, atoms, pending, contradiction);
  if (contradiction) {
    result.status = LiaResult::Status::Unsat;
    return result;
  }
  DisjunctiveSolver solver(f, opts);
  Outcome o = solver.search(std::move(atoms), std::move(pending), result.model);
  switch (o) {
    case Outcome::Sat:
      result.status = LiaResult::Status::Sat;
      break;
    case Outcome::Unsat:
      result.status = LiaResult::Status::Unsat;
      break;
    case Outcome::Unknown:
      result.status = LiaResult::Status::Unknown;
      result.reason = "arithmetic search limit reached";
      break;
  }
  return result;
}

}  // namespace seqstr
