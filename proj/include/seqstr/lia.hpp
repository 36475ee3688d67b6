// Quantifier-free linear integer arithmetic: terms, formulas and a decision
// procedure.
#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqstr {

using Int = std::int64_t;

class NonLinear : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnboundVariable : public std::runtime_error {
 public:
  explicit UnboundVariable(const std::string& var) : std::runtime_error("unbound variable '" + var + "'"), var_(var) {}
  const std::string& var() const { return var_; }

 private:
  std::string var_;
};

/// Raised when 64-bit arithmetic on terms or models would wrap.
class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

Int checked_add(Int a, Int b);
Int checked_mul(Int a, Int b);

/// Linear term: sum of coefficient * variable plus a constant.
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(Int constant) : constant_(constant) {}  // NOLINT: implicit on purpose
  static LinExpr var(const std::string& name, Int coeff = 1);

  const std::map<std::string, Int>& coeffs() const { return coeffs_; }
  Int constant() const { return constant_; }
  bool is_constant() const { return coeffs_.empty(); }
  Int coeff(const std::string& v) const;

  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(Int k);
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, Int k) { return a *= k; }
  friend LinExpr operator*(Int k, LinExpr a) { return a *= k; }
  LinExpr operator-() const { return *this * -1; }
  friend bool operator==(const LinExpr&, const LinExpr&) = default;

  /// Replaces variables by terms; unmapped variables stay.
  LinExpr substitute(const std::map<std::string, LinExpr>& sub) const;
  /// Throws UnboundVariable when a variable is missing.
  Int eval(const std::map<std::string, Int>& m) const;
  std::string to_string() const;

 private:
  std::map<std::string, Int> coeffs_;
  Int constant_ = 0;
};

enum class LiaRel { Eq, Ne, Lt, Le, Gt, Ge };

using LiaModel = std::map<std::string, Int>;

class LiaFormula {
 public:
  enum class Kind { True, False, Atom, And, Or };

  LiaFormula();  // True
  static LiaFormula truth();
  static LiaFormula falsity();
  static LiaFormula atom(const LinExpr& lhs, LiaRel rel, const LinExpr& rhs);
  static LiaFormula conj(std::vector<LiaFormula> parts);
  static LiaFormula disj(std::vector<LiaFormula> parts);
  static LiaFormula eq(const LinExpr& a, const LinExpr& b) { return atom(a, LiaRel::Eq, b); }
  static LiaFormula le(const LinExpr& a, const LinExpr& b) { return atom(a, LiaRel::Le, b); }
  static LiaFormula lt(const LinExpr& a, const LinExpr& b) { return atom(a, LiaRel::Lt, b); }
  static LiaFormula ge(const LinExpr& a, const LinExpr& b) { return atom(a, LiaRel::Ge, b); }

  Kind kind() const;
  /// Atoms are stored as `expr() rel 0`.
  LiaRel rel() const;
  const LinExpr& expr() const;
  const std::vector<LiaFormula>& children() const;

  LiaFormula substitute(const std::map<std::string, LinExpr>& sub) const;
  LiaFormula negate() const;
  void collect_vars(std::set<std::string>& out) const;
  std::set<std::string> vars() const;
  std::string to_string() const;

 private:
  struct Node;
  explicit LiaFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

LiaFormula operator&&(const LiaFormula& a, const LiaFormula& b);
LiaFormula operator||(const LiaFormula& a, const LiaFormula& b);

/// Throws UnboundVariable if `m` misses a free variable of `f`.
bool lia_eval(const LiaFormula& f, const LiaModel& m);

struct LiaOptions {
  /// Branch-and-bound nodes per conjunction before giving up.
  long node_limit = 200000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct LiaResult {
  enum class Status { Sat, Unsat, Unknown };
  Status status = Status::Unknown;
  LiaModel model;  // total on the formula's variables when Sat
  std::string reason;

  bool sat() const { return status == Status::Sat; }
  bool unsat() const { return status == Status::Unsat; }
};

LiaResult lia_check_sat(const LiaFormula& f, const LiaOptions& opts = {});

}  // namespace seqstr
