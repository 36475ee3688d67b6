#include "seqstr/lia.hpp"

#include <sstream>

namespace seqstr {

Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in addition");
  return r;
}

Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in multiplication");
  return r;
}

LinExpr LinExpr::var(const std::string& name, Int coeff) {
  LinExpr e;
  if (coeff != 0) e.coeffs_[name] = coeff;
  return e;
}

Int LinExpr::coeff(const std::string& v) const {
  auto it = coeffs_.find(v);
  return it == coeffs_.end() ? 0 : it->second;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  for (const auto& [v, c] : o.coeffs_) {
    Int sum = checked_add(coeff(v), c);
    if (sum == 0)
      coeffs_.erase(v);
    else
      coeffs_[v] = sum;
  }
  constant_ = checked_add(constant_, o.constant_);
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) { return *this += o * -1; }

LinExpr& LinExpr::operator*=(Int k) {
  if (k == 0) {
    coeffs_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [v, c] : coeffs_) c = checked_mul(c, k);
  constant_ = checked_mul(constant_, k);
  return *this;
}

LinExpr LinExpr::substitute(const std::map<std::string, LinExpr>& sub) const {
  LinExpr out(constant_);
  for (const auto& [v, c] : coeffs_) {
    auto it = sub.find(v);
    if (it == sub.end())
      out += var(v, c);
    else
      out += it->second * c;
  }
  return out;
}

Int LinExpr::eval(const std::map<std::string, Int>& m) const {
  Int sum = constant_;
  for (const auto& [v, c] : coeffs_) {
    auto it = m.find(v);
    if (it == m.end()) throw UnboundVariable(v);
    sum = checked_add(sum, checked_mul(c, it->second));
  }
  return sum;
}

std::string LinExpr::to_string() const {
  std::vector<std::string> parts;
  for (const auto& [v, c] : coeffs_) {
    if (c == 1)
      parts.push_back(v);
    else if (c == -1)
      parts.push_back("(- " + v + ")");
    else
      parts.push_back("(* " + (c < 0 ? "(- " + std::to_string(-c) + ")" : std::to_string(c)) + " " + v + ")");
  }
  if (constant_ != 0 || parts.empty())
    parts.push_back(constant_ < 0 ? "(- " + std::to_string(-constant_) + ")" : std::to_string(constant_));
  if (parts.size() == 1) return parts[0];
  std::string out = "(+";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

struct LiaFormula::Node {
  Kind kind = Kind::True;
  LiaRel rel = LiaRel::Eq;
  LinExpr expr;
  std::vector<LiaFormula> children;
};

namespace {

bool holds(LiaRel rel, Int v) {
  switch (rel) {
    case LiaRel::Eq:
      return v == 0;
    case LiaRel::Ne:
      return v != 0;
    case LiaRel::Lt:
      return v < 0;
    case LiaRel::Le:
      return v <= 0;
    case LiaRel::Gt:
      return v > 0;
    case LiaRel::Ge:
      return v >= 0;
  }
  return false;
}

LiaRel negate_rel(LiaRel r) {
  switch (r) {
    case LiaRel::Eq:
      return LiaRel::Ne;
    case LiaRel::Ne:
      return LiaRel::Eq;
    case LiaRel::Lt:
      return LiaRel::Ge;
    case LiaRel::Le:
      return LiaRel::Gt;
    case LiaRel::Gt:
      return LiaRel::Le;
    case LiaRel::Ge:
      return LiaRel::Lt;
  }
  return r;
}

const char* rel_name(LiaRel r) {
  switch (r) {
    case LiaRel::Eq:
      return "=";
    case LiaRel::Ne:
      return "distinct";
    case LiaRel::Lt:
      return "<";
    case LiaRel::Le:
      return "<=";
    case LiaRel::Gt:
      return ">";
    case LiaRel::Ge:
      return ">=";
  }
  return "?";
}

}  // namespace

LiaFormula::LiaFormula() : node_(std::make_shared<Node>()) {}

LiaFormula LiaFormula::truth() { return LiaFormula(); }

LiaFormula LiaFormula::falsity() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::False;
  return LiaFormula(n);
}

LiaFormula LiaFormula::atom(const LinExpr& lhs, LiaRel rel, const LinExpr& rhs) {
  LinExpr e = lhs - rhs;
  if (e.is_constant()) return holds(rel, e.constant()) ? truth() : falsity();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->rel = rel;
  n->expr = std::move(e);
  return LiaFormula(n);
}

LiaFormula LiaFormula::conj(std::vector<LiaFormula> parts) {
  std::vector<LiaFormula> flat;
  for (auto& p : parts) {
    switch (p.kind()) {
      case Kind::True:
        break;
      case Kind::False:
        return falsity();
      case Kind::And:
        flat.insert(flat.end(), p.children().begin(), p.children().end());
        break;
      default:
        flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return truth();
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->children = std::move(flat);
  return LiaFormula(n);
}

LiaFormula LiaFormula::disj(std::vector<LiaFormula> parts) {
  std::vector<LiaFormula> flat;
  for (auto& p : parts) {
    switch (p.kind()) {
      case Kind::True:
        return truth();
      case Kind::False:
        break;
      case Kind::Or:
        flat.insert(flat.end(), p.children().begin(), p.children().end());
        break;
      default:
        flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return falsity();
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->children = std::move(flat);
  return LiaFormula(n);
}

LiaFormula::Kind LiaFormula::kind() const { return node_->kind; }
LiaRel LiaFormula::rel() const { return node_->rel; }
const LinExpr& LiaFormula::expr() const { return node_->expr; }
const std::vector<LiaFormula>& LiaFormula::children() const { return node_->children; }

LiaFormula LiaFormula::substitute(const std::map<std::string, LinExpr>& sub) const {
  switch (kind()) {
    case Kind::True:
    case Kind::False:
      return *this;
    case Kind::Atom:
      return atom(expr().substitute(sub), rel(), 0);
    case Kind::And:
    case Kind::Or: {
      std::vector<LiaFormula> parts;
      for (const auto& c : children()) parts.push_back(c.substitute(sub));
      return kind() == Kind::And ? conj(std::move(parts)) : disj(std::move(parts));
    }
  }
  return *this;
}

LiaFormula LiaFormula::negate() const {
  switch (kind()) {
    case Kind::True:
      return falsity();
    case Kind::False:
      return truth();
    case Kind::Atom:
      return atom(expr(), negate_rel(rel()), 0);
    case Kind::And:
    case Kind::Or: {
      std::vector<LiaFormula> parts;
      for (const auto& c : children()) parts.push_back(c.negate());
      return kind() == Kind::And ? disj(std::move(parts)) : conj(std::move(parts));
    }
  }
  return *this;
}

void LiaFormula::collect_vars(std::set<std::string>& out) const {
  if (kind() == Kind::Atom)
    for (const auto& [v, c] : expr().coeffs()) out.insert(v);
  for (const auto& c : children()) c.collect_vars(out);
}

std::set<std::string> LiaFormula::vars() const {
  std::set<std::string> out;
  collect_vars(out);
  return out;
}

std::string LiaFormula::to_string() const {
  switch (kind()) {
    case Kind::True:
      return "true";
    case Kind::False:
      return "false";
    case Kind::Atom:
      return std::string("(") + rel_name(rel()) + " " + expr().to_string() + " 0)";
    case Kind::And:
    case Kind::Or: {
      std::string out = kind() == Kind::And ? "(and" : "(or";
      for (const auto& c : children()) out += " " + c.to_string();
      return out + ")";
    }
  }
  return "";
}

LiaFormula operator&&(const LiaFormula& a, const LiaFormula& b) { return LiaFormula::conj({a, b}); }
LiaFormula operator||(const LiaFormula& a, const LiaFormula& b) { return LiaFormula::disj({a, b}); }

namespace {

bool eval_rec(const LiaFormula& f, const LiaModel& m) {
  switch (f.kind()) {
    case LiaFormula::Kind::True:
      return true;
    case LiaFormula::Kind::False:
      return false;
    case LiaFormula::Kind::Atom:
      return holds(f.rel(), f.expr().eval(m));
    case LiaFormula::Kind::And:
      for (const auto& c : f.children())
        if (!eval_rec(c, m)) return false;
      return true;
    case LiaFormula::Kind::Or:
      for (const auto& c : f.children())
        if (eval_rec(c, m)) return true;
      return false;
  }
  return false;
}

}  // namespace

bool lia_eval(const LiaFormula& f, const LiaModel& m) {
  for (const auto& v : f.vars())
    if (!m.count(v)) throw UnboundVariable(v);
  return eval_rec(f, m);
}

}  // namespace seqstr
