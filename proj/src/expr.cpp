#include "realize/expr.hpp"

#include <numeric>
#include <sstream>

#include "realize/contract.hpp"

namespace realize {

const char* to_string(DiagCode code) {
  switch (code) {
    case DiagCode::LexError: return "LexError";
    case DiagCode::SyntaxError: return "SyntaxError";
    case DiagCode::DuplicateSection: return "DuplicateSection";
    case DiagCode::DuplicateVariable: return "DuplicateVariable";
    case DiagCode::UnknownVariable: return "UnknownVariable";
    case DiagCode::SortMismatch: return "SortMismatch";
    case DiagCode::IllegalTagInSection: return "IllegalTagInSection";
    case DiagCode::NonlinearMultiplication: return "NonlinearMultiplication";
  }
  return "?";
}

std::string Diagnostic::render() const {
  std::ostringstream os;
  os << span.line << ":" << span.column << ": " << to_string(code) << ": " << message;
  return os.str();
}

std::string render_diagnostics(const std::vector<Diagnostic>& diags) {
  std::ostringstream os;
  for (const auto& d : diags) os << d.render() << "\n";
  return os.str();
}

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw EvalError(EvalError::Kind::DivisionByZero, "rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g == 0) g = 1;
  num = n / g;
  den = d / g;
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
  return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const {
  return Rational(num * o.num, den * o.den);
}
Rational Rational::operator-() const { return Rational(-num, den); }

bool Rational::operator<(const Rational& o) const {
  return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}

bool Rational::is_decimal_representable() const {
  std::int64_t d = den;
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  return d == 1;
}

std::string Rational::to_string() const {
  if (!is_decimal_representable()) {
    std::ostringstream os;
    os << num << "/" << den;
    return os.str();
  }
  // Scale to the smallest power of ten the denominator divides.
  std::int64_t scale = 1;
  while (scale % den != 0) scale *= 10;
  std::int64_t scaled = num * (scale / den);
  bool neg = scaled < 0;
  std::uint64_t mag = neg ? -static_cast<std::uint64_t>(scaled) : scaled;
  std::string digits = std::to_string(mag);
  std::string whole, frac;
  std::size_t frac_len = std::to_string(scale).size() - 1;
  if (digits.size() <= frac_len) digits.insert(0, frac_len + 1 - digits.size(), '0');
  whole = digits.substr(0, digits.size() - frac_len);
  frac = frac_len == 0 ? "0" : digits.substr(digits.size() - frac_len);
  return (neg ? "-" : "") + whole + "." + frac;
}

std::string value_to_string(const Value& v) {
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
  if (std::holds_alternative<std::int64_t>(v)) return std::to_string(std::get<std::int64_t>(v));
  return std::get<Rational>(v).to_string();
}

bool value_equal(const Value& a, const Value& b) { return a == b; }

const Value& Valuation::get(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end())
    throw EvalError(EvalError::Kind::MissingValuation, "no value for variable '" + name + "'");
  return it->second;
}

std::string Valuation::to_string() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [k, v] : values) {
    if (!first) os << ", ";
    first = false;
    os << k << " = " << value_to_string(v);
  }
  os << "}";
  return os.str();
}

const char* to_string(Sort s) {
  switch (s) {
    case Sort::Bool: return "bool";
    case Sort::Int: return "int";
    case Sort::Real: return "real";
  }
  return "?";
}

const char* to_string(VarTag t) {
  switch (t) {
    case VarTag::PreState: return "pre-state";
    case VarTag::Input: return "input";
    case VarTag::PostState: return "post-state";
  }
  return "?";
}

const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "<>";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

const char* to_string(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "div";
    case ArithOp::Mod: return "mod";
    case ArithOp::Neg: return "-";
  }
  return "?";
}

namespace mk {

static std::shared_ptr<Expr> node(ExprKind kind, SourceSpan span) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->span = span;
  return e;
}

ExprPtr bool_lit(bool v, SourceSpan span) {
  auto e = node(ExprKind::BoolLit, span);
  e->bool_value = v;
  e->sort = Sort::Bool;
  return e;
}

ExprPtr int_lit(std::int64_t v, SourceSpan span) {
  auto e = node(ExprKind::IntLit, span);
  e->int_value = v;
  e->sort = Sort::Int;
  return e;
}

ExprPtr real_lit(std::int64_t num, std::int64_t den, SourceSpan span) {
  auto e = node(ExprKind::RealLit, span);
  e->real_value = Rational(num, den);
  e->sort = Sort::Real;
  return e;
}

ExprPtr var(std::string name, bool primed, SourceSpan span) {
  auto e = node(ExprKind::VarRef, span);
  e->var_name = std::move(name);
  e->var_primed = primed;
  e->var_tag = primed ? VarTag::PostState : VarTag::PreState;
  return e;
}

ExprPtr not_(ExprPtr arg, SourceSpan span) {
  auto e = node(ExprKind::Not, span);
  e->args = {std::move(arg)};
  return e;
}

ExprPtr and_(std::vector<ExprPtr> es, SourceSpan span) {
  auto e = node(ExprKind::And, span);
  e->args = std::move(es);
  return e;
}

ExprPtr or_(std::vector<ExprPtr> es, SourceSpan span) {
  auto e = node(ExprKind::Or, span);
  e->args = std::move(es);
  return e;
}

ExprPtr implies(ExprPtr a, ExprPtr b, SourceSpan span) {
  auto e = node(ExprKind::Implies, span);
  e->args = {std::move(a), std::move(b)};
  return e;
}

ExprPtr ite(ExprPtr c, ExprPtr t, ExprPtr f, SourceSpan span) {
  auto e = node(ExprKind::Ite, span);
  e->args = {std::move(c), std::move(t), std::move(f)};
  return e;
}

ExprPtr cmp(CmpOp op, ExprPtr a, ExprPtr b, SourceSpan span) {
  auto e = node(ExprKind::Cmp, span);
  e->cmp_op = op;
  e->args = {std::move(a), std::move(b)};
  return e;
}

ExprPtr arith(ArithOp op, std::vector<ExprPtr> args, SourceSpan span) {
  auto e = node(ExprKind::Arith, span);
  e->arith_op = op;
  e->args = std::move(args);
  return e;
}

}  // namespace mk

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->args.size() != b->args.size()) return false;
  switch (a->kind) {
    case ExprKind::BoolLit:
      if (a->bool_value != b->bool_value) return false;
      break;
    case ExprKind::IntLit:
      if (a->int_value != b->int_value) return false;
      break;
    case ExprKind::RealLit:
      if (a->real_value != b->real_value) return false;
      break;
    case ExprKind::VarRef:
      if (a->var_name != b->var_name || a->var_primed != b->var_primed) return false;
      break;
    case ExprKind::Cmp:
      if (a->cmp_op != b->cmp_op) return false;
      break;
    case ExprKind::Arith:
      if (a->arith_op != b->arith_op) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!expr_equal(a->args[i], b->args[i])) return false;
  return true;
}

const VarDecl* Contract::find_input(const std::string& n) const {
  for (const auto& v : inputs)
    if (v.name == n) return &v;
  return nullptr;
}

const VarDecl* Contract::find_state(const std::string& n) const {
  for (const auto& v : states)
    if (v.name == n) return &v;
  return nullptr;
}

namespace {

bool section_equal(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  // An empty section means true.
  static const ExprPtr kTrue = mk::bool_lit(true);
  const std::vector<ExprPtr> na = a.empty() ? std::vector<ExprPtr>{kTrue} : a;
  const std::vector<ExprPtr> nb = b.empty() ? std::vector<ExprPtr>{kTrue} : b;
  if (na.size() != nb.size()) return false;
  for (std::size_t i = 0; i < na.size(); ++i)
    if (!expr_equal(na[i], nb[i])) return false;
  return true;
}

bool decls_equal(const std::vector<VarDecl>& a, const std::vector<VarDecl>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || a[i].sort != b[i].sort) return false;
  return true;
}

}  // namespace

bool contract_equal(const Contract& a, const Contract& b) {
  return a.name == b.name && decls_equal(a.inputs, b.inputs) &&
         decls_equal(a.states, b.states) && section_equal(a.assumptions, b.assumptions) &&
         section_equal(a.initial_guarantees, b.initial_guarantees) &&
         section_equal(a.transitional_guarantees, b.transitional_guarantees);
}

}  // namespace realize
