#include "realize/eval.hpp"

#include <cstdlib>

namespace realize {

namespace {

const Valuation* pick(const ExprPtr& e, const Valuation* pre, const Valuation* input,
                      const Valuation* post) {
  const Valuation* v = nullptr;
  switch (e->var_tag) {
    case VarTag::PreState: v = pre; break;
    case VarTag::Input: v = input; break;
    case VarTag::PostState: v = post; break;
  }
  if (v == nullptr)
    throw EvalError(EvalError::Kind::MissingValuation,
                    std::string("no ") + to_string(e->var_tag) +
                        " valuation supplied for variable '" + e->var_name + "'");
  return v;
}

std::int64_t as_int(const Value& v) { return std::get<std::int64_t>(v); }
Rational as_real(const Value& v) { return std::get<Rational>(v); }
bool as_bool(const Value& v) { return std::get<bool>(v); }

// SMT-LIB2 integer division: a = b*q + r with 0 <= r < |b|.
std::int64_t euclid_div(std::int64_t a, std::int64_t b) {
  if (b == 0) throw EvalError(EvalError::Kind::DivisionByZero, "division by zero");
  std::int64_t q = a / b;
  std::int64_t r = a % b;
  if (r < 0) q += (b > 0) ? -1 : 1;
  return q;
}

std::int64_t euclid_mod(std::int64_t a, std::int64_t b) {
  if (b == 0) throw EvalError(EvalError::Kind::DivisionByZero, "modulo by zero");
  std::int64_t r = a % b;
  if (r < 0) r += (b > 0) ? b : -b;
  return r;
}

template <typename T>
bool compare(CmpOp op, const T& a, const T& b) {
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
  }
  return false;
}

}  // namespace

Value eval(const ExprPtr& e, const Valuation* pre, const Valuation* input,
           const Valuation* post) {
  switch (e->kind) {
    case ExprKind::BoolLit: return e->bool_value;
    case ExprKind::IntLit: return e->int_value;
    case ExprKind::RealLit: return e->real_value;
    case ExprKind::VarRef: return pick(e, pre, input, post)->get(e->var_name);

    case ExprKind::Not: return !eval_bool(e->args[0], pre, input, post);

    case ExprKind::And:
      for (const auto& a : e->args)
        if (!eval_bool(a, pre, input, post)) return false;
      return true;

    case ExprKind::Or:
      for (const auto& a : e->args)
        if (eval_bool(a, pre, input, post)) return true;
      return false;

    case ExprKind::Implies:
      return !eval_bool(e->args[0], pre, input, post) ||
             eval_bool(e->args[1], pre, input, post);

    case ExprKind::Ite:
      return eval_bool(e->args[0], pre, input, post)
                 ? eval(e->args[1], pre, input, post)
                 : eval(e->args[2], pre, input, post);

    case ExprKind::Cmp: {
      Value a = eval(e->args[0], pre, input, post);
      Value b = eval(e->args[1], pre, input, post);
      if (std::holds_alternative<bool>(a)) return compare(e->cmp_op, as_bool(a), as_bool(b));
      if (std::holds_alternative<std::int64_t>(a))
        return compare(e->cmp_op, as_int(a), as_int(b));
      return compare(e->cmp_op, as_real(a), as_real(b));
    }

    case ExprKind::Arith: {
      if (e->arith_op == ArithOp::Neg) {
        Value a = eval(e->args[0], pre, input, post);
        if (std::holds_alternative<std::int64_t>(a)) return -as_int(a);
        return -as_real(a);
      }
      Value a = eval(e->args[0], pre, input, post);
      Value b = eval(e->args[1], pre, input, post);
      if (std::holds_alternative<std::int64_t>(a)) {
        std::int64_t x = as_int(a), y = as_int(b);
        switch (e->arith_op) {
          case ArithOp::Add: return x + y;
          case ArithOp::Sub: return x - y;
          case ArithOp::Mul: return x * y;
          case ArithOp::Div: return euclid_div(x, y);
          case ArithOp::Mod: return euclid_mod(x, y);
          default: break;
        }
      } else {
        Rational x = as_real(a), y = as_real(b);
        switch (e->arith_op) {
          case ArithOp::Add: return x + y;
          case ArithOp::Sub: return x - y;
          case ArithOp::Mul: return x * y;
          default: break;  // div/mod are int-only, rejected by the type checker
        }
      }
      break;
    }
  }
  throw EvalError(EvalError::Kind::MissingValuation, "malformed expression node");
}

bool eval_bool(const ExprPtr& e, const Valuation* pre, const Valuation* input,
               const Valuation* post) {
  return std::get<bool>(eval(e, pre, input, post));
}

namespace {

bool holds_all(const std::vector<ExprPtr>& es, const Valuation* pre, const Valuation* input,
               const Valuation* post) {
  for (const auto& e : es)
    if (!eval_bool(e, pre, input, post)) return false;
  return true;
}

}  // namespace

bool holds_A(const TypedContract& c, const Valuation& state, const Valuation& input) {
  return holds_all(c.contract.assumptions, &state, &input, nullptr);
}

bool holds_GI(const TypedContract& c, const Valuation& state) {
  return holds_all(c.contract.initial_guarantees, &state, nullptr, nullptr);
}

bool holds_GT(const TypedContract& c, const Valuation& state, const Valuation& input,
              const Valuation& post) {
  return holds_all(c.contract.transitional_guarantees, &state, &input, &post);
}

}  // namespace realize
