#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "realize/diagnostics.hpp"
#include "realize/value.hpp"

namespace realize {

enum class Sort { Bool, Int, Real };
const char* to_string(Sort s);

// Temporal role of a variable occurrence. Assumptions range over
// (PreState, Input); initial guarantees over PreState only; transitional
// guarantees over all three.
enum class VarTag { PreState, Input, PostState };
const char* to_string(VarTag t);

enum class ExprKind { BoolLit, IntLit, RealLit, VarRef, Not, And, Or, Implies, Ite, Cmp, Arith };

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class ArithOp { Add, Sub, Mul, Div, Mod, Neg };

const char* to_string(CmpOp op);
const char* to_string(ArithOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression tree node. `sort` is set by the type checker;
// `var_tag` of an unprimed VarRef is resolved against the declarations
// at the same time (primed occurrences are always PostState).
struct Expr {
  ExprKind kind;

  bool bool_value = false;
  std::int64_t int_value = 0;
  Rational real_value;

  std::string var_name;
  bool var_primed = false;
  VarTag var_tag = VarTag::PreState;

  CmpOp cmp_op = CmpOp::Eq;
  ArithOp arith_op = ArithOp::Add;

  std::vector<ExprPtr> args;

  SourceSpan span;
  std::optional<Sort> sort;

  bool is_literal() const {
    return kind == ExprKind::BoolLit || kind == ExprKind::IntLit || kind == ExprKind::RealLit;
  }
};

namespace mk {

ExprPtr bool_lit(bool v, SourceSpan span = {});
ExprPtr int_lit(std::int64_t v, SourceSpan span = {});
ExprPtr real_lit(std::int64_t num, std::int64_t den, SourceSpan span = {});
ExprPtr var(std::string name, bool primed = false, SourceSpan span = {});
ExprPtr not_(ExprPtr e, SourceSpan span = {});
ExprPtr and_(std::vector<ExprPtr> es, SourceSpan span = {});
ExprPtr or_(std::vector<ExprPtr> es, SourceSpan span = {});
ExprPtr implies(ExprPtr a, ExprPtr b, SourceSpan span = {});
ExprPtr ite(ExprPtr c, ExprPtr t, ExprPtr e, SourceSpan span = {});
ExprPtr cmp(CmpOp op, ExprPtr a, ExprPtr b, SourceSpan span = {});
ExprPtr arith(ArithOp op, std::vector<ExprPtr> args, SourceSpan span = {});

}  // namespace mk

// Structural equality ignoring spans and sort annotations.
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

}  // namespace realize
