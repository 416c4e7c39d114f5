#include "realize/typecheck.hpp"

#include <map>
#include <sstream>

namespace realize {

namespace {

enum class Section { Assumptions, Initial, Transitions };

const char* section_name(Section s) {
  switch (s) {
    case Section::Assumptions: return "assumptions";
    case Section::Initial: return "initial";
    case Section::Transitions: return "transitions";
  }
  return "?";
}

bool tag_allowed(Section section, VarTag tag) {
  switch (section) {
    case Section::Assumptions: return tag != VarTag::PostState;
    case Section::Initial: return tag == VarTag::PreState;
    case Section::Transitions: return true;
  }
  return false;
}

// A syntactic constant: a literal, possibly under unary minus.
bool is_literal_operand(const ExprPtr& e) {
  if (e->is_literal()) return true;
  return e->kind == ExprKind::Arith && e->arith_op == ArithOp::Neg &&
         is_literal_operand(e->args[0]);
}

class Checker {
 public:
  explicit Checker(const Contract& c) : contract_(c) {}

  TypecheckResult run() {
    check_declarations();

    Contract typed = contract_;
    typed.assumptions = check_section(contract_.assumptions, Section::Assumptions);
    typed.initial_guarantees = check_section(contract_.initial_guarantees, Section::Initial);
    typed.transitional_guarantees =
        check_section(contract_.transitional_guarantees, Section::Transitions);

    TypecheckResult result;
    result.diagnostics = std::move(diags_);
    if (result.diagnostics.empty()) result.typed = TypedContract{std::move(typed)};
    return result;
  }

 private:
  void check_declarations() {
    std::map<std::string, SourceSpan> seen;
    auto visit = [&](const std::vector<VarDecl>& decls) {
      for (const auto& d : decls) {
        auto [it, inserted] = seen.emplace(d.name, d.span);
        if (!inserted)
          error(DiagCode::DuplicateVariable, d.span,
                "variable '" + d.name + "' declared more than once");
      }
    };
    visit(contract_.inputs);
    visit(contract_.states);
  }

  std::vector<ExprPtr> check_section(const std::vector<ExprPtr>& exprs, Section section) {
    std::vector<ExprPtr> out;
    for (const auto& e : exprs) {
      ExprPtr typed = annotate(e, section);
      if (!typed) continue;
      if (typed->sort != Sort::Bool) {
        error(DiagCode::SortMismatch, e->span,
              std::string(section_name(section)) + " expression must be bool, got " +
                  to_string(*typed->sort));
        continue;
      }
      out.push_back(typed);
    }
    return out;
  }

  // Returns a sort-annotated copy of e, or null after reporting.
  ExprPtr annotate(const ExprPtr& e, Section section) {
    auto copy = std::make_shared<Expr>(*e);
    copy->args.clear();
    for (const auto& a : e->args) {
      ExprPtr ta = annotate(a, section);
      if (!ta) return nullptr;
      copy->args.push_back(std::move(ta));
    }
    const auto& args = copy->args;

    switch (e->kind) {
      case ExprKind::BoolLit: copy->sort = Sort::Bool; break;
      case ExprKind::IntLit: copy->sort = Sort::Int; break;
      case ExprKind::RealLit: copy->sort = Sort::Real; break;

      case ExprKind::VarRef: {
        const VarDecl* decl = nullptr;
        if (e->var_primed) {
          decl = contract_.find_state(e->var_name);
          if (!decl) {
            error(DiagCode::UnknownVariable, e->span,
                  "'" + e->var_name + "'' is not a state variable");
            return nullptr;
          }
          copy->var_tag = VarTag::PostState;
        } else if (const VarDecl* in = contract_.find_input(e->var_name)) {
          decl = in;
          copy->var_tag = VarTag::Input;
        } else if (const VarDecl* st = contract_.find_state(e->var_name)) {
          decl = st;
          copy->var_tag = VarTag::PreState;
        } else {
          error(DiagCode::UnknownVariable, e->span, "unknown variable '" + e->var_name + "'");
          return nullptr;
        }
        if (!tag_allowed(section, copy->var_tag)) {
          error(DiagCode::IllegalTagInSection, e->span,
                std::string("a ") + to_string(copy->var_tag) +
                    " variable may not appear in the " + section_name(section) + " section");
          return nullptr;
        }
        copy->sort = decl->sort;
        break;
      }

      case ExprKind::Not:
      case ExprKind::And:
      case ExprKind::Or:
      case ExprKind::Implies:
        for (const auto& a : args)
          if (a->sort != Sort::Bool) {
            error(DiagCode::SortMismatch, a->span, "logical operand must be bool");
            return nullptr;
          }
        copy->sort = Sort::Bool;
        break;

      case ExprKind::Ite:
        if (args[0]->sort != Sort::Bool) {
          error(DiagCode::SortMismatch, args[0]->span, "if condition must be bool");
          return nullptr;
        }
        if (args[1]->sort != args[2]->sort) {
          error(DiagCode::SortMismatch, e->span, "if branches must share a sort");
          return nullptr;
        }
        copy->sort = args[1]->sort;
        break;

      case ExprKind::Cmp: {
        if (args[0]->sort != args[1]->sort) {
          error(DiagCode::SortMismatch, e->span,
                std::string("cannot compare ") + to_string(*args[0]->sort) + " with " +
                    to_string(*args[1]->sort));
          return nullptr;
        }
        bool equality = e->cmp_op == CmpOp::Eq || e->cmp_op == CmpOp::Ne;
        if (!equality && args[0]->sort == Sort::Bool) {
          error(DiagCode::SortMismatch, e->span, "ordering comparison requires numeric operands");
          return nullptr;
        }
        copy->sort = Sort::Bool;
        break;
      }

      case ExprKind::Arith: {
        for (const auto& a : args)
          if (a->sort == Sort::Bool) {
            error(DiagCode::SortMismatch, a->span, "arithmetic operand must be numeric");
            return nullptr;
          }
        if (e->arith_op == ArithOp::Neg) {
          copy->sort = args[0]->sort;
          break;
        }
        if (args[0]->sort != args[1]->sort) {
          error(DiagCode::SortMismatch, e->span, "arithmetic operands must share a sort");
          return nullptr;
        }
        if ((e->arith_op == ArithOp::Div || e->arith_op == ArithOp::Mod) &&
            args[0]->sort != Sort::Int) {
          error(DiagCode::SortMismatch, e->span, "div/mod require int operands");
          return nullptr;
        }
        if (e->arith_op == ArithOp::Mul && !is_literal_operand(args[0]) &&
            !is_literal_operand(args[1])) {
          error(DiagCode::NonlinearMultiplication, e->span,
                "multiplication requires a literal operand");
          return nullptr;
        }
        copy->sort = args[0]->sort;
        break;
      }
    }
    return copy;
  }

  void error(DiagCode code, SourceSpan span, std::string msg) {
    diags_.push_back(Diagnostic{code, std::move(msg), span});
  }

  const Contract& contract_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

TypecheckResult typecheck(const Contract& contract) { return Checker(contract).run(); }

}  // namespace realize
