#include "realize/smt_encoder.hpp"

#include <sstream>

namespace realize {

const char* to_string(QueryKind k) {
  switch (k) {
    case QueryKind::InitialSat: return "initial-sat";
    case QueryKind::BaseCheckPrime: return "base-check-prime";
    case QueryKind::ExactBaseCheck: return "exact-base-check";
    case QueryKind::ExtendCheck: return "extend-check";
  }
  return "?";
}

std::string SmtScript::file_name(const std::string& contract_name) const {
  std::string tag = to_string(kind);
  for (auto& ch : tag)
    if (ch == '-') ch = '_';
  return contract_name + "_" + tag + "_" + std::to_string(index) + ".smt2";
}

namespace {

const char* smt_sort(Sort s) {
  switch (s) {
    case Sort::Bool: return "Bool";
    case Sort::Int: return "Int";
    case Sort::Real: return "Real";
  }
  return "?";
}

std::string smt_int(std::int64_t v) {
  if (v < 0) return "(- " + std::to_string(-v) + ")";
  return std::to_string(v);
}

std::string smt_real(const Rational& r) {
  std::int64_t n = r.num < 0 ? -r.num : r.num;
  std::string body;
  if (r.den == 1) {
    body = std::to_string(n) + ".0";
  } else {
    body = "(/ " + std::to_string(n) + ".0 " + std::to_string(r.den) + ".0)";
  }
  if (r.num < 0) return "(- " + body + ")";
  return body;
}

std::string lower(const ExprPtr& e, const StepMap& names) {
  switch (e->kind) {
    case ExprKind::BoolLit: return e->bool_value ? "true" : "false";
    case ExprKind::IntLit: return smt_int(e->int_value);
    case ExprKind::RealLit: return smt_real(e->real_value);
    case ExprKind::VarRef:
      switch (e->var_tag) {
        case VarTag::PreState: return names.pre_prefix + e->var_name;
        case VarTag::Input: return names.input_prefix + e->var_name;
        case VarTag::PostState: return names.post_prefix + e->var_name;
      }
      return "?";
    case ExprKind::Not: return "(not " + lower(e->args[0], names) + ")";
    case ExprKind::And:
    case ExprKind::Or: {
      if (e->args.empty()) return e->kind == ExprKind::And ? "true" : "false";
      if (e->args.size() == 1) return lower(e->args[0], names);
      std::string out = e->kind == ExprKind::And ? "(and" : "(or";
      for (const auto& a : e->args) out += " " + lower(a, names);
      return out + ")";
    }
    case ExprKind::Implies:
      return "(=> " + lower(e->args[0], names) + " " + lower(e->args[1], names) + ")";
    case ExprKind::Ite:
      return "(ite " + lower(e->args[0], names) + " " + lower(e->args[1], names) + " " +
             lower(e->args[2], names) + ")";
    case ExprKind::Cmp: {
      const char* op = nullptr;
      switch (e->cmp_op) {
        case CmpOp::Eq: op = "="; break;
        case CmpOp::Ne: op = "distinct"; break;
        case CmpOp::Lt: op = "<"; break;
        case CmpOp::Le: op = "<="; break;
        case CmpOp::Gt: op = ">"; break;
        case CmpOp::Ge: op = ">="; break;
      }
      return std::string("(") + op + " " + lower(e->args[0], names) + " " +
             lower(e->args[1], names) + ")";
    }
    case ExprKind::Arith: {
      if (e->arith_op == ArithOp::Neg) return "(- " + lower(e->args[0], names) + ")";
      const char* op = nullptr;
      switch (e->arith_op) {
        case ArithOp::Add: op = "+"; break;
        case ArithOp::Sub: op = "-"; break;
        case ArithOp::Mul: op = "*"; break;
        case ArithOp::Div: op = "div"; break;
        case ArithOp::Mod: op = "mod"; break;
        default: break;
      }
      return std::string("(") + op + " " + lower(e->args[0], names) + " " +
             lower(e->args[1], names) + ")";
    }
  }
  return "?";
}

std::string conjoin(const std::vector<ExprPtr>& es, const StepMap& names) {
  if (es.empty()) return "true";
  if (es.size() == 1) return lower(es[0], names);
  std::string out = "(and";
  for (const auto& e : es) out += " " + lower(e, names);
  return out + ")";
}

StepMap path_step(std::size_t j) {
  return StepMap{"s" + std::to_string(j) + "$", "i" + std::to_string(j) + "$",
                 "s" + std::to_string(j + 1) + "$"};
}

StepMap final_step(std::size_t k) {
  return StepMap{"s" + std::to_string(k) + "$", "w$", "post$"};
}

class ScriptBuilder {
 public:
  ScriptBuilder(const TypedContract& c, QueryKind kind, std::size_t index)
      : c_(c.contract), kind_(kind), index_(index) {
    os_ << "; " << to_string(kind) << " " << index << " for contract " << c_.name << "\n";
    os_ << "(set-option :produce-models true)\n";
    os_ << "(set-logic ALL)\n";
  }

  void declare_state_step(std::size_t j) {
    for (const auto& v : c_.states) {
      std::string name = smt_var_name(VarTag::PreState, j, v.name);
      os_ << "(declare-const " << name << " " << smt_sort(v.sort) << ")\n";
      model_vars_.push_back(ModelVar{name, v.name, j, VarTag::PreState, v.sort});
    }
  }

  void declare_input_step(std::size_t j) {
    for (const auto& v : c_.inputs) {
      std::string name = smt_var_name(VarTag::Input, j, v.name);
      os_ << "(declare-const " << name << " " << smt_sort(v.sort) << ")\n";
      model_vars_.push_back(ModelVar{name, v.name, j, VarTag::Input, v.sort});
    }
  }

  void declare_pending_input(std::size_t step) {
    for (const auto& v : c_.inputs) {
      std::string name = "w$" + v.name;
      os_ << "(declare-const " << name << " " << smt_sort(v.sort) << ")\n";
      model_vars_.push_back(ModelVar{name, v.name, step, VarTag::Input, v.sort});
    }
  }

  void assert_each(const std::vector<ExprPtr>& es, const StepMap& names) {
    for (const auto& e : es) os_ << "(assert " << lower(e, names) << ")\n";
  }

  void assert_raw(const std::string& term) { os_ << "(assert " << term << ")\n"; }

  // The negated final obligation shared by the base and extend checks:
  // under any post-state, the transitional guarantees fail.
  void assert_deadlock_at(std::size_t k) {
    StepMap names = final_step(k);
    std::string guard = conjoin(c_.transitional_guarantees, names);
    if (c_.states.empty()) {
      assert_raw("(not " + guard + ")");
      return;
    }
    std::string binders;
    for (const auto& v : c_.states)
      binders += "(post$" + v.name + " " + smt_sort(v.sort) + ") ";
    binders.pop_back();
    assert_raw("(forall (" + binders + ") (not " + guard + "))");
  }

  SmtScript finish() {
    os_ << "(check-sat)\n(get-model)\n";
    return SmtScript{kind_, index_, os_.str(), std::move(model_vars_)};
  }

  const Contract& contract() const { return c_; }

 private:
  const Contract& c_;
  QueryKind kind_;
  std::size_t index_;
  std::ostringstream os_;
  std::vector<ModelVar> model_vars_;
};

void emit_path(ScriptBuilder& b, const TypedContract& c, std::size_t k, bool with_gi) {
  for (std::size_t j = 0; j <= k; ++j) b.declare_state_step(j);
  for (std::size_t j = 0; j < k; ++j) b.declare_input_step(j);
  b.declare_pending_input(k);

  if (with_gi) b.assert_each(c.contract.initial_guarantees, path_step(0));
  for (std::size_t j = 0; j < k; ++j) {
    b.assert_each(c.contract.assumptions, path_step(j));
    b.assert_each(c.contract.transitional_guarantees, path_step(j));
  }
  b.assert_each(c.contract.assumptions, final_step(k));
  b.assert_deadlock_at(k);
}

std::string quantify(const char* quant, const std::string& binders, const std::string& body) {
  if (binders.empty()) return body;
  return std::string("(") + quant + " (" + binders + ") " + body + ")";
}

std::string bound_vars(const std::vector<VarDecl>& decls, const std::string& prefix) {
  std::string out;
  for (const auto& v : decls) {
    if (!out.empty()) out += " ";
    out += "(" + prefix + v.name + " " + smt_sort(v.sort) + ")";
  }
  return out;
}

// finitely-viable unrolling: n alternations of (forall inputs) / (exists
// post-states), chained through the successor state.
std::string finitely_viable_term(const TypedContract& c, std::size_t n,
                                 const std::string& state_prefix, std::size_t depth) {
  if (n == 0) return "true";
  const Contract& ct = c.contract;
  std::string d = std::to_string(depth);
  std::string input_prefix = "q" + d + "i$";
  std::string next_prefix = "q" + d + "s$";

  StepMap assume_names{state_prefix, input_prefix, ""};
  StepMap step_names{state_prefix, input_prefix, next_prefix};

  std::string tail = finitely_viable_term(c, n - 1, next_prefix, depth + 1);
  std::string gt = conjoin(ct.transitional_guarantees, step_names);
  std::string succ_body = tail == "true" ? gt : "(and " + gt + " " + tail + ")";
  std::string exists_part = quantify("exists", bound_vars(ct.states, next_prefix), succ_body);
  std::string impl =
      "(=> " + conjoin(ct.assumptions, assume_names) + " " + exists_part + ")";
  return quantify("forall", bound_vars(ct.inputs, input_prefix), impl);
}

}  // namespace

std::string smt_var_name(VarTag tag, std::size_t step, const std::string& var) {
  switch (tag) {
    case VarTag::PreState: return "s" + std::to_string(step) + "$" + var;
    case VarTag::Input: return "i" + std::to_string(step) + "$" + var;
    case VarTag::PostState: return "post$" + var;
  }
  return var;
}

std::string lower_expr(const ExprPtr& e, const StepMap& names) { return lower(e, names); }

SmtScript encode_initial_sat(const TypedContract& c) {
  ScriptBuilder b(c, QueryKind::InitialSat, 0);
  b.declare_state_step(0);
  b.assert_each(c.contract.initial_guarantees, path_step(0));
  return b.finish();
}

SmtScript encode_base_check_prime(const TypedContract& c, std::size_t k) {
  ScriptBuilder b(c, QueryKind::BaseCheckPrime, k);
  emit_path(b, c, k, /*with_gi=*/true);
  return b.finish();
}

SmtScript encode_extend_check(const TypedContract& c, std::size_t n) {
  ScriptBuilder b(c, QueryKind::ExtendCheck, n);
  emit_path(b, c, n, /*with_gi=*/false);
  return b.finish();
}

SmtScript encode_exact_base_check(const TypedContract& c, std::size_t n) {
  ScriptBuilder b(c, QueryKind::ExactBaseCheck, n);
  const Contract& ct = c.contract;
  std::string state_prefix = "q0s$";
  StepMap gi_names{state_prefix, "", ""};
  std::string gi = conjoin(ct.initial_guarantees, gi_names);
  std::string fv = finitely_viable_term(c, n, state_prefix, 1);
  std::string body = fv == "true" ? gi : "(and " + gi + " " + fv + ")";
  std::string binders = bound_vars(ct.states, state_prefix);
  if (binders.empty()) {
    b.assert_raw("(not " + body + ")");
  } else {
    b.assert_raw("(forall (" + binders + ") (not " + body + "))");
  }
  return b.finish();
}

}  // namespace realize
