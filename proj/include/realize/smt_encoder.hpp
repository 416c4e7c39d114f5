#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "realize/contract.hpp"

namespace realize {

enum class QueryKind { InitialSat, BaseCheckPrime, ExactBaseCheck, ExtendCheck };
const char* to_string(QueryKind k);

// One declared constant of a generated script, with enough information
// to map a solver model entry back onto a trace position.
struct ModelVar {
  std::string smt_name;
  std::string contract_var;
  std::size_t step_index;
  VarTag tag;
  Sort sort;
};

// A self-contained SMT-LIB2 script. All query kinds except InitialSat
// assert the negation of the property, so `unsat` means the check holds.
struct SmtScript {
  QueryKind kind;
  std::size_t index = 0;  // k or n; unused for InitialSat
  std::string text;
  std::vector<ModelVar> model_vars;

  std::string file_name(const std::string& contract_name) const;
};

// Satisfiable iff some state satisfies the initial guarantees. Not
// negated; this guards the degenerate case where an unsatisfiable G_I
// makes the base check pass vacuously.
SmtScript encode_initial_sat(const TypedContract& c);

// Negation of BaseCheck'(k): sat iff some valid k-step path from a
// G_I-state reaches a state that deadlocks on an assumption-satisfying
// input. The path is skolemized into constants s0..sk, i0..i_{k-1} and
// the extra input w; only the post-state of the final step stays
// universally quantified.
SmtScript encode_base_check_prime(const TypedContract& c, std::size_t k);

// Negation of ExtendCheck(n): same shape as the base check but s0 is
// unconstrained (no G_I). unsat iff every valid n-step path from any
// state can be extended one more step.
SmtScript encode_extend_check(const TypedContract& c, std::size_t n);

// Negation of the exact base check (exists a G_I-state finitely viable
// for n steps), as one fully quantified formula with n alternations.
// Diagnostic only; solvers handle it poorly beyond small n.
SmtScript encode_exact_base_check(const TypedContract& c, std::size_t n);

// Naming contexts for the four variable roles inside one script.
struct StepMap {
  std::string pre_prefix;
  std::string input_prefix;
  std::string post_prefix;
};

// Lowers one typed expression to SMT-LIB2 term text under the given
// naming scheme.
std::string lower_expr(const ExprPtr& e, const StepMap& names);

std::string smt_var_name(VarTag tag, std::size_t step, const std::string& var);

}  // namespace realize
