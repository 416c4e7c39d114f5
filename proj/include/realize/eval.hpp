#pragma once

#include "realize/contract.hpp"
#include "realize/value.hpp"

namespace realize {

// Evaluates a typed expression. The valuations supplied must cover every
// tag actually referenced; pass nullptr for contexts the expression does
// not use. Throws EvalError on division by zero or a missing variable.
Value eval(const ExprPtr& e, const Valuation* pre, const Valuation* input,
           const Valuation* post);

bool eval_bool(const ExprPtr& e, const Valuation* pre, const Valuation* input,
               const Valuation* post);

// Conjunction of a contract section; empty list is true.
bool holds_A(const TypedContract& c, const Valuation& state, const Valuation& input);
bool holds_GI(const TypedContract& c, const Valuation& state);
bool holds_GT(const TypedContract& c, const Valuation& state, const Valuation& input,
              const Valuation& post);

}  // namespace realize
