#pragma once

#include <string>
#include <vector>

#include "realize/expr.hpp"

namespace realize {

struct VarDecl {
  std::string name;
  Sort sort;
  SourceSpan span;
};

// An assume/guarantee contract. Expression lists are conjunctions; an
// empty list denotes true.
struct Contract {
  std::string name;
  std::vector<VarDecl> inputs;
  std::vector<VarDecl> states;
  std::vector<ExprPtr> assumptions;
  std::vector<ExprPtr> initial_guarantees;
  std::vector<ExprPtr> transitional_guarantees;

  const VarDecl* find_input(const std::string& n) const;
  const VarDecl* find_state(const std::string& n) const;
};

// A contract that passed type checking: every expression carries a sort
// and every variable occurrence a resolved tag.
struct TypedContract {
  Contract contract;
};

// Structural equality ignoring spans/sorts, with empty expression
// sections normalized to the single literal `true`.
bool contract_equal(const Contract& a, const Contract& b);

}  // namespace realize
