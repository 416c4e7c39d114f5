#pragma once

#include <optional>
#include <vector>

#include "realize/contract.hpp"
#include "realize/diagnostics.hpp"

namespace realize {

struct TypecheckResult {
  std::optional<TypedContract> typed;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return typed.has_value(); }
};

// Resolves variable tags, enforces the per-section tag restrictions and
// the linearity restriction on multiplication, and annotates every
// expression with its sort.
TypecheckResult typecheck(const Contract& contract);

}  // namespace realize
