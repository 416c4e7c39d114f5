#pragma once

#include <optional>
#include <string>
#include <vector>

#include "realize/contract.hpp"
#include "realize/diagnostics.hpp"

namespace realize {

struct ParseResult {
  std::optional<Contract> contract;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return contract.has_value(); }
};

// Parses the textual contract language. Never throws: all failures are
// reported as diagnostics, with recovery to the next `;` so several
// errors can be reported at once.
ParseResult parse_contract(const std::string& text);

// Pretty-prints a contract in the same language. Empty expression
// sections render as `true;`, so parse(render(c)) equals c up to that
// normalization.
std::string render_contract(const Contract& c);

std::string render_expr(const ExprPtr& e);

}  // namespace realize
