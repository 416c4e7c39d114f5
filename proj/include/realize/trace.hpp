#pragma once

#include <optional>
#include <vector>

#include "realize/value.hpp"

namespace realize {

// A finite prefix of an execution: k (state, input) steps followed by a
// final state. When pending_input is present the trace witnesses a
// deadlock: the assumptions accept pending_input at final_state but no
// post-state satisfies the transitional guarantees (solver-attested).
struct Trace {
  struct Step {
    Valuation state;
    Valuation input;
  };

  std::vector<Step> steps;
  Valuation final_state;
  std::optional<Valuation> pending_input;

  std::size_t depth() const { return steps.size(); }
};

}  // namespace realize
