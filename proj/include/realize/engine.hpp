#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "realize/contract.hpp"
#include "realize/solver_driver.hpp"
#include "realize/trace.hpp"

namespace realize {

enum class UnrealizableReason { NoInitialState, DeadlockAtDepth };

struct Verdict {
  enum class Kind { Realizable, Unrealizable, Unknown };

  Kind kind = Kind::Unknown;
  std::size_t n = 0;  // Realizable: accepted depth; Unrealizable(Deadlock): k
  UnrealizableReason reason = UnrealizableReason::NoInitialState;
  std::optional<Trace> trace;
  std::string unknown_reason;
  std::size_t last_n = 0;

  struct Stats {
    int queries = 0;
    long total_ms = 0;
    // (n, status) of each diagnostic exact base check, when enabled.
    std::vector<std::pair<std::size_t, SolverStatus>> exact_base;
  } stats;
};

struct EngineOptions {
  std::size_t max_n = 20;
  long timeout_ms = 10000;
  std::string solver_cmd;  // empty: default_solver_cmd()
  bool exact_base = false;
  // Dispatch the base and extend query of one iteration concurrently;
  // the verdict join is deterministic (a sat base check wins).
  bool concurrent_queries = false;
  std::string dump_smt_dir;  // empty: do not persist scripts
};

// Raised when a sat base-check model fails re-evaluation under the
// contract semantics; indicates an encoder or driver bug.
struct TraceReconstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The k-induction-style loop: InitialSat once, then per n = 0..max_n a
// base check (sat: unrealizable with counterexample) and an extend check
// (unsat: realizable at n). Any solver Unknown stops the loop.
Verdict check_realizability(const TypedContract& c, const EngineOptions& opts);

// Rebuilds the trace from a sat BaseCheckPrime(k) model and re-checks
// every path step under the evaluator; the deadlock itself is
// solver-attested.
Trace build_counterexample(const std::map<std::string, Value>& model,
                           const TypedContract& c, std::size_t k);

enum class ReportFormat { Human, Json };

std::string report(const Verdict& v, const std::string& contract_name,
                   ReportFormat format);

}  // namespace realize
