#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "realize/smt_encoder.hpp"
#include "realize/value.hpp"

namespace realize {

enum class SolverStatus { Sat, Unsat, Unknown };
const char* to_string(SolverStatus s);

struct SolverResult {
  SolverStatus status = SolverStatus::Unknown;
  std::map<std::string, Value> model;  // present iff status == Sat
  std::string unknown_reason;          // set iff status == Unknown
  std::vector<std::string> defaulted_vars;
  std::string stderr_tail;
  long wall_time_ms = 0;
};

struct SolverSpawnError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ModelParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs `solver_cmd` (whitespace-split argv, resolved via PATH) with the
// script on stdin. The process is killed once timeout_ms elapses and the
// result is Unknown("timeout"). On sat, model entries listed in
// script.model_vars but absent from the solver's model are defaulted per
// sort and recorded in defaulted_vars.
SolverResult run_query(const SmtScript& script, const std::string& solver_cmd,
                       long timeout_ms);

// Parses the `(define-fun name () Sort value)` entries of a model
// section. Entries not listed in model_vars are ignored.
std::map<std::string, Value> parse_model(const std::string& model_text,
                                         const std::vector<ModelVar>& model_vars);

// Default solver command: REALIZE_SOLVER env var, else "z3 -in".
std::string default_solver_cmd();

}  // namespace realize
