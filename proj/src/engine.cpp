#include "realize/engine.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "realize/eval.hpp"
#include "realize/smt_encoder.hpp"

namespace realize {

namespace {

struct QueryRunner {
  const EngineOptions& opts;
  std::string solver;
  std::string contract_name;
  std::mutex mutex;
  int queries = 0;
  long total_ms = 0;

  SolverResult run(const SmtScript& script) {
    if (!opts.dump_smt_dir.empty()) {
      std::filesystem::create_directories(opts.dump_smt_dir);
      std::ofstream f(std::filesystem::path(opts.dump_smt_dir) /
                      script.file_name(contract_name));
      f << script.text;
    }
    SolverResult r = run_query(script, solver, opts.timeout_ms);
    std::lock_guard<std::mutex> lock(mutex);
    ++queries;
    total_ms += r.wall_time_ms;
    return r;
  }
};

Valuation extract_valuation(const std::map<std::string, Value>& model,
                            const std::vector<VarDecl>& decls, VarTag tag, std::size_t step,
                            bool pending) {
  Valuation v;
  for (const auto& d : decls) {
    std::string key = pending ? "w$" + d.name : smt_var_name(tag, step, d.name);
    auto it = model.find(key);
    if (it == model.end())
      throw TraceReconstructionError("model is missing entry '" + key + "'");
    v.set(d.name, it->second);
  }
  return v;
}

std::string format_query(QueryKind kind, std::size_t n) {
  return std::string(to_string(kind)) + "(" + std::to_string(n) + ")";
}

}  // namespace

Trace build_counterexample(const std::map<std::string, Value>& model,
                           const TypedContract& c, std::size_t k) {
  const Contract& ct = c.contract;
  std::vector<Valuation> states;
  std::vector<Valuation> inputs;
  for (std::size_t j = 0; j <= k; ++j)
    states.push_back(extract_valuation(model, ct.states, VarTag::PreState, j, false));
  for (std::size_t j = 0; j < k; ++j)
    inputs.push_back(extract_valuation(model, ct.inputs, VarTag::Input, j, false));
  Valuation pending = extract_valuation(model, ct.inputs, VarTag::Input, k, true);

  try {
    if (!holds_GI(c, states[0]))
      throw TraceReconstructionError("model state s0 does not satisfy the initial guarantees");
    for (std::size_t j = 0; j < k; ++j) {
      if (!holds_A(c, states[j], inputs[j]))
        throw TraceReconstructionError("model violates the assumptions at step " +
                                       std::to_string(j));
      if (!holds_GT(c, states[j], inputs[j], states[j + 1]))
        throw TraceReconstructionError(
            "model violates the transitional guarantees at step " + std::to_string(j));
    }
    if (!holds_A(c, states[k], pending))
      throw TraceReconstructionError("pending input does not satisfy the assumptions");
  } catch (const EvalError& e) {
    throw TraceReconstructionError(std::string("trace re-evaluation failed: ") + e.what());
  }

  Trace trace;
  for (std::size_t j = 0; j < k; ++j)
    trace.steps.push_back(Trace::Step{states[j], inputs[j]});
  trace.final_state = states[k];
  trace.pending_input = pending;
  return trace;
}

Verdict check_realizability(const TypedContract& c, const EngineOptions& opts) {
  QueryRunner runner{opts, opts.solver_cmd.empty() ? default_solver_cmd() : opts.solver_cmd,
                     c.contract.name, {}};

  std::vector<std::pair<std::size_t, SolverStatus>> exact_base;
  auto finish = [&](Verdict out) {
    out.stats.queries = runner.queries;
    out.stats.total_ms = runner.total_ms;
    out.stats.exact_base = std::move(exact_base);
    return out;
  };
  auto unknown_verdict = [&](QueryKind kind, std::size_t n, const std::string& reason) {
    Verdict u;
    u.kind = Verdict::Kind::Unknown;
    u.unknown_reason = reason.empty() ? format_query(kind, n) : reason;
    u.last_n = n;
    return finish(u);
  };

  SolverResult init = runner.run(encode_initial_sat(c));
  if (init.status == SolverStatus::Unknown)
    return unknown_verdict(QueryKind::InitialSat, 0, init.unknown_reason);
  if (init.status == SolverStatus::Unsat) {
    Verdict u;
    u.kind = Verdict::Kind::Unrealizable;
    u.reason = UnrealizableReason::NoInitialState;
    return finish(u);
  }

  for (std::size_t n = 0; n <= opts.max_n; ++n) {
    if (opts.exact_base) {
      SolverResult exact = runner.run(encode_exact_base_check(c, n));
      exact_base.emplace_back(n, exact.status);
    }

    SmtScript base_script = encode_base_check_prime(c, n);
    SolverResult base;
    std::optional<SolverResult> extend;

    if (opts.concurrent_queries) {
      auto base_future =
          std::async(std::launch::async, [&] { return runner.run(base_script); });
      auto extend_future = std::async(std::launch::async,
                                      [&] { return runner.run(encode_extend_check(c, n)); });
      base = base_future.get();
      extend = extend_future.get();
    } else {
      base = runner.run(base_script);
    }

    // Deterministic join: unrealizability evidence from the base check
    // outranks anything the extend check said at the same n.
    if (base.status == SolverStatus::Sat) {
      Verdict u;
      u.kind = Verdict::Kind::Unrealizable;
      u.reason = UnrealizableReason::DeadlockAtDepth;
      u.n = n;
      u.trace = build_counterexample(base.model, c, n);
      return finish(u);
    }
    if (base.status == SolverStatus::Unknown)
      return unknown_verdict(QueryKind::BaseCheckPrime, n, base.unknown_reason);

    if (!extend) extend = runner.run(encode_extend_check(c, n));
    if (extend->status == SolverStatus::Unsat) {
      Verdict r;
      r.kind = Verdict::Kind::Realizable;
      r.n = n;
      return finish(r);
    }
    if (extend->status == SolverStatus::Unknown)
      return unknown_verdict(QueryKind::ExtendCheck, n, extend->unknown_reason);
  }

  Verdict u;
  u.kind = Verdict::Kind::Unknown;
  u.unknown_reason = "bound exhausted";
  u.last_n = opts.max_n;
  return finish(u);
}

namespace {

nlohmann::ordered_json valuation_to_json(const Valuation& v) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& [name, value] : v.values) {
    if (std::holds_alternative<bool>(value)) {
      obj[name] = std::get<bool>(value);
    } else if (std::holds_alternative<std::int64_t>(value)) {
      obj[name] = std::get<std::int64_t>(value);
    } else {
      const Rational& r = std::get<Rational>(value);
      if (r.den == 1) obj[name] = r.num;
      else obj[name] = r.to_string();
    }
  }
  return obj;
}

std::string human_report(const Verdict& v) {
  std::ostringstream os;
  switch (v.kind) {
    case Verdict::Kind::Realizable:
      os << "REALIZABLE (n=" << v.n << ")\n";
      break;
    case Verdict::Kind::Unrealizable:
      if (v.reason == UnrealizableReason::NoInitialState) {
        os << "UNREALIZABLE: no state satisfies the initial guarantees\n";
      } else {
        os << "UNREALIZABLE: deadlock at depth " << v.n << "\n";
        if (v.trace) {
          os << "  counterexample:\n";
          std::size_t j = 0;
          for (const auto& step : v.trace->steps) {
            os << "    state " << j << ": " << step.state.to_string() << "\n";
            os << "    input " << j << ": " << step.input.to_string() << "\n";
            ++j;
          }
          os << "    state " << j << ": " << v.trace->final_state.to_string() << "\n";
          if (v.trace->pending_input)
            os << "    pending input: " << v.trace->pending_input->to_string()
               << "  -- no transition can answer it\n";
        }
      }
      break;
    case Verdict::Kind::Unknown:
      os << "UNKNOWN: " << v.unknown_reason << " at n=" << v.last_n << "\n";
      break;
  }
  for (const auto& [n, status] : v.stats.exact_base)
    os << "  exact base check n=" << n << ": " << to_string(status) << "\n";
  os << "  queries: " << v.stats.queries << ", time: " << v.stats.total_ms << " ms\n";
  return os.str();
}

}  // namespace

std::string report(const Verdict& v, const std::string& contract_name, ReportFormat format) {
  if (format == ReportFormat::Human) return human_report(v);

  nlohmann::ordered_json j;
  j["contract"] = contract_name;
  switch (v.kind) {
    case Verdict::Kind::Realizable:
      j["verdict"] = "realizable";
      j["n"] = v.n;
      j["reason"] = nullptr;
      break;
    case Verdict::Kind::Unrealizable:
      j["verdict"] = "unrealizable";
      if (v.reason == UnrealizableReason::NoInitialState) {
        j["n"] = nullptr;
        j["reason"] = "no state satisfies the initial guarantees";
      } else {
        j["n"] = v.n;
        j["reason"] = "deadlock at depth " + std::to_string(v.n);
      }
      break;
    case Verdict::Kind::Unknown:
      j["verdict"] = "unknown";
      j["n"] = v.last_n;
      j["reason"] = v.unknown_reason;
      break;
  }
  if (v.trace) {
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const auto& step : v.trace->steps)
      steps.push_back({{"state", valuation_to_json(step.state)},
                       {"input", valuation_to_json(step.input)}});
    steps.push_back({{"state", valuation_to_json(v.trace->final_state)}, {"input", nullptr}});
    j["trace"] = steps;
    j["pending_input"] =
        v.trace->pending_input ? valuation_to_json(*v.trace->pending_input)
                               : nlohmann::ordered_json(nullptr);
  } else {
    j["trace"] = nullptr;
    j["pending_input"] = nullptr;
  }
  j["queries"] = v.stats.queries;
  j["time_ms"] = v.stats.total_ms;
  return j.dump(2);
}

}  // namespace realize
