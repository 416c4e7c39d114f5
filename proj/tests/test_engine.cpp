#include <doctest.h>

#include <json.hpp>

#include "realize/engine.hpp"
#include "realize/oracle.hpp"
#include "realize/smt_encoder.hpp"
#include "support/fixtures.hpp"

using namespace realize;

namespace {

EngineOptions quick_opts() {
  EngineOptions opts;
  opts.max_n = 5;
  opts.timeout_ms = 20000;
  return opts;
}

std::int64_t int_of(const Value& v) { return std::get<std::int64_t>(v); }

}  // namespace

TEST_CASE("the doubler is unrealizable at depth 0 with a negative pending input") {
  auto typed = testsupport::load_fixture("doubler.ctr");
  Verdict v = check_realizability(typed, quick_opts());

  REQUIRE(v.kind == Verdict::Kind::Unrealizable);
  CHECK(v.reason == UnrealizableReason::DeadlockAtDepth);
  CHECK(v.n == 0);
  REQUIRE(v.trace.has_value());
  CHECK(v.trace->steps.empty());
  REQUIRE(v.trace->pending_input.has_value());
  // the witness input is solver-chosen; only its sign is forced
  CHECK(int_of(v.trace->pending_input->get("in")) < 0);
}

TEST_CASE("adding the assumption makes the doubler realizable at n=0") {
  auto typed = testsupport::load_fixture("doubler_fixed.ctr");
  Verdict v = check_realizability(typed, quick_opts());
  REQUIRE(v.kind == Verdict::Kind::Realizable);
  CHECK(v.n == 0);
  CHECK(v.stats.queries == 3);  // initial-sat, base(0), extend(0)
}

TEST_CASE("contradictory initial guarantees yield NoInitialState, never realizable") {
  auto typed = testsupport::load_fixture("no_initial.ctr");
  Verdict v = check_realizability(typed, quick_opts());
  REQUIRE(v.kind == Verdict::Kind::Unrealizable);
  CHECK(v.reason == UnrealizableReason::NoInitialState);
  CHECK_FALSE(v.trace.has_value());
}

TEST_CASE("a one-step warm-up deadlock is found at depth 1") {
  auto typed = testsupport::load_fixture("counter_deadlock1.ctr");
  Verdict v = check_realizability(typed, quick_opts());

  REQUIRE(v.kind == Verdict::Kind::Unrealizable);
  CHECK(v.reason == UnrealizableReason::DeadlockAtDepth);
  CHECK(v.n == 1);
  REQUIRE(v.trace.has_value());
  REQUIRE(v.trace->steps.size() == 1);
  CHECK(int_of(v.trace->steps[0].state.get("x")) == 0);
  CHECK(int_of(v.trace->final_state.get("x")) == 1);
  REQUIRE(v.trace->pending_input.has_value());
  CHECK(v.trace->pending_input->empty());  // the contract has no inputs
}

TEST_CASE("false-positive witness: engine says unrealizable, oracle says realizable") {
  auto typed = testsupport::load_fixture("fp_witness.ctr");
  Verdict v = check_realizability(typed, quick_opts());
  REQUIRE(v.kind == Verdict::Kind::Unrealizable);
  CHECK(v.reason == UnrealizableReason::DeadlockAtDepth);
  CHECK(v.n == 0);
  REQUIRE(v.trace.has_value());
  CHECK(int_of(v.trace->final_state.get("x")) == 1);  // the dead G_I state

  oracle::FiniteContract fc;
  fc.typed = typed;
  fc.ranges["tick"] = oracle::Domain{oracle::Domain::Kind::BoolDomain, 0, 0};
  fc.ranges["x"] = oracle::Domain{oracle::Domain::Kind::IntRange, 0, 1};
  CHECK(oracle::check_realizable_oracle(fc));
}

TEST_CASE("concurrent query dispatch joins to the same verdicts") {
  for (const char* name :
       {"doubler.ctr", "doubler_fixed.ctr", "no_initial.ctr", "fp_witness.ctr"}) {
    auto typed = testsupport::load_fixture(name);
    Verdict seq = check_realizability(typed, quick_opts());
    EngineOptions par = quick_opts();
    par.concurrent_queries = true;
    Verdict con = check_realizability(typed, par);
    CHECK(seq.kind == con.kind);
    if (seq.kind == Verdict::Kind::Realizable) CHECK(seq.n == con.n);
    if (seq.kind == Verdict::Kind::Unrealizable) CHECK(seq.reason == con.reason);
  }
}

TEST_CASE("the diagnostic exact base check matches its expected statuses") {
  auto doubler = testsupport::load_fixture("doubler.ctr");
  auto fixed = testsupport::load_fixture("doubler_fixed.ctr");
  std::string solver = default_solver_cmd();

  // negated exists-a-finitely-viable-G_I-state; FV_0 holds vacuously
  CHECK(run_query(encode_exact_base_check(doubler, 0), solver, 20000).status ==
        SolverStatus::Unsat);
  // for n=1 a negative input kills every state
  CHECK(run_query(encode_exact_base_check(doubler, 1), solver, 20000).status ==
        SolverStatus::Sat);
  // the fixed doubler stays viable for two steps
  CHECK(run_query(encode_exact_base_check(fixed, 2), solver, 20000).status ==
        SolverStatus::Unsat);
}

TEST_CASE("extend check statuses: the doubler fails, trivial guarantees pass") {
  std::string solver = default_solver_cmd();
  auto doubler = testsupport::load_fixture("doubler.ctr");
  CHECK(run_query(encode_extend_check(doubler, 0), solver, 20000).status ==
        SolverStatus::Sat);

  auto trivial = testsupport::parse_and_check(
      "contract t inputs: i : int; state: x : int; transitions: true; end");
  CHECK(run_query(encode_extend_check(trivial, 0), solver, 20000).status ==
        SolverStatus::Unsat);
  CHECK(run_query(encode_extend_check(trivial, 2), solver, 20000).status ==
        SolverStatus::Unsat);
}

TEST_CASE("initial-sat models satisfy the initial guarantees") {
  std::string solver = default_solver_cmd();
  auto typed = testsupport::parse_and_check(
      "contract c state: x : int; initial: x = 0 or x = 1; transitions: true; end");
  auto r = run_query(encode_initial_sat(typed), solver, 20000);
  REQUIRE(r.status == SolverStatus::Sat);
  auto x = std::get<std::int64_t>(r.model.at("s0$x"));
  CHECK((x == 0 || x == 1));
}

TEST_CASE("contracts without state variables run through the whole engine") {
  auto typed = testsupport::parse_and_check(
      "contract io inputs: i : int; assumptions: i >= 0; transitions: i > -1; end");
  Verdict v = check_realizability(typed, quick_opts());
  REQUIRE(v.kind == Verdict::Kind::Realizable);
  CHECK(v.n == 0);
}

TEST_CASE("exact_base option records statuses without changing the verdict") {
  auto typed = testsupport::load_fixture("doubler_fixed.ctr");
  EngineOptions opts = quick_opts();
  opts.exact_base = true;
  Verdict v = check_realizability(typed, opts);
  REQUIRE(v.kind == Verdict::Kind::Realizable);
  CHECK(v.n == 0);
  REQUIRE(v.stats.exact_base.size() == 1);
  CHECK(v.stats.exact_base[0].first == 0);
  CHECK(v.stats.exact_base[0].second == SolverStatus::Unsat);
}

TEST_CASE("real-sorted contracts go through the full pipeline") {
  auto grow = testsupport::parse_and_check(
      "contract grow state: r : real; initial: r = 0.0; transitions: r' = r + 0.5; end");
  Verdict v = check_realizability(grow, quick_opts());
  REQUIRE(v.kind == Verdict::Kind::Realizable);
  CHECK(v.n == 0);

  auto capped = testsupport::parse_and_check(
      "contract capped state: r : real; initial: r = 0.5;"
      " transitions: r' = 2.0 * r; r' <= 0.9; end");
  Verdict u = check_realizability(capped, quick_opts());
  REQUIRE(u.kind == Verdict::Kind::Unrealizable);
  CHECK(u.n == 0);
  REQUIRE(u.trace.has_value());
  CHECK(u.trace->final_state.get("r") == Value(Rational(1, 2)));
}

TEST_CASE("every generated doubler script is accepted by the solver") {
  auto typed = testsupport::load_fixture("doubler.ctr");
  std::string solver = default_solver_cmd();
  std::vector<SmtScript> scripts{encode_initial_sat(typed)};
  for (std::size_t n = 0; n <= 3; ++n) {
    scripts.push_back(encode_base_check_prime(typed, n));
    scripts.push_back(encode_extend_check(typed, n));
  }
  scripts.push_back(encode_exact_base_check(typed, 2));
  for (const auto& s : scripts) {
    // well-formed scripts never trip the protocol parser
    auto r = run_query(s, solver, 30000);
    CHECK((r.status == SolverStatus::Sat || r.status == SolverStatus::Unsat ||
           r.status == SolverStatus::Unknown));
  }
}

TEST_CASE("initial-sat statuses for satisfiable and borderline G_I") {
  std::string solver = default_solver_cmd();
  auto sat_gi = testsupport::parse_and_check(
      "contract c state: x : int; initial: x = 0 or x = 1; transitions: true; end");
  CHECK(run_query(encode_initial_sat(sat_gi), solver, 20000).status == SolverStatus::Sat);

  auto unsat_gi = testsupport::parse_and_check(
      "contract c state: x : int; initial: x > 0; x < 0; transitions: true; end");
  CHECK(run_query(encode_initial_sat(unsat_gi), solver, 20000).status ==
        SolverStatus::Unsat);

  // G_I = false makes the base check pass vacuously: exactly why the
  // engine needs the separate initial-sat query
  auto false_gi = testsupport::parse_and_check(
      "contract c state: x : int; initial: false; transitions: x' = x + 1; x' = x; end");
  CHECK(run_query(encode_base_check_prime(false_gi, 0), solver, 20000).status ==
        SolverStatus::Unsat);
  Verdict v = check_realizability(false_gi, quick_opts());
  CHECK(v.kind == Verdict::Kind::Unrealizable);
  CHECK(v.reason == UnrealizableReason::NoInitialState);
}

TEST_CASE("build_counterexample rejects models that fail re-evaluation") {
  auto typed = testsupport::load_fixture("counter_deadlock1.ctr");
  std::map<std::string, Value> model{
      {"s0$x", Value(static_cast<std::int64_t>(0))},
      {"s1$x", Value(static_cast<std::int64_t>(5))},  // not x+1: breaks G_T
  };
  CHECK_THROWS_AS(build_counterexample(model, typed, 1), TraceReconstructionError);

  std::map<std::string, Value> missing{{"s0$x", Value(static_cast<std::int64_t>(0))}};
  CHECK_THROWS_AS(build_counterexample(missing, typed, 1), TraceReconstructionError);
}

TEST_CASE("an unknown solver answer surfaces as the unknown verdict") {
  auto typed = testsupport::load_fixture("doubler.ctr");
  EngineOptions opts = quick_opts();
  opts.solver_cmd = "echo unknown";
  Verdict v = check_realizability(typed, opts);
  REQUIRE(v.kind == Verdict::Kind::Unknown);
  CHECK(v.unknown_reason == "solver reported unknown");
}

TEST_CASE("human reports match the documented one-liners") {
  Verdict r;
  r.kind = Verdict::Kind::Realizable;
  r.n = 2;
  CHECK(report(r, "c", ReportFormat::Human).find("REALIZABLE (n=2)") == 0);

  Verdict nis;
  nis.kind = Verdict::Kind::Unrealizable;
  nis.reason = UnrealizableReason::NoInitialState;
  CHECK(report(nis, "c", ReportFormat::Human)
            .find("UNREALIZABLE: no state satisfies the initial guarantees") == 0);

  Verdict unk;
  unk.kind = Verdict::Kind::Unknown;
  unk.unknown_reason = "timeout";
  unk.last_n = 3;
  CHECK(report(unk, "c", ReportFormat::Human).find("UNKNOWN: timeout at n=3") == 0);
}

TEST_CASE("json report carries the schema fields on every path") {
  auto typed = testsupport::load_fixture("counter_deadlock1.ctr");
  Verdict v = check_realizability(typed, quick_opts());
  auto j = nlohmann::json::parse(report(v, "counter_deadlock1", ReportFormat::Json));

  CHECK(j.at("contract") == "counter_deadlock1");
  CHECK(j.at("verdict") == "unrealizable");
  CHECK(j.at("n") == 1);
  CHECK(j.at("reason").is_string());
  REQUIRE(j.at("trace").is_array());
  CHECK(j.at("trace").size() == 2);  // one step plus the final state
  CHECK(j.at("trace")[0].at("state").at("x") == 0);
  CHECK(j.at("trace")[1].at("input").is_null());
  CHECK(j.at("pending_input").is_object());
  CHECK(j.at("queries").is_number());
  CHECK(j.at("time_ms").is_number());

  Verdict r;
  r.kind = Verdict::Kind::Realizable;
  r.n = 0;
  auto jr = nlohmann::json::parse(report(r, "c", ReportFormat::Json));
  CHECK(jr.at("verdict") == "realizable");
  CHECK(jr.at("trace").is_null());
  CHECK(jr.at("reason").is_null());
}
