// Command-line front end: check a contract with the SMT engine, run the
// finite-domain oracle, dump the generated scripts, or just parse.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "realize/engine.hpp"
#include "realize/oracle.hpp"
#include "realize/parser.hpp"
#include "realize/smt_encoder.hpp"
#include "realize/typecheck.hpp"

namespace {

constexpr int kExitRealizable = 0;
constexpr int kExitUnrealizable = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitToolError = 3;
constexpr int kExitUsage = 4;

struct CommonOpts {
  std::string contract_path;
  std::string format = "human";
  std::size_t max_n = 20;
  long timeout_ms = 10000;
  std::string solver_cmd;
  std::string dump_smt_dir;
  bool exact_base = false;
  std::vector<std::string> range_args;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit_error_json(const std::string& contract, const std::string& reason) {
  nlohmann::ordered_json j;
  j["contract"] = contract;
  j["verdict"] = "error";
  j["n"] = nullptr;
  j["reason"] = reason;
  j["trace"] = nullptr;
  j["pending_input"] = nullptr;
  j["queries"] = 0;
  j["time_ms"] = 0;
  std::cout << j.dump(2) << "\n";
}

// Loads, parses and typechecks; on failure prints diagnostics and exits.
realize::TypedContract load_contract(const CommonOpts& opts) {
  std::string text = read_file(opts.contract_path);
  realize::ParseResult parsed = realize::parse_contract(text);
  if (!parsed.ok()) {
    std::cerr << opts.contract_path << ": parse failed\n"
              << realize::render_diagnostics(parsed.diagnostics);
    if (opts.format == "json") emit_error_json("", "parse failed");
    std::exit(kExitUsage);
  }
  realize::TypecheckResult checked = realize::typecheck(*parsed.contract);
  if (!checked.ok()) {
    std::cerr << opts.contract_path << ": type checking failed\n"
              << realize::render_diagnostics(checked.diagnostics);
    if (opts.format == "json") emit_error_json(parsed.contract->name, "type checking failed");
    std::exit(kExitUsage);
  }
  return *checked.typed;
}

// Ranges come from --range flags plus an optional `<contract>.ranges`
// sidecar next to the contract file; flags win.
std::map<std::string, realize::oracle::Domain> load_ranges(const CommonOpts& opts) {
  std::map<std::string, realize::oracle::Domain> ranges;
  std::filesystem::path sidecar = opts.contract_path;
  sidecar.replace_extension(".ranges");
  if (std::filesystem::exists(sidecar))
    ranges = realize::oracle::parse_ranges_file(read_file(sidecar.string()));
  for (const auto& arg : opts.range_args) {
    auto [name, domain] = realize::oracle::parse_range_arg(arg);
    ranges[name] = domain;
  }
  return ranges;
}

int verdict_exit_code(const realize::Verdict& v) {
  switch (v.kind) {
    case realize::Verdict::Kind::Realizable: return kExitRealizable;
    case realize::Verdict::Kind::Unrealizable: return kExitUnrealizable;
    case realize::Verdict::Kind::Unknown: return kExitUnknown;
  }
  return kExitToolError;
}

int run_check(const CommonOpts& opts) {
  realize::TypedContract typed = load_contract(opts);
  realize::EngineOptions eng;
  eng.max_n = opts.max_n;
  eng.timeout_ms = opts.timeout_ms;
  eng.solver_cmd = opts.solver_cmd;
  eng.exact_base = opts.exact_base;
  eng.dump_smt_dir = opts.dump_smt_dir;
  realize::Verdict v = realize::check_realizability(typed, eng);
  realize::ReportFormat fmt = opts.format == "json" ? realize::ReportFormat::Json
                                                    : realize::ReportFormat::Human;
  std::cout << realize::report(v, typed.contract.name, fmt) << (fmt == realize::ReportFormat::Json ? "\n" : "");
  return verdict_exit_code(v);
}

int run_oracle(const CommonOpts& opts) {
  realize::TypedContract typed = load_contract(opts);
  realize::oracle::FiniteContract fc{typed, load_ranges(opts)};
  realize::oracle::validate(fc);

  auto viable = realize::oracle::viable_set(fc);
  bool realizable = realize::oracle::check_realizable_oracle(fc);

  if (opts.format == "json") {
    nlohmann::ordered_json j;
    j["contract"] = typed.contract.name;
    j["verdict"] = realizable ? "realizable" : "unrealizable";
    j["viable_states"] = viable.size();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (realizable ? "REALIZABLE" : "UNREALIZABLE")
              << " (oracle): |viable| = " << viable.size() << "\n";
  }
  return realizable ? kExitRealizable : kExitUnrealizable;
}

int run_dump_smt(const CommonOpts& opts, const std::string& out_dir) {
  realize::TypedContract typed = load_contract(opts);
  std::filesystem::create_directories(out_dir);
  auto write = [&](const realize::SmtScript& script) {
    std::ofstream f(std::filesystem::path(out_dir) / script.file_name(typed.contract.name));
    f << script.text;
  };
  write(realize::encode_initial_sat(typed));
  for (std::size_t n = 0; n <= opts.max_n; ++n) {
    write(realize::encode_base_check_prime(typed, n));
    write(realize::encode_extend_check(typed, n));
    if (opts.exact_base) write(realize::encode_exact_base_check(typed, n));
  }
  std::cout << "wrote scripts for n = 0.." << opts.max_n << " to " << out_dir << "\n";
  return kExitRealizable;
}

int run_parse(const CommonOpts& opts) {
  realize::TypedContract typed = load_contract(opts);
  if (opts.format == "json") {
    nlohmann::ordered_json j;
    j["contract"] = typed.contract.name;
    j["inputs"] = typed.contract.inputs.size();
    j["states"] = typed.contract.states.size();
    j["text"] = realize::render_contract(typed.contract);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << realize::render_contract(typed.contract);
  }
  return kExitRealizable;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"realize: realizability checking for assume/guarantee contracts"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string dump_dir = "smt-out";

  auto add_common = [&](CLI::App* cmd, bool with_engine_flags) {
    cmd->add_option("contract", opts.contract_path, "contract file (.ctr)")->required();
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"human", "json"}));
    if (with_engine_flags) {
      cmd->add_option("--max-n", opts.max_n, "bound on the induction depth");
      cmd->add_option("--timeout-ms", opts.timeout_ms, "per-query solver timeout")
          ->check(CLI::PositiveNumber);
      cmd->add_option("--solver", opts.solver_cmd,
                      "solver command reading SMT-LIB2 on stdin (default: REALIZE_SOLVER or 'z3 -in')");
      cmd->add_flag("--exact-base", opts.exact_base,
                    "also run the exact base check (diagnostic)");
    }
  };

  CLI::App* check = app.add_subcommand("check", "decide realizability with an SMT solver");
  add_common(check, true);
  check->add_option("--dump-smt", opts.dump_smt_dir, "persist every script to this directory");

  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "decide realizability by finite-domain enumeration");
  add_common(oracle_cmd, false);
  oracle_cmd->add_option("--range", opts.range_args,
                         "finite range for a variable: var=lo..hi or var=bool");

  CLI::App* dump = app.add_subcommand("dump-smt", "generate scripts without solving");
  add_common(dump, true);
  dump->add_option("--out", dump_dir, "output directory");

  CLI::App* parse = app.add_subcommand("parse", "parse, typecheck and pretty-print");
  add_common(parse, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand(check)) return run_check(opts);
    if (app.got_subcommand(oracle_cmd)) return run_oracle(opts);
    if (app.got_subcommand(dump)) return run_dump_smt(opts, dump_dir);
    if (app.got_subcommand(parse)) return run_parse(opts);
  } catch (const realize::SolverSpawnError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (opts.format == "json") emit_error_json("", e.what());
    return kExitToolError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (opts.format == "json") emit_error_json("", e.what());
    return kExitToolError;
  }
  return kExitUsage;
}
