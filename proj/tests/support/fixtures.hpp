#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "realize/oracle.hpp"
#include "realize/parser.hpp"
#include "realize/typecheck.hpp"

namespace testsupport {

inline std::string fixture_path(const std::string& name) {
  return std::string(REALIZE_TEST_DIR) + "/contracts/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open fixture " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline realize::TypedContract parse_and_check(const std::string& text) {
  realize::ParseResult parsed = realize::parse_contract(text);
  if (!parsed.ok())
    throw std::runtime_error("fixture parse failed:\n" +
                             realize::render_diagnostics(parsed.diagnostics));
  realize::TypecheckResult checked = realize::typecheck(*parsed.contract);
  if (!checked.ok())
    throw std::runtime_error("fixture typecheck failed:\n" +
                             realize::render_diagnostics(checked.diagnostics));
  return *checked.typed;
}

inline realize::TypedContract load_fixture(const std::string& name) {
  return parse_and_check(read_file(fixture_path(name)));
}

inline realize::oracle::FiniteContract with_int_ranges(
    const realize::TypedContract& typed, std::int64_t lo, std::int64_t hi) {
  realize::oracle::FiniteContract fc;
  fc.typed = typed;
  auto add = [&](const std::vector<realize::VarDecl>& decls) {
    for (const auto& d : decls) {
      realize::oracle::Domain dom;
      if (d.sort == realize::Sort::Bool) {
        dom.kind = realize::oracle::Domain::Kind::BoolDomain;
      } else {
        dom.kind = realize::oracle::Domain::Kind::IntRange;
        dom.lo = lo;
        dom.hi = hi;
      }
      fc.ranges[d.name] = dom;
    }
  };
  add(typed.contract.inputs);
  add(typed.contract.states);
  return fc;
}

}  // namespace testsupport
