#pragma once

#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "realize/oracle.hpp"
#include "realize/typecheck.hpp"

namespace testsupport {

// Random well-typed contracts over small Bool/Int domains. When `boxed`
// is set, every int variable is confined to its range by extra
// conjuncts (inputs via the assumptions, initial states via G_I, post
// states via G_T), so the SMT engine and the finite-domain oracle reason
// about the same system.
struct GeneratorConfig {
  int max_vars = 3;
  std::int64_t range_lo = -2;
  std::int64_t range_hi = 2;
  int max_exprs_per_section = 2;
  int max_depth = 3;
  bool boxed = true;
  bool allow_real = false;  // only for grammar-level tests; oracle rejects reals
};

struct RandomContract {
  realize::TypedContract typed;
  std::map<std::string, realize::oracle::Domain> ranges;

  realize::oracle::FiniteContract finite() const {
    return realize::oracle::FiniteContract{typed, ranges};
  }
};

class ContractGenerator {
 public:
  ContractGenerator(std::mt19937& rng, GeneratorConfig cfg = {}) : rng_(rng), cfg_(cfg) {}

  RandomContract generate(const std::string& name) {
    vars_.clear();
    realize::Contract c;
    c.name = name;

    int n_vars = pick(1, cfg_.max_vars);
    std::map<std::string, realize::oracle::Domain> ranges;
    for (int i = 0; i < n_vars; ++i) {
      Var v;
      v.name = "v" + std::to_string(i);
      int sort_roll = pick(0, cfg_.allow_real ? 5 : 3);
      v.sort = sort_roll == 0 ? realize::Sort::Bool
               : sort_roll <= 3 ? realize::Sort::Int
                                : realize::Sort::Real;
      v.is_input = pick(0, 1) == 1;

      realize::oracle::Domain dom;
      if (v.sort == realize::Sort::Bool) {
        dom.kind = realize::oracle::Domain::Kind::BoolDomain;
      } else {
        dom.kind = realize::oracle::Domain::Kind::IntRange;
        dom.lo = pick64(cfg_.range_lo, cfg_.range_hi);
        dom.hi = pick64(dom.lo, cfg_.range_hi);
      }
      v.lo = dom.lo;
      v.hi = dom.hi;
      vars_.push_back(v);
      ranges[v.name] = dom;

      realize::VarDecl decl{v.name, v.sort, {}};
      if (v.is_input) c.inputs.push_back(decl);
      else c.states.push_back(decl);
    }

    c.assumptions = gen_section(Section::Assumptions);
    c.initial_guarantees = gen_section(Section::Initial);
    c.transitional_guarantees = gen_section(Section::Transitions);
    if (cfg_.boxed) add_boxing(c);

    realize::TypecheckResult checked = realize::typecheck(c);
    if (!checked.ok())
      throw std::logic_error("generator produced an ill-typed contract:\n" +
                             realize::render_diagnostics(checked.diagnostics));
    return RandomContract{*checked.typed, std::move(ranges)};
  }

 private:
  enum class Section { Assumptions, Initial, Transitions };

  struct Var {
    std::string name;
    realize::Sort sort;
    bool is_input = false;
    std::int64_t lo = 0, hi = 0;
  };

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::int64_t pick64(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

  // Variables visible in a section, as (var, primed) choices.
  std::vector<std::pair<const Var*, bool>> visible(Section s, realize::Sort sort) const {
    std::vector<std::pair<const Var*, bool>> out;
    for (const auto& v : vars_) {
      if (v.sort != sort) continue;
      if (v.is_input) {
        if (s != Section::Initial) out.emplace_back(&v, false);
      } else {
        out.emplace_back(&v, false);
        if (s == Section::Transitions) out.emplace_back(&v, true);
      }
    }
    return out;
  }

  realize::ExprPtr int_literal(std::int64_t v) {
    if (v < 0) return realize::mk::arith(realize::ArithOp::Neg, {realize::mk::int_lit(-v)});
    return realize::mk::int_lit(v);
  }

  realize::ExprPtr gen_int(Section s, int depth) {
    auto candidates = visible(s, realize::Sort::Int);
    int roll = pick(0, depth <= 0 || candidates.empty() ? 1 : 5);
    if (!candidates.empty() && roll >= 2 && roll <= 3) {
      auto [v, primed] = candidates[pick(0, static_cast<int>(candidates.size()) - 1)];
      return realize::mk::var(v->name, primed);
    }
    if (roll <= 1 || candidates.empty()) return int_literal(pick64(cfg_.range_lo, cfg_.range_hi));
    if (roll == 4) {
      realize::ArithOp op = pick(0, 1) == 0 ? realize::ArithOp::Add : realize::ArithOp::Sub;
      return realize::mk::arith(op, {gen_int(s, depth - 1), gen_int(s, depth - 1)});
    }
    // linear multiplication: literal times term
    return realize::mk::arith(realize::ArithOp::Mul,
                              {int_literal(pick64(-2, 2)), gen_int(s, depth - 1)});
  }

  realize::ExprPtr gen_bool(Section s, int depth) {
    auto bool_vars = visible(s, realize::Sort::Bool);
    int roll = pick(0, depth <= 0 ? 2 : 7);
    switch (roll) {
      case 0:
        if (!bool_vars.empty()) {
          auto [v, primed] = bool_vars[pick(0, static_cast<int>(bool_vars.size()) - 1)];
          return realize::mk::var(v->name, primed);
        }
        [[fallthrough]];
      case 1:
      case 2: {
        // comparison over int terms, or a literal when no ints exist
        if (visible(s, realize::Sort::Int).empty() && roll != 2)
          return realize::mk::bool_lit(pick(0, 1) == 1);
        realize::CmpOp op = static_cast<realize::CmpOp>(pick(0, 5));
        return realize::mk::cmp(op, gen_int(s, depth - 1), gen_int(s, depth - 1));
      }
      case 3: return realize::mk::not_(gen_bool(s, depth - 1));
      case 4:
        return realize::mk::and_({gen_bool(s, depth - 1), gen_bool(s, depth - 1)});
      case 5:
        return realize::mk::or_({gen_bool(s, depth - 1), gen_bool(s, depth - 1)});
      case 6:
        return realize::mk::implies(gen_bool(s, depth - 1), gen_bool(s, depth - 1));
      default:
        return realize::mk::ite(gen_bool(s, depth - 1), gen_bool(s, depth - 1),
                                gen_bool(s, depth - 1));
    }
  }

  std::vector<realize::ExprPtr> gen_section(Section s) {
    std::vector<realize::ExprPtr> out;
    int count = pick(0, cfg_.max_exprs_per_section);
    for (int i = 0; i < count; ++i) out.push_back(gen_bool(s, cfg_.max_depth));
    return out;
  }

  void add_boxing(realize::Contract& c) {
    using realize::CmpOp;
    namespace mk = realize::mk;
    for (const auto& v : vars_) {
      if (v.sort != realize::Sort::Int) continue;
      if (v.is_input) {
        c.assumptions.push_back(mk::cmp(CmpOp::Ge, mk::var(v.name), int_literal(v.lo)));
        c.assumptions.push_back(mk::cmp(CmpOp::Le, mk::var(v.name), int_literal(v.hi)));
      } else {
        c.initial_guarantees.push_back(mk::cmp(CmpOp::Ge, mk::var(v.name), int_literal(v.lo)));
        c.initial_guarantees.push_back(mk::cmp(CmpOp::Le, mk::var(v.name), int_literal(v.hi)));
        c.transitional_guarantees.push_back(
            mk::cmp(CmpOp::Ge, mk::var(v.name, true), int_literal(v.lo)));
        c.transitional_guarantees.push_back(
            mk::cmp(CmpOp::Le, mk::var(v.name, true), int_literal(v.hi)));
      }
    }
  }

  std::mt19937& rng_;
  GeneratorConfig cfg_;
  std::vector<Var> vars_;
};

}  // namespace testsupport
