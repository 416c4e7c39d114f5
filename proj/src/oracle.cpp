#include "realize/oracle.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>

namespace realize::oracle {

namespace {

struct VarAxis {
  std::string name;
  std::vector<Value> values;  // ascending
};

std::vector<Value> domain_values(const Domain& d) {
  if (d.kind == Domain::Kind::BoolDomain) return {Value(false), Value(true)};
  std::vector<Value> out;
  for (std::int64_t v = d.lo; v <= d.hi; ++v) out.push_back(Value(v));
  return out;
}

// Explicit universe: axes sorted by variable name, values ascending, the
// first axis most significant.
struct Space {
  std::vector<VarAxis> state_axes;
  std::vector<VarAxis> input_axes;
  std::vector<Valuation> states;
  std::vector<Valuation> inputs;
  std::map<Valuation, std::size_t> state_index;
};

std::vector<VarAxis> build_axes(const std::vector<VarDecl>& decls,
                                const std::map<std::string, Domain>& ranges) {
  std::vector<VarAxis> axes;
  for (const auto& d : decls) axes.push_back(VarAxis{d.name, domain_values(ranges.at(d.name))});
  std::sort(axes.begin(), axes.end(),
            [](const VarAxis& a, const VarAxis& b) { return a.name < b.name; });
  return axes;
}

std::vector<Valuation> enumerate(const std::vector<VarAxis>& axes) {
  std::vector<Valuation> out;
  out.push_back(Valuation{});
  for (const auto& axis : axes) {
    std::vector<Valuation> next;
    next.reserve(out.size() * axis.values.size());
    for (const auto& partial : out) {
      for (const auto& v : axis.values) {
        Valuation ext = partial;
        ext.set(axis.name, v);
        next.push_back(std::move(ext));
      }
    }
    out = std::move(next);
  }
  return out;
}

Space build_space(const FiniteContract& fc) {
  validate(fc);
  Space sp;
  sp.state_axes = build_axes(fc.typed.contract.states, fc.ranges);
  sp.input_axes = build_axes(fc.typed.contract.inputs, fc.ranges);
  sp.states = enumerate(sp.state_axes);
  sp.inputs = enumerate(sp.input_axes);
  for (std::size_t i = 0; i < sp.states.size(); ++i) sp.state_index.emplace(sp.states[i], i);
  return sp;
}

std::size_t state_index_of(const Space& sp, const Valuation& s) {
  auto it = sp.state_index.find(s);
  if (it == sp.state_index.end())
    throw OracleError("state " + s.to_string() + " is outside the declared ranges");
  return it->second;
}

// One fixpoint sweep: drop every state that deadlocks on some
// assumption-satisfying input when successors are confined to `alive`.
bool sweep(const FiniteContract& fc, const Space& sp, std::vector<char>& alive) {
  const TypedContract& c = fc.typed;
  bool changed = false;
  std::vector<char> next = alive;
  for (std::size_t si = 0; si < sp.states.size(); ++si) {
    if (!alive[si]) continue;
    for (const auto& inp : sp.inputs) {
      if (!holds_A(c, sp.states[si], inp)) continue;
      bool has_successor = false;
      for (std::size_t ti = 0; ti < sp.states.size() && !has_successor; ++ti)
        has_successor = alive[ti] && holds_GT(c, sp.states[si], inp, sp.states[ti]);
      if (!has_successor) {
        next[si] = 0;
        changed = true;
        break;
      }
    }
  }
  alive = std::move(next);
  return changed;
}

std::vector<char> viable_mask(const FiniteContract& fc, const Space& sp) {
  std::vector<char> alive(sp.states.size(), 1);
  while (sweep(fc, sp, alive)) {
  }
  return alive;
}

std::vector<Valuation> collect(const Space& sp, const std::vector<char>& mask) {
  std::vector<Valuation> out;
  for (std::size_t i = 0; i < sp.states.size(); ++i)
    if (mask[i]) out.push_back(sp.states[i]);
  return out;
}

}  // namespace

void validate(const FiniteContract& fc) {
  const Contract& c = fc.typed.contract;
  auto check_decls = [&](const std::vector<VarDecl>& decls) {
    for (const auto& d : decls) {
      if (d.sort == Sort::Real)
        throw OracleError("variable '" + d.name +
                          "' is real-sorted; the oracle handles finite domains only");
      auto it = fc.ranges.find(d.name);
      if (it == fc.ranges.end())
        throw OracleError("no range declared for variable '" + d.name + "'");
      const Domain& dom = it->second;
      if (d.sort == Sort::Bool && dom.kind != Domain::Kind::BoolDomain)
        throw OracleError("variable '" + d.name + "' is bool but has an integer range");
      if (d.sort == Sort::Int && dom.kind != Domain::Kind::IntRange)
        throw OracleError("variable '" + d.name + "' is int but has a bool range");
      if (dom.kind == Domain::Kind::IntRange && dom.lo > dom.hi)
        throw OracleError("empty range for variable '" + d.name + "'");
    }
  };
  check_decls(c.inputs);
  check_decls(c.states);

  for (const auto& [name, dom] : fc.ranges)
    if (!c.find_input(name) && !c.find_state(name))
      throw OracleError("range declared for unknown variable '" + name + "'");

  auto space_size = [&](const std::vector<VarDecl>& decls) {
    __int128 size = 1;
    for (const auto& d : decls) {
      const Domain& dom = fc.ranges.at(d.name);
      __int128 card = dom.kind == Domain::Kind::BoolDomain
                          ? 2
                          : static_cast<__int128>(dom.hi) - dom.lo + 1;
      size *= card;
      if (size > FiniteContract::kMaxSpace)
        throw DomainTooLarge("variable space exceeds " +
                             std::to_string(FiniteContract::kMaxSpace) + " combinations");
    }
    return size;
  };
  space_size(c.inputs);
  space_size(c.states);
}

std::vector<Valuation> enumerate_states(const FiniteContract& fc) {
  return build_space(fc).states;
}

std::vector<Valuation> enumerate_inputs(const FiniteContract& fc) {
  return build_space(fc).inputs;
}

std::vector<std::vector<Valuation>> viable_trajectory(const FiniteContract& fc) {
  Space sp = build_space(fc);
  std::vector<char> alive(sp.states.size(), 1);
  std::vector<std::vector<Valuation>> snapshots;
  snapshots.push_back(collect(sp, alive));
  while (sweep(fc, sp, alive)) snapshots.push_back(collect(sp, alive));
  return snapshots;
}

std::vector<Valuation> viable_set(const FiniteContract& fc) {
  Space sp = build_space(fc);
  return collect(sp, viable_mask(fc, sp));
}

bool check_realizable_oracle(const FiniteContract& fc) {
  Space sp = build_space(fc);
  std::vector<char> alive = viable_mask(fc, sp);
  for (std::size_t i = 0; i < sp.states.size(); ++i)
    if (alive[i] && holds_GI(fc.typed, sp.states[i])) return true;
  return false;
}

bool finitely_viable(const FiniteContract& fc, std::size_t n, const Valuation& s) {
  Space sp = build_space(fc);
  std::size_t root = state_index_of(sp, s);
  const TypedContract& c = fc.typed;

  // memo[n][state]: -1 unknown, 0 false, 1 true
  std::vector<std::vector<signed char>> memo(
      n + 1, std::vector<signed char>(sp.states.size(), -1));
  std::function<bool(std::size_t, std::size_t)> fv = [&](std::size_t steps,
                                                         std::size_t si) -> bool {
    if (steps == 0) return true;
    signed char& slot = memo[steps][si];
    if (slot >= 0) return slot == 1;
    bool ok = true;
    for (const auto& inp : sp.inputs) {
      if (!holds_A(c, sp.states[si], inp)) continue;
      bool found = false;
      for (std::size_t ti = 0; ti < sp.states.size() && !found; ++ti)
        found = holds_GT(c, sp.states[si], inp, sp.states[ti]) && fv(steps - 1, ti);
      if (!found) {
        ok = false;
        break;
      }
    }
    slot = ok ? 1 : 0;
    return ok;
  };
  return fv(n, root);
}

bool extendable(const FiniteContract& fc, std::size_t n, const Valuation& s) {
  Space sp = build_space(fc);
  std::size_t root = state_index_of(sp, s);
  const TypedContract& c = fc.typed;

  std::vector<std::vector<signed char>> memo(
      n + 1, std::vector<signed char>(sp.states.size(), -1));
  std::function<bool(std::size_t, std::size_t)> ext = [&](std::size_t steps,
                                                          std::size_t si) -> bool {
    signed char& slot = memo[steps][si];
    if (slot >= 0) return slot == 1;
    bool ok = true;
    if (steps == 0) {
      // every valid input has some successor
      for (const auto& inp : sp.inputs) {
        if (!holds_A(c, sp.states[si], inp)) continue;
        bool found = false;
        for (std::size_t ti = 0; ti < sp.states.size() && !found; ++ti)
          found = holds_GT(c, sp.states[si], inp, sp.states[ti]);
        if (!found) {
          ok = false;
          break;
        }
      }
    } else {
      // every valid one-step extension stays extendable
      for (const auto& inp : sp.inputs) {
        if (!holds_A(c, sp.states[si], inp)) continue;
        for (std::size_t ti = 0; ti < sp.states.size() && ok; ++ti)
          if (holds_GT(c, sp.states[si], inp, sp.states[ti])) ok = ext(steps - 1, ti);
        if (!ok) break;
      }
    }
    slot = ok ? 1 : 0;
    return ok;
  };
  return ext(n, root);
}

std::vector<Valuation> reachable_set(const FiniteContract& fc, const TransitionSystem& ts) {
  Space sp = build_space(fc);
  const TypedContract& c = fc.typed;

  std::vector<char> reached(sp.states.size(), 0);
  std::vector<std::size_t> worklist;
  for (std::size_t i = 0; i < sp.states.size(); ++i) {
    if (ts.initial(sp.states[i])) {
      reached[i] = 1;
      worklist.push_back(i);
    }
  }
  while (!worklist.empty()) {
    std::size_t si = worklist.back();
    worklist.pop_back();
    for (const auto& inp : sp.inputs) {
      if (!holds_A(c, sp.states[si], inp)) continue;
      for (std::size_t ti = 0; ti < sp.states.size(); ++ti) {
        if (reached[ti] || !ts.transition(sp.states[si], inp, sp.states[ti])) continue;
        reached[ti] = 1;
        worklist.push_back(ti);
      }
    }
  }
  return collect(sp, reached);
}

RealizationCheck check_realization(const FiniteContract& fc, const TransitionSystem& ts) {
  Space sp = build_space(fc);
  const TypedContract& c = fc.typed;
  RealizationCheck r;

  r.initial_implies_gi = true;
  r.initial_nonempty = false;
  for (const auto& s : sp.states) {
    if (!ts.initial(s)) continue;
    r.initial_nonempty = true;
    if (!holds_GI(c, s)) r.initial_implies_gi = false;
  }

  std::vector<Valuation> reachable = reachable_set(fc, ts);
  r.transitions_satisfy_gt = true;
  r.no_reachable_deadlock = true;
  for (const auto& s : reachable) {
    for (const auto& inp : sp.inputs) {
      if (!holds_A(c, s, inp)) continue;
      bool has_successor = false;
      for (const auto& t : sp.states) {
        if (!ts.transition(s, inp, t)) continue;
        has_successor = true;
        if (!holds_GT(c, s, inp, t)) r.transitions_satisfy_gt = false;
      }
      if (!has_successor) r.no_reachable_deadlock = false;
    }
  }
  return r;
}

std::optional<TransitionSystem> witness_transition(const FiniteContract& fc) {
  Space sp = build_space(fc);
  std::vector<char> alive = viable_mask(fc, sp);

  std::optional<Valuation> s0;
  for (std::size_t i = 0; i < sp.states.size(); ++i) {
    if (alive[i] && holds_GI(fc.typed, sp.states[i])) {
      s0 = sp.states[i];
      break;
    }
  }
  if (!s0) return std::nullopt;

  auto viable_states = std::make_shared<std::set<Valuation>>();
  for (std::size_t i = 0; i < sp.states.size(); ++i)
    if (alive[i]) viable_states->insert(sp.states[i]);

  TypedContract typed = fc.typed;
  TransitionSystem ts;
  ts.initial = [start = *s0](const Valuation& s) { return s == start; };
  ts.transition = [typed, viable_states](const Valuation& s, const Valuation& i,
                                         const Valuation& t) {
    return viable_states->count(t) != 0 && holds_GT(typed, s, i, t);
  };
  return ts;
}

std::map<std::string, Domain> parse_ranges_file(const std::string& text) {
  std::map<std::string, Domain> out;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    std::string a;
    if (!(ls >> a)) throw OracleError("ranges line " + std::to_string(line_no) + ": expected 'bool' or bounds");
    Domain d;
    if (a == "bool") {
      d.kind = Domain::Kind::BoolDomain;
    } else {
      std::string b;
      if (!(ls >> b))
        throw OracleError("ranges line " + std::to_string(line_no) + ": missing upper bound");
      try {
        d.kind = Domain::Kind::IntRange;
        d.lo = std::stoll(a);
        d.hi = std::stoll(b);
      } catch (const std::exception&) {
        throw OracleError("ranges line " + std::to_string(line_no) + ": malformed bounds");
      }
    }
    out[name] = d;
  }
  return out;
}

std::pair<std::string, Domain> parse_range_arg(const std::string& arg) {
  auto eq = arg.find('=');
  if (eq == std::string::npos) throw OracleError("range must look like var=lo..hi or var=bool");
  std::string name = arg.substr(0, eq);
  std::string rhs = arg.substr(eq + 1);
  Domain d;
  if (rhs == "bool") {
    d.kind = Domain::Kind::BoolDomain;
    return {name, d};
  }
  auto dots = rhs.find("..");
  if (dots == std::string::npos) throw OracleError("range must look like var=lo..hi or var=bool");
  try {
    d.kind = Domain::Kind::IntRange;
    d.lo = std::stoll(rhs.substr(0, dots));
    d.hi = std::stoll(rhs.substr(dots + 2));
  } catch (const std::exception&) {
    throw OracleError("malformed range bounds in '" + arg + "'");
  }
  return {name, d};
}

}  // namespace realize::oracle
