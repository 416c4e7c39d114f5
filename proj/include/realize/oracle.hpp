#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "realize/contract.hpp"
#include "realize/eval.hpp"

namespace realize::oracle {

// Finite range of one variable. Bool variables take {false, true}.
struct Domain {
  enum class Kind { BoolDomain, IntRange };
  Kind kind = Kind::BoolDomain;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

struct DomainTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A contract together with finite ranges for every variable: the
// explicit-state universe the oracle enumerates. Real-sorted variables
// are rejected.
struct FiniteContract {
  TypedContract typed;
  std::map<std::string, Domain> ranges;

  static constexpr std::int64_t kMaxSpace = 1000000;
};

// Validates ranges against the declarations and the space-size guard.
// Throws OracleError / DomainTooLarge.
void validate(const FiniteContract& fc);

// An explicit transition system over the same variable universe.
struct TransitionSystem {
  std::function<bool(const Valuation&)> initial;
  std::function<bool(const Valuation&, const Valuation&, const Valuation&)> transition;
};

// All states enumerated in canonical order: variables sorted by name,
// values ascending, first variable most significant.
std::vector<Valuation> enumerate_states(const FiniteContract& fc);
std::vector<Valuation> enumerate_inputs(const FiniteContract& fc);

// Greatest fixpoint of viability: start from all states and repeatedly
// drop states that deadlock on some assumption-satisfying input when
// successors are restricted to the surviving set.
std::vector<Valuation> viable_set(const FiniteContract& fc);

// Every intermediate set of the fixpoint iteration, V_0 .. V*, one entry
// per sweep that changed something plus the initial full set.
std::vector<std::vector<Valuation>> viable_trajectory(const FiniteContract& fc);

// The defining property executed directly: some state satisfies the
// initial guarantees and is viable.
bool check_realizable_oracle(const FiniteContract& fc);

// n-step under-approximation of viability (chained through successors).
bool finitely_viable(const FiniteContract& fc, std::size_t n, const Valuation& s);

// One-step extension after n steps: every valid n-step path from s ends
// in a state that can take one more step under any valid input.
bool extendable(const FiniteContract& fc, std::size_t n, const Valuation& s);

// Least fixpoint: initial states closed under assumption-satisfying
// transitions. Initial states are members even without predecessors.
std::vector<Valuation> reachable_set(const FiniteContract& fc, const TransitionSystem& ts);

struct RealizationCheck {
  bool initial_implies_gi = false;     // 1. I(s) => G_I(s)
  bool transitions_satisfy_gt = false; // 2. reachable & A & T => G_T
  bool initial_nonempty = false;       // 3. exists s. I(s)
  bool no_reachable_deadlock = false;  // 4. reachable & A => successor exists
  bool all() const {
    return initial_implies_gi && transitions_satisfy_gt && initial_nonempty &&
           no_reachable_deadlock;
  }
};

RealizationCheck check_realization(const FiniteContract& fc, const TransitionSystem& ts);

// The equivalence proof's witness: I(s) = (s = s0) for the least viable
// G_I-state s0, T(s, i, s') = G_T(s, i, s') and s' viable. Empty when no
// such s0 exists.
std::optional<TransitionSystem> witness_transition(const FiniteContract& fc);

// `.ranges` sidecar: one `var lo hi` or `var bool` per line; `--range`
// CLI syntax `var=lo..hi` or `var=bool`.
std::map<std::string, Domain> parse_ranges_file(const std::string& text);
std::pair<std::string, Domain> parse_range_arg(const std::string& arg);

}  // namespace realize::oracle
