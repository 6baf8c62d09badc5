// bisim.hpp - bounded weak-bisimulation game between typed nodes, with
// distinguishing-witness extraction, replay and JSON rendering.
#pragma once

#include <string>
#include <vector>

#include "hopi/lts.hpp"

namespace hopi {

enum class VerdictKind { EquivalentToDepth, Distinguished, MismatchedEnvironments };

// One attacker move of a distinguishing strategy: at the recorded pair the
// given side fires `label`; at the final step the other side has no weak
// answer within budget, earlier steps continue into a pair that stays
// distinguished no matter how the defender answers.
struct WitnessStep {
  TypedNode left, right;
  int side = 0;  // 0: left moves, 1: right moves
  Label label;
};

struct BisimVerdict {
  VerdictKind kind = VerdictKind::EquivalentToDepth;
  int depth = 0;        // Equivalent: depth checked; Distinguished: witness length
  bool truncated = false;  // a budget cut the search, equivalence unconfirmed
  std::vector<WitnessStep> witness;
  std::string detail;   // MismatchedEnvironments: what differs
};

// Play the game to `depth` attacker moves; tau answers and weak matching
// search at most budget.tauSteps internal steps per move.  Symmetric in its
// first two arguments.
BisimVerdict bisimCheck(const TypedNode& n, const TypedNode& m, int depth,
                        const WeakBudget& budget = {});

// Type-check two plain processes under a channel environment and compare
// the trigger-free nodes.
BisimVerdict bisimClosedHOpi(const Env& delta, const TermPtr& p, const TermPtr& q,
                             int depth, const WeakBudget& budget = {});

// Mechanical replay of a Distinguished verdict against the roots: labels
// enabled on the recorded side, successor pairs reachable, final label
// unanswerable within budget.
bool validateWitness(const TypedNode& n, const TypedNode& m, const BisimVerdict& v,
                     const WeakBudget& budget = {});

// Human-readable replay of a Distinguished verdict.
std::string explainWitness(const BisimVerdict& v, const WeakBudget& budget = {});

// {verdict, depth, truncated, witness:[{label, side, pair}]}
std::string verdictToJson(const BisimVerdict& v);

}  // namespace hopi
