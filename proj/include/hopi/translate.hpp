// translate.hpp - translation of augmented configurations into the plain
// calculus (trigger identifiers reused as channel names), testing-context
// generation for labels, and the label probe built from both.
#pragma once

#include <stdexcept>
#include <string>

#include "hopi/lts.hpp"
#include "hopi/syntax.hpp"

namespace hopi {

struct FreshnessViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Trigger bindings k : ^T become channel bindings k : ch<T>; channel
// bindings pass through.  Throws FreshnessViolation if an identifier is
// claimed by both namespaces.
Env translateEnv(const Env& env);

// Homomorphic translation: a call of k becomes \x:T -> k!<x>.0, a resource
// k<=v becomes !k?(y:T).((v translated)(y)); everything else is untouched.
// `theta` supplies the payload type of each trigger.
TermPtr translateConfig(const Env& theta, const TermPtr& c);

// The success signal for a residual environment of at most one name:
// succ!<()>.0 or succ!<a>.0.
TermPtr succProcess(const Env& deltaPrime, const std::string& succ);

// nu c (c!<()>.0 | c?(x:unit).p | c?(x:unit).q): reduces in one step to
// exactly p or q (up to structural congruence).
TermPtr internalChoice(const TermPtr& p, const TermPtr& q);

// Right-nested match cascade deciding x against every channel in delta:
// empty delta yields thenP, each entry a adds "if x = a then elseP else ...".
TermPtr notInTest(const std::string& x, const Env& delta, const TermPtr& thenP,
                  const TermPtr& elseP);

// The plain-calculus process that succeeds on `succ` exactly when a partner
// can perform the visible label `a` under (delta; theta).  `dead` is the
// reserved second fresh channel; it never occurs as an output subject.
TermPtr testingContext(const Env& delta, const Env& theta, const Label& a,
                       const std::string& succ, const std::string& dead);

struct ProbeBudgets {
  int reduceSteps = 12;    // exploration depth of the composed system
  int reduceStates = 4000; // state cap for that exploration
  WeakBudget weak;         // budget for the reference weak transition
};

// Run testingContext(a) in parallel with the translated configuration and
// look for the success shape nu D'.(succ!<w>.0 | P); compare the residual P
// against housekeeping-reducts of translated weak a-derivatives.
struct ProbeResult {
  bool reached = false;            // a success state was found
  std::string residue;             // P of the first success state
  bool factorizationFound = false; // P matched some translated derivative
  bool truncated = false;          // a budget cut the exploration
  bool deadBarb = false;           // the dead channel was ever observable
  std::string succChannel, deadChannel;
};
ProbeResult probeLabel(const Env& delta, const Env& theta, const TermPtr& d,
                       const Label& a, const ProbeBudgets& budgets = {});

// {reached, residue, factorizationFound, truncated}
std::string probeToJson(const ProbeResult& r);

}  // namespace hopi
