// reduction.hpp - structural congruence, the reduction relation, bounded
// multi-step exploration, housekeeping reduction and barbs.
//
// Structural congruence is the least congruence with respect to evaluation
// contexts E ::= [.] | E|P | nu a:T.(E) generated by: | commutative and
// associative with 0 as unit, scope extrusion of unused restrictions, and
// !P == !P | P.  Reduction is closed under E and structural congruence.
#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hopi/syntax.hpp"

namespace hopi {

// Prenex decomposition of the evaluation-context skeleton: all restrictions
// hoisted to a single binder block (alpha-renamed apart), the body flattened
// into parallel components.  Binder order follows the original term.
struct Prenex {
  std::vector<std::pair<std::string, TypePtr>> binders;
  std::vector<TermPtr> comps;
};
Prenex toPrenex(const TermPtr& c);
TermPtr fromPrenex(const Prenex& p);  // nu binders.(comp | ... | comp), un-normalized

// The parallel soup a term reduces in: its prenex components plus, for each
// replicated component, the components of one fresh-named copy.  Both the
// reduction relation and the labelled semantics enumerate redexes here.
struct SoupEntry {
  TermPtr t;
  size_t owner;  // index of the originating prenex component
  bool isCopy;   // true if the entry belongs to a replication copy
};
struct Soup {
  Prenex px;
  std::vector<SoupEntry> entries;
  std::vector<std::vector<std::pair<std::string, TypePtr>>> copyBinders;  // per comp
  std::string pathOf(size_t e) const;
  std::set<std::string> boundNames() const;
};
Soup buildSoup(const TermPtr& c);

// Rebuild a term after firing a redex: entries listed in `replaced` are
// substituted by the given components (empty vector removes the entry),
// owners of replaced copy entries are materialized next to their
// replication, and binders named in `dropBinders` are removed (extrusion).
TermPtr rebuildSoup(const Soup& s,
                    const std::map<size_t, std::vector<TermPtr>>& replaced,
                    const std::set<std::string>& dropBinders = {});

// Canonical representative of the structural-congruence class, up to
// replication unfolding: parallel components flattened and sorted, nil
// dropped, restrictions pushed to minimal scope and garbage-collected.
TermPtr structNormal(const TermPtr& c);

// structNormal + canonical renaming; equal results mean congruent terms.
TermPtr canonicalTerm(const TermPtr& c, const std::set<std::string>& avoid = {});

// Structural congruence, decided on canonical forms with at most one
// replication unfolding tried on each side.
bool structEquiv(const TermPtr& a, const TermPtr& b);

// One reduction step.  `rule` is comm / beta / cond-tt / cond-ff, `path`
// locates the redex by component index in the prenex decomposition
// ("3", "0+2" for a communication, with "!" marking a replica copy).
struct ReductionStep {
  std::string rule;
  std::string path;
  TermPtr target;
};
std::vector<ReductionStep> reduceStep(const TermPtr& c);

// Breadth-first closure of reduceStep over canonical forms.
struct ReachResult {
  std::vector<TermPtr> states;  // canonical, root first, discovery order
  bool truncated = false;
};
ReachResult reduceMulti(const TermPtr& c, int maxSteps, int maxStates);

// Housekeeping reduction: only beta-redexes of the trigger-body shape
// (\x:T -> k!<x>.0) v  ->  k!<v>.0 at evaluation positions.
std::vector<TermPtr> housekeepingStep(const TermPtr& p);

// All housekeeping reducts (terminating, so the closure is finite).
std::vector<TermPtr> hClosure(const TermPtr& p);

// Channels observable now or after at most maxSteps reductions: subjects of
// unit-valued outputs at evaluation position whose name is unrestricted.
std::set<std::string> barbs(const TermPtr& c, int maxSteps, int maxStates);
std::set<std::string> immediateBarbs(const TermPtr& c);

}  // namespace hopi
