// merge.hpp - the partial merge operator eliminating resources by
// substitution, its reference graph and the definedness criterion.
#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hopi/syntax.hpp"

namespace hopi {

// Directed graph over the trigger identifiers holding a resource: an edge
// k -> l is present exactly when a call of l occurs in the value stored at k.
struct RefGraph {
  std::set<std::string> vertices;
  std::set<std::pair<std::string, std::string>> edges;
};
RefGraph refGraph(const TermPtr& c);

bool isAcyclic(const RefGraph& g);

// A cycle as a vertex list (first == last); empty when acyclic.
std::vector<std::string> findCycle(const RefGraph& g);

// One rewrite: normalize, then eliminate the least resource k<=v free of a
// self-reference, substituting v for k's calls everywhere else.  Done when
// no resource remains; Stuck when resources remain but each one stores a
// call of itself.
enum class MergeStepKind { Done, Next, Stuck };
struct MergeStepResult {
  MergeStepKind kind = MergeStepKind::Done;
  TermPtr next;            // Next: the rewritten configuration
  std::string eliminated;  // Next: which trigger was resolved
};
MergeStepResult mergeStep(const TermPtr& c);

// Iterate mergeStep to a resource-free residue.  Undefined exactly when the
// reference graph is cyclic; the witness cycle is reported.
struct MergeResult {
  bool defined = false;
  TermPtr residue;                 // defined: resource-free, normalized
  std::vector<std::string> cycle;  // undefined: k0 -> ... -> k0
};
MergeResult merge(const TermPtr& c);

// Residues reachable by every elimination order (each candidate resource
// tried at each step), deduplicated by canonical print.  Confluence holds
// when the result has exactly one element.
std::vector<TermPtr> mergeAllOrders(const TermPtr& c, size_t maxResidues = 64);

}  // namespace hopi
