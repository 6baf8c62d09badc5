// lts.hpp - labelled transitions over typed configurations: actions,
// typed nodes, single-step derivation, weak closure, graph construction.
//
// Visible actions carry first-order payloads only; higher-order payloads
// move as fresh trigger identifiers (d!(k) / d?(k)) and fresh or extruded
// channels appear as binders ((b)d?b / (b)d!b).  tau steps are exactly the
// reduction steps.
#pragma once

#include <string>
#include <vector>

#include "hopi/syntax.hpp"

namespace hopi {

enum class LabelKind { Tau, In, Out, BoundIn, BoundOut, TrigIn, TrigOut };

struct Label {
  LabelKind kind = LabelKind::Tau;
  std::string subject;  // channel name or trigger identifier
  TermPtr payload;      // In/Out: the unit value or a free name
  std::string bound;    // BoundIn/BoundOut: channel; TrigIn/TrigOut: trigger
};

std::string printLabel(const Label& l);
Label parseLabel(const std::string& text);
bool labelEq(const Label& a, const Label& b);

// Swap input for output; undefined (throws) on tau.
Label complement(const Label& l);

// A configuration typed by its environment, stored canonically; `key` is a
// stable identity string for memoization.
struct TypedNode {
  Env env;  // channels = known names, triggers = interrogatable resources
  TermPtr config;
  std::string key;
};
TypedNode makeNode(const Env& env, const TermPtr& config);

struct Transition {
  Label label;
  TypedNode target;
};

// All single-step transitions: tau from the reduction relation, plus the
// visible actions of every unguarded prefix, resource and trigger call
// (replications contribute through a one-copy unfolding).  Deterministic:
// fresh channels are b0,b1,... and fresh triggers k0,k1,..., the first not
// claimed by the environment.
std::vector<Transition> deriveTransitions(const TypedNode& node);

std::string freshLabelChannel(const Env& env);
std::string freshLabelTrigger(const Env& env);

struct WeakBudget {
  int tauSteps = 6;     // max tau steps chained on either side of the action
  int maxStates = 400;  // cap on distinct configurations per closure
};

// Weak transition: tau* (for tau labels) or tau* . label . tau*.
struct WeakResult {
  std::vector<TypedNode> nodes;
  bool truncated = false;
};
WeakResult weakAfter(const TypedNode& node, const Label& label, const WeakBudget& b);

// Reflexive-transitive tau closure.
WeakResult tauClosure(const TypedNode& node, const WeakBudget& b);

struct LtsEdge {
  int src, dst;
  Label label;
};

struct LtsGraph {
  std::vector<TypedNode> nodes;
  std::vector<LtsEdge> edges;
  int root = 0;
  bool truncated = false;
};
LtsGraph buildLts(const TypedNode& root, int maxDepth, int maxNodes);

// JSON rendering of the graph (schema: nodes/edges/root/truncated).
std::string ltsToJson(const LtsGraph& g);

}  // namespace hopi
