// syntax.hpp - term language for the higher-order pi-calculus workbench:
// value types, the unified term/configuration tree, typing environments,
// and purely syntactic predicates over them.
#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace hopi {

// ---------------------------------------------------------------- types ---

enum class TypeKind { Unit, Chan, Abs, TypeVar, Rec };

struct TypeExpr;
using TypePtr = std::shared_ptr<const TypeExpr>;

struct TypeExpr {
  TypeKind kind;
  std::string name;  // TypeVar name / Rec binder
  TypePtr inner;     // Chan payload / Abs argument / Rec body
};

TypePtr tyUnit();
TypePtr tyChan(TypePtr payload);
TypePtr tyAbs(TypePtr arg);
TypePtr tyVar(const std::string& name);
TypePtr tyRec(const std::string& binder, TypePtr body);

bool typeEq(const TypePtr& a, const TypePtr& b);  // syntactic, up to nothing
std::set<std::string> freeTypeVars(const TypePtr& t);

// ---------------------------------------------------------------- terms ---

// One tree covers values, plain processes and augmented configurations.
// Well-formedness (value positions, one resource per trigger, namespace
// disjointness) is checked by validateTerm, not by the grammar.
enum class TermKind {
  UnitVal,
  Name,
  Var,
  Lambda,
  TriggerCall,
  App,
  Input,
  Output,
  Match,
  New,
  Par,
  Repl,
  Nil,
  Resource,
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind;
  std::string id;  // Name/Var/TriggerCall ident; Lambda/Input param; New binder; Resource trigger
  TypePtr ty;      // Lambda/Input param type; New binder type
  TermPtr t0, t1, t2, t3;
  // children by kind:
  //   Lambda    t0=body
  //   App       t0=fun   t1=arg
  //   Input     t0=subj  t1=body
  //   Output    t0=subj  t1=payload t2=cont
  //   Match     t0=left  t1=right   t2=then  t3=else
  //   New       t0=body
  //   Par       t0=left  t1=right
  //   Repl      t0=body
  //   Resource  t0=value
};

TermPtr mkUnit();
TermPtr mkName(const std::string& a);
TermPtr mkVar(const std::string& x);
TermPtr mkLambda(const std::string& x, TypePtr ty, TermPtr body);
TermPtr mkTriggerCall(const std::string& k);
TermPtr mkApp(TermPtr fun, TermPtr arg);
TermPtr mkInput(TermPtr subj, const std::string& x, TypePtr ty, TermPtr body);
TermPtr mkOutput(TermPtr subj, TermPtr payload, TermPtr cont);
TermPtr mkMatch(TermPtr l, TermPtr r, TermPtr thenB, TermPtr elseB);
TermPtr mkNew(const std::string& a, TypePtr ty, TermPtr body);
TermPtr mkPar(TermPtr l, TermPtr r);
TermPtr mkRepl(TermPtr body);
TermPtr mkNil();
TermPtr mkResource(const std::string& k, TermPtr value);

bool isValueKind(TermKind k);
bool isValue(const TermPtr& t);
bool termEq(const TermPtr& a, const TermPtr& b);  // syntactic equality

// ---------------------------------------------------------- environments ---

// Gamma/Delta/Theta in one record.  Channel bindings map names to channel
// types, trigger bindings map identifiers to the payload type carried by
// the trigger (the U in a resource of type ^U).
struct Env {
  std::map<std::string, TypePtr> channels;
  std::map<std::string, TypePtr> vars;
  std::map<std::string, TypePtr> triggers;
};

bool envEq(const Env& a, const Env& b);

// ------------------------------------------------------- free identifiers ---

std::set<std::string> freeNames(const TermPtr& t);     // channel names; New binds
std::set<std::string> freeVars(const TermPtr& t);      // variables; Lambda/Input bind
std::set<std::string> triggerIdents(const TermPtr& t); // all trigger ids (calls and resources)
bool containsCall(const TermPtr& t, const std::string& k);
bool containsResource(const TermPtr& t, const std::string& k);

// -------------------------------------------------------------- predicates ---

// A configuration is balanced when no trigger has both a call and its
// resource present.
bool isBalanced(const TermPtr& c);

// Load-time validation: value positions hold values, each resource
// identifier occurs at most once, resources only at configuration level,
// and the channel/variable/trigger identifier sets are pairwise disjoint.
// Returns an empty string when fine, otherwise a description.
std::string validateTerm(const TermPtr& c);

// Occurrence classification of a variable in a process term: an occurrence
// is unguarded exactly when it stands in function position of an
// application reachable from the root through New/Par/Repl only.
enum class Guardedness { Absent, Guarded, Unguarded, Mixed };
Guardedness guardedOccurrence(const std::string& x, const TermPtr& p);
const char* guardednessName(Guardedness g);

// ------------------------------------------------------- identifier classes ---

// Lexical namespaces for bare identifiers in the surface syntax: variables
// start with x/y/z, type variables with an uppercase letter, everything
// else is a channel name.  Trigger identifiers are positional (call/res).
enum class IdentClass { Variable, ChannelName, TypeVariable };
IdentClass classifyIdent(const std::string& id);

}  // namespace hopi
