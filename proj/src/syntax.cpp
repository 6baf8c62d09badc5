// syntax.cpp - constructors, equality, free-identifier computation and the
// syntactic predicates declared in syntax.hpp.
#include "hopi/syntax.hpp"

#include <cctype>
#include <functional>
#include <stdexcept>

namespace hopi {

// ---------------------------------------------------------------- types ---

static TypePtr mkType(TypeKind k, std::string name, TypePtr inner) {
  auto t = std::make_shared<TypeExpr>();
  t->kind = k;
  t->name = std::move(name);
  t->inner = std::move(inner);
  return t;
}

TypePtr tyUnit() { return mkType(TypeKind::Unit, "", nullptr); }
TypePtr tyChan(TypePtr payload) { return mkType(TypeKind::Chan, "", std::move(payload)); }
TypePtr tyAbs(TypePtr arg) { return mkType(TypeKind::Abs, "", std::move(arg)); }
TypePtr tyVar(const std::string& name) { return mkType(TypeKind::TypeVar, name, nullptr); }
TypePtr tyRec(const std::string& binder, TypePtr body) {
  return mkType(TypeKind::Rec, binder, std::move(body));
}

bool typeEq(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::Unit: return true;
    case TypeKind::TypeVar: return a->name == b->name;
    case TypeKind::Chan:
    case TypeKind::Abs: return typeEq(a->inner, b->inner);
    case TypeKind::Rec: return a->name == b->name && typeEq(a->inner, b->inner);
  }
  return false;
}

static void freeTypeVarsInto(const TypePtr& t, std::set<std::string>& bound,
                             std::set<std::string>& out) {
  if (!t) return;
  switch (t->kind) {
    case TypeKind::Unit: return;
    case TypeKind::TypeVar:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case TypeKind::Chan:
    case TypeKind::Abs: freeTypeVarsInto(t->inner, bound, out); return;
    case TypeKind::Rec: {
      bool fresh = bound.insert(t->name).second;
      freeTypeVarsInto(t->inner, bound, out);
      if (fresh) bound.erase(t->name);
      return;
    }
  }
}

std::set<std::string> freeTypeVars(const TypePtr& t) {
  std::set<std::string> bound, out;
  freeTypeVarsInto(t, bound, out);
  return out;
}

// ---------------------------------------------------------------- terms ---

static std::shared_ptr<Term> mk(TermKind k) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  return t;
}

TermPtr mkUnit() { return mk(TermKind::UnitVal); }

TermPtr mkName(const std::string& a) {
  auto t = mk(TermKind::Name);
  t->id = a;
  return t;
}

TermPtr mkVar(const std::string& x) {
  auto t = mk(TermKind::Var);
  t->id = x;
  return t;
}

TermPtr mkLambda(const std::string& x, TypePtr ty, TermPtr body) {
  auto t = mk(TermKind::Lambda);
  t->id = x;
  t->ty = std::move(ty);
  t->t0 = std::move(body);
  return t;
}

TermPtr mkTriggerCall(const std::string& k) {
  auto t = mk(TermKind::TriggerCall);
  t->id = k;
  return t;
}

TermPtr mkApp(TermPtr fun, TermPtr arg) {
  auto t = mk(TermKind::App);
  t->t0 = std::move(fun);
  t->t1 = std::move(arg);
  return t;
}

TermPtr mkInput(TermPtr subj, const std::string& x, TypePtr ty, TermPtr body) {
  auto t = mk(TermKind::Input);
  t->t0 = std::move(subj);
  t->id = x;
  t->ty = std::move(ty);
  t->t1 = std::move(body);
  return t;
}

TermPtr mkOutput(TermPtr subj, TermPtr payload, TermPtr cont) {
  auto t = mk(TermKind::Output);
  t->t0 = std::move(subj);
  t->t1 = std::move(payload);
  t->t2 = std::move(cont);
  return t;
}

TermPtr mkMatch(TermPtr l, TermPtr r, TermPtr thenB, TermPtr elseB) {
  auto t = mk(TermKind::Match);
  t->t0 = std::move(l);
  t->t1 = std::move(r);
  t->t2 = std::move(thenB);
  t->t3 = std::move(elseB);
  return t;
}

TermPtr mkNew(const std::string& a, TypePtr ty, TermPtr body) {
  auto t = mk(TermKind::New);
  t->id = a;
  t->ty = std::move(ty);
  t->t0 = std::move(body);
  return t;
}

TermPtr mkPar(TermPtr l, TermPtr r) {
  auto t = mk(TermKind::Par);
  t->t0 = std::move(l);
  t->t1 = std::move(r);
  return t;
}

TermPtr mkRepl(TermPtr body) {
  auto t = mk(TermKind::Repl);
  t->t0 = std::move(body);
  return t;
}

TermPtr mkNil() { return mk(TermKind::Nil); }

TermPtr mkResource(const std::string& k, TermPtr value) {
  auto t = mk(TermKind::Resource);
  t->id = k;
  t->t0 = std::move(value);
  return t;
}

bool isValueKind(TermKind k) {
  switch (k) {
    case TermKind::UnitVal:
    case TermKind::Name:
    case TermKind::Var:
    case TermKind::Lambda:
    case TermKind::TriggerCall: return true;
    default: return false;
  }
}

bool isValue(const TermPtr& t) { return t && isValueKind(t->kind); }

bool termEq(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->id != b->id) return false;
  if ((a->ty || b->ty) && !typeEq(a->ty, b->ty)) return false;
  return termEq(a->t0, b->t0) && termEq(a->t1, b->t1) && termEq(a->t2, b->t2) &&
         termEq(a->t3, b->t3);
}

bool envEq(const Env& a, const Env& b) {
  auto mapEq = [](const std::map<std::string, TypePtr>& m,
                  const std::map<std::string, TypePtr>& n) {
    if (m.size() != n.size()) return false;
    auto it = n.begin();
    for (const auto& [k, v] : m) {
      if (it->first != k || !typeEq(it->second, v)) return false;
      ++it;
    }
    return true;
  };
  return mapEq(a.channels, b.channels) && mapEq(a.vars, b.vars) &&
         mapEq(a.triggers, b.triggers);
}

// ------------------------------------------------------- free identifiers ---

namespace {

// One traversal engine for the free-identifier functions; `mode` selects
// which namespace is being collected and which binders matter.
enum class IdentMode { Names, Vars, Triggers };

void collectIdents(const TermPtr& t, IdentMode mode, std::set<std::string>& bound,
                   std::set<std::string>& out) {
  if (!t) return;
  switch (t->kind) {
    case TermKind::UnitVal:
    case TermKind::Nil: return;
    case TermKind::Name:
      if (mode == IdentMode::Names && !bound.count(t->id)) out.insert(t->id);
      return;
    case TermKind::Var:
      if (mode == IdentMode::Vars && !bound.count(t->id)) out.insert(t->id);
      return;
    case TermKind::TriggerCall:
      if (mode == IdentMode::Triggers) out.insert(t->id);
      return;
    case TermKind::Lambda:
    case TermKind::Input: {
      const TermPtr& body = t->kind == TermKind::Lambda ? t->t0 : t->t1;
      if (t->kind == TermKind::Input) collectIdents(t->t0, mode, bound, out);
      bool shadow = mode == IdentMode::Vars && !bound.count(t->id);
      if (shadow) bound.insert(t->id);
      collectIdents(body, mode, bound, out);
      if (shadow) bound.erase(t->id);
      return;
    }
    case TermKind::New: {
      bool shadow = mode == IdentMode::Names && !bound.count(t->id);
      if (shadow) bound.insert(t->id);
      collectIdents(t->t0, mode, bound, out);
      if (shadow) bound.erase(t->id);
      return;
    }
    case TermKind::Resource:
      if (mode == IdentMode::Triggers) out.insert(t->id);
      collectIdents(t->t0, mode, bound, out);
      return;
    default:
      collectIdents(t->t0, mode, bound, out);
      collectIdents(t->t1, mode, bound, out);
      collectIdents(t->t2, mode, bound, out);
      collectIdents(t->t3, mode, bound, out);
      return;
  }
}

}  // namespace

std::set<std::string> freeNames(const TermPtr& t) {
  std::set<std::string> bound, out;
  collectIdents(t, IdentMode::Names, bound, out);
  return out;
}

std::set<std::string> freeVars(const TermPtr& t) {
  std::set<std::string> bound, out;
  collectIdents(t, IdentMode::Vars, bound, out);
  return out;
}

std::set<std::string> triggerIdents(const TermPtr& t) {
  std::set<std::string> bound, out;
  collectIdents(t, IdentMode::Triggers, bound, out);
  return out;
}

bool containsCall(const TermPtr& t, const std::string& k) {
  if (!t) return false;
  if (t->kind == TermKind::TriggerCall) return t->id == k;
  return containsCall(t->t0, k) || containsCall(t->t1, k) || containsCall(t->t2, k) ||
         containsCall(t->t3, k);
}

bool containsResource(const TermPtr& t, const std::string& k) {
  if (!t) return false;
  if (t->kind == TermKind::Resource && t->id == k) return true;
  return containsResource(t->t0, k) || containsResource(t->t1, k) ||
         containsResource(t->t2, k) || containsResource(t->t3, k);
}

// -------------------------------------------------------------- predicates ---

bool isBalanced(const TermPtr& c) {
  std::set<std::string> calls, resources;
  std::function<void(const TermPtr&)> walk = [&](const TermPtr& t) {
    if (!t) return;
    if (t->kind == TermKind::TriggerCall) calls.insert(t->id);
    if (t->kind == TermKind::Resource) resources.insert(t->id);
    walk(t->t0);
    walk(t->t1);
    walk(t->t2);
    walk(t->t3);
  };
  walk(c);
  for (const auto& k : resources)
    if (calls.count(k)) return false;
  return true;
}

namespace {

// Value positions must hold values; resources may only sit at configuration
// level (outside prefixes, abstractions and replication).
void validateWalk(const TermPtr& t, bool configLevel, std::set<std::string>& resIds,
                  std::string& problem) {
  if (!t || !problem.empty()) return;
  auto wantValue = [&](const TermPtr& v, const char* where) {
    if (!isValue(v) && problem.empty())
      problem = std::string("non-value in ") + where + " position";
  };
  switch (t->kind) {
    case TermKind::UnitVal:
    case TermKind::Name:
    case TermKind::Var:
    case TermKind::TriggerCall:
    case TermKind::Nil: return;
    case TermKind::Lambda: validateWalk(t->t0, false, resIds, problem); return;
    case TermKind::App:
      wantValue(t->t0, "application function");
      wantValue(t->t1, "application argument");
      validateWalk(t->t0, false, resIds, problem);
      validateWalk(t->t1, false, resIds, problem);
      return;
    case TermKind::Input:
      wantValue(t->t0, "input subject");
      validateWalk(t->t1, false, resIds, problem);
      return;
    case TermKind::Output:
      wantValue(t->t0, "output subject");
      wantValue(t->t1, "output payload");
      validateWalk(t->t1, false, resIds, problem);
      validateWalk(t->t2, false, resIds, problem);
      return;
    case TermKind::Match:
      wantValue(t->t0, "match left");
      wantValue(t->t1, "match right");
      validateWalk(t->t2, false, resIds, problem);
      validateWalk(t->t3, false, resIds, problem);
      return;
    case TermKind::New: validateWalk(t->t0, configLevel, resIds, problem); return;
    case TermKind::Par:
      validateWalk(t->t0, configLevel, resIds, problem);
      validateWalk(t->t1, configLevel, resIds, problem);
      return;
    case TermKind::Repl: validateWalk(t->t0, false, resIds, problem); return;
    case TermKind::Resource:
      if (!configLevel) {
        problem = "resource under a prefix, abstraction or replication";
        return;
      }
      if (!resIds.insert(t->id).second) {
        problem = "duplicate resource for trigger " + t->id;
        return;
      }
      wantValue(t->t0, "resource");
      validateWalk(t->t0, false, resIds, problem);
      return;
  }
}

}  // namespace

std::string validateTerm(const TermPtr& c) {
  std::string problem;
  std::set<std::string> resIds;
  validateWalk(c, true, resIds, problem);
  if (!problem.empty()) return problem;
  // namespace disjointness across the three identifier kinds
  std::set<std::string> bound, names, vars;
  collectIdents(c, IdentMode::Names, bound, names);
  collectIdents(c, IdentMode::Vars, bound, vars);
  std::set<std::string> triggers = triggerIdents(c);
  for (const auto& k : triggers) {
    if (names.count(k)) return "identifier " + k + " used as both trigger and channel";
    if (vars.count(k)) return "identifier " + k + " used as both trigger and variable";
  }
  for (const auto& a : names)
    if (vars.count(a)) return "identifier " + a + " used as both channel and variable";
  return "";
}

const char* guardednessName(Guardedness g) {
  switch (g) {
    case Guardedness::Absent: return "absent";
    case Guardedness::Guarded: return "guarded";
    case Guardedness::Unguarded: return "unguarded";
    case Guardedness::Mixed: return "mixed";
  }
  return "?";
}

namespace {

// Walks every occurrence of x.  `transparent` is true while the path from
// the root has passed only through New/Par/Repl, so a function-position
// occurrence there is unguarded; every other occurrence is guarded.
void classifyOccurrences(const std::string& x, const TermPtr& t, bool transparent,
                         bool& sawG, bool& sawU, bool shadowed) {
  if (!t) return;
  switch (t->kind) {
    case TermKind::Var:
      if (!shadowed && t->id == x) sawG = true;  // bare value occurrence
      return;
    case TermKind::UnitVal:
    case TermKind::Name:
    case TermKind::TriggerCall:
    case TermKind::Nil: return;
    case TermKind::Lambda:
      classifyOccurrences(x, t->t0, false, sawG, sawU, shadowed || t->id == x);
      return;
    case TermKind::App:
      if (!shadowed && t->t0 && t->t0->kind == TermKind::Var && t->t0->id == x) {
        (transparent ? sawU : sawG) = true;
      } else {
        classifyOccurrences(x, t->t0, false, sawG, sawU, shadowed);
      }
      classifyOccurrences(x, t->t1, false, sawG, sawU, shadowed);
      return;
    case TermKind::Input:
      classifyOccurrences(x, t->t0, false, sawG, sawU, shadowed);
      classifyOccurrences(x, t->t1, false, sawG, sawU, shadowed || t->id == x);
      return;
    case TermKind::Output:
    case TermKind::Match:
    case TermKind::Resource:
      classifyOccurrences(x, t->t0, false, sawG, sawU, shadowed);
      classifyOccurrences(x, t->t1, false, sawG, sawU, shadowed);
      classifyOccurrences(x, t->t2, false, sawG, sawU, shadowed);
      classifyOccurrences(x, t->t3, false, sawG, sawU, shadowed);
      return;
    case TermKind::New:
    case TermKind::Par:
    case TermKind::Repl:
      classifyOccurrences(x, t->t0, transparent, sawG, sawU, shadowed);
      classifyOccurrences(x, t->t1, transparent, sawG, sawU, shadowed);
      return;
  }
}

}  // namespace

Guardedness guardedOccurrence(const std::string& x, const TermPtr& p) {
  bool sawG = false, sawU = false;
  classifyOccurrences(x, p, true, sawG, sawU, false);
  if (sawG && sawU) return Guardedness::Mixed;
  if (sawU) return Guardedness::Unguarded;
  if (sawG) return Guardedness::Guarded;
  return Guardedness::Absent;
}

IdentClass classifyIdent(const std::string& id) {
  if (id.empty()) return IdentClass::ChannelName;
  char c = id[0];
  if (c == 'x' || c == 'y' || c == 'z') return IdentClass::Variable;
  if (std::isupper(static_cast<unsigned char>(c))) return IdentClass::TypeVariable;
  return IdentClass::ChannelName;
}

}  // namespace hopi
