// subst.cpp - substitution and canonical renaming.
#include "hopi/subst.hpp"

#include <functional>
#include <map>
#include <stdexcept>

namespace hopi {

std::string freshIdent(const char* stem, const std::set<std::string>& used) {
  for (int i = 0;; ++i) {
    std::string cand = stem + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}

// ------------------------------------------------------ type substitution ---

TypePtr substTypeVar(const TypePtr& t, const std::string& z, const TypePtr& u) {
  if (!t) return t;
  switch (t->kind) {
    case TypeKind::Unit: return t;
    case TypeKind::TypeVar: return t->name == z ? u : t;
    case TypeKind::Chan: return tyChan(substTypeVar(t->inner, z, u));
    case TypeKind::Abs: return tyAbs(substTypeVar(t->inner, z, u));
    case TypeKind::Rec: {
      if (t->name == z) return t;  // shadowed
      if (freeTypeVars(u).count(t->name)) {
        // rename the binder away from u's free variables
        std::set<std::string> used = freeTypeVars(t->inner);
        for (const auto& v : freeTypeVars(u)) used.insert(v);
        used.insert(z);
        std::string fresh = freshIdent("Z", used);
        TypePtr body = substTypeVar(t->inner, t->name, tyVar(fresh));
        return tyRec(fresh, substTypeVar(body, z, u));
      }
      return tyRec(t->name, substTypeVar(t->inner, z, u));
    }
  }
  return t;
}

// ------------------------------------------------------ term substitution ---

namespace {

// Simultaneous capture-avoiding renaming of free variables and free channel
// names; the workhorse beneath substitution and prenex extraction.
struct Renaming {
  std::map<std::string, std::string> vars;    // variable -> variable
  std::map<std::string, std::string> names;   // channel -> channel
};

TermPtr applyRenaming(const TermPtr& t, const Renaming& r);

// Re-bind `binder` (a variable binder when `isVar`, a channel binder
// otherwise) so that no active renaming target gets captured in `body`.
// Returns the binder to use and updates the renaming for the body.
std::string enterBinder(const std::string& binder, bool isVar, const TermPtr& body,
                        Renaming& r) {
  auto& map = isVar ? r.vars : r.names;
  map.erase(binder);
  std::set<std::string> freeIds = isVar ? freeVars(body) : freeNames(body);
  bool collides = false;
  for (const auto& [from, to] : map)
    if (to == binder && freeIds.count(from)) collides = true;
  if (!collides) return binder;
  std::set<std::string> used = freeIds;
  for (const auto& [from, to] : map) {
    used.insert(from);
    used.insert(to);
  }
  std::string fresh = freshIdent(isVar ? "x" : "c", used);
  map[binder] = fresh;
  return fresh;
}

TermPtr applyRenaming(const TermPtr& t, const Renaming& r) {
  if (!t) return t;
  switch (t->kind) {
    case TermKind::UnitVal:
    case TermKind::Nil:
    case TermKind::TriggerCall: return t;
    case TermKind::Name: {
      auto it = r.names.find(t->id);
      return it == r.names.end() ? t : mkName(it->second);
    }
    case TermKind::Var: {
      auto it = r.vars.find(t->id);
      return it == r.vars.end() ? t : mkVar(it->second);
    }
    case TermKind::Lambda: {
      Renaming r2 = r;
      std::string b = enterBinder(t->id, true, t->t0, r2);
      return mkLambda(b, t->ty, applyRenaming(t->t0, r2));
    }
    case TermKind::Input: {
      Renaming r2 = r;
      std::string b = enterBinder(t->id, true, t->t1, r2);
      return mkInput(applyRenaming(t->t0, r), b, t->ty, applyRenaming(t->t1, r2));
    }
    case TermKind::New: {
      Renaming r2 = r;
      std::string b = enterBinder(t->id, false, t->t0, r2);
      return mkNew(b, t->ty, applyRenaming(t->t0, r2));
    }
    case TermKind::App:
      return mkApp(applyRenaming(t->t0, r), applyRenaming(t->t1, r));
    case TermKind::Output:
      return mkOutput(applyRenaming(t->t0, r), applyRenaming(t->t1, r),
                      applyRenaming(t->t2, r));
    case TermKind::Match:
      return mkMatch(applyRenaming(t->t0, r), applyRenaming(t->t1, r),
                     applyRenaming(t->t2, r), applyRenaming(t->t3, r));
    case TermKind::Par:
      return mkPar(applyRenaming(t->t0, r), applyRenaming(t->t1, r));
    case TermKind::Repl: return mkRepl(applyRenaming(t->t0, r));
    case TermKind::Resource: return mkResource(t->id, applyRenaming(t->t0, r));
  }
  return t;
}

struct ValueSubst {
  std::string x;
  TermPtr v;
  std::set<std::string> vNames, vVars;

  TermPtr run(const TermPtr& t) {
    if (!t) return t;
    switch (t->kind) {
      case TermKind::UnitVal:
      case TermKind::Name:
      case TermKind::Nil:
      case TermKind::TriggerCall: return t;
      case TermKind::Var: return t->id == x ? v : t;
      case TermKind::Lambda: {
        if (t->id == x) return t;  // shadowed
        if (vVars.count(t->id)) {
          std::set<std::string> used = freeVars(t->t0);
          used.insert(vVars.begin(), vVars.end());
          used.insert(x);
          std::string f = freshIdent("x", used);
          Renaming r;
          r.vars[t->id] = f;
          return mkLambda(f, t->ty, run(applyRenaming(t->t0, r)));
        }
        return mkLambda(t->id, t->ty, run(t->t0));
      }
      case TermKind::Input: {
        TermPtr subj = run(t->t0);
        if (t->id == x) return mkInput(subj, t->id, t->ty, t->t1);
        if (vVars.count(t->id)) {
          std::set<std::string> used = freeVars(t->t1);
          used.insert(vVars.begin(), vVars.end());
          used.insert(x);
          std::string f = freshIdent("x", used);
          Renaming r;
          r.vars[t->id] = f;
          return mkInput(subj, f, t->ty, run(applyRenaming(t->t1, r)));
        }
        return mkInput(subj, t->id, t->ty, run(t->t1));
      }
      case TermKind::New: {
        if (vNames.count(t->id)) {
          std::set<std::string> used = freeNames(t->t0);
          used.insert(vNames.begin(), vNames.end());
          std::string f = freshIdent("c", used);
          Renaming r;
          r.names[t->id] = f;
          return mkNew(f, t->ty, run(applyRenaming(t->t0, r)));
        }
        return mkNew(t->id, t->ty, run(t->t0));
      }
      case TermKind::App: return mkApp(run(t->t0), run(t->t1));
      case TermKind::Output: return mkOutput(run(t->t0), run(t->t1), run(t->t2));
      case TermKind::Match:
        return mkMatch(run(t->t0), run(t->t1), run(t->t2), run(t->t3));
      case TermKind::Par: return mkPar(run(t->t0), run(t->t1));
      case TermKind::Repl: return mkRepl(run(t->t0));
      case TermKind::Resource: return mkResource(t->id, run(t->t0));
    }
    return t;
  }
};

}  // namespace

TermPtr substValue(const TermPtr& t, const std::string& x, const TermPtr& v) {
  if (!isValue(v)) throw std::invalid_argument("substValue: replacement is not a value");
  ValueSubst s;
  s.x = x;
  s.v = v;
  s.vNames = freeNames(v);
  s.vVars = freeVars(v);
  return s.run(t);
}

namespace {

struct TriggerSubst {
  std::string k;
  TermPtr v;
  std::set<std::string> vNames, vVars;

  TermPtr run(const TermPtr& t) {
    if (!t) return t;
    switch (t->kind) {
      case TermKind::UnitVal:
      case TermKind::Name:
      case TermKind::Var:
      case TermKind::Nil: return t;
      case TermKind::TriggerCall: return t->id == k ? v : t;
      case TermKind::Lambda: {
        if (vVars.count(t->id)) {
          std::set<std::string> used = freeVars(t->t0);
          used.insert(vVars.begin(), vVars.end());
          std::string f = freshIdent("x", used);
          Renaming r;
          r.vars[t->id] = f;
          return mkLambda(f, t->ty, run(applyRenaming(t->t0, r)));
        }
        return mkLambda(t->id, t->ty, run(t->t0));
      }
      case TermKind::Input: {
        TermPtr subj = run(t->t0);
        if (vVars.count(t->id)) {
          std::set<std::string> used = freeVars(t->t1);
          used.insert(vVars.begin(), vVars.end());
          std::string f = freshIdent("x", used);
          Renaming r;
          r.vars[t->id] = f;
          return mkInput(subj, f, t->ty, run(applyRenaming(t->t1, r)));
        }
        return mkInput(subj, t->id, t->ty, run(t->t1));
      }
      case TermKind::New: {
        if (vNames.count(t->id)) {
          std::set<std::string> used = freeNames(t->t0);
          used.insert(vNames.begin(), vNames.end());
          std::string f = freshIdent("c", used);
          Renaming r;
          r.names[t->id] = f;
          return mkNew(f, t->ty, run(applyRenaming(t->t0, r)));
        }
        return mkNew(t->id, t->ty, run(t->t0));
      }
      case TermKind::App: return mkApp(run(t->t0), run(t->t1));
      case TermKind::Output: return mkOutput(run(t->t0), run(t->t1), run(t->t2));
      case TermKind::Match:
        return mkMatch(run(t->t0), run(t->t1), run(t->t2), run(t->t3));
      case TermKind::Par: return mkPar(run(t->t0), run(t->t1));
      case TermKind::Repl: return mkRepl(run(t->t0));
      case TermKind::Resource:
        if (t->id == k) return t;  // the resource for k keeps its value
        return mkResource(t->id, run(t->t0));
    }
    return t;
  }
};

}  // namespace

TermPtr substTrigger(const TermPtr& t, const std::string& k, const TermPtr& v) {
  if (!isValue(v)) throw std::invalid_argument("substTrigger: replacement is not a value");
  TriggerSubst s;
  s.k = k;
  s.v = v;
  s.vNames = freeNames(v);
  s.vVars = freeVars(v);
  return s.run(t);
}

TermPtr renameFreeName(const TermPtr& t, const std::string& from, const std::string& to) {
  if (from == to) return t;
  Renaming r;
  r.names[from] = to;
  return applyRenaming(t, r);
}

// --------------------------------------------------------- canonicalization ---

namespace {

struct TypeCanon {
  int next = 0;
  std::map<std::string, std::string> map;  // in-scope rec binders
  std::set<std::string> freeVars;

  TypePtr run(const TypePtr& t) {
    if (!t) return t;
    switch (t->kind) {
      case TypeKind::Unit: return t;
      case TypeKind::TypeVar: {
        auto it = map.find(t->name);
        return it == map.end() ? t : tyVar(it->second);
      }
      case TypeKind::Chan: return tyChan(run(t->inner));
      case TypeKind::Abs: return tyAbs(run(t->inner));
      case TypeKind::Rec: {
        std::string fresh;
        do {
          fresh = "Z" + std::to_string(next++);
        } while (freeVars.count(fresh));
        auto saved = map;
        map[t->name] = fresh;
        TypePtr body = run(t->inner);
        map = saved;
        return tyRec(fresh, body);
      }
    }
    return t;
  }
};

struct TermCanon {
  int nextChan = 0, nextVar = 0;
  std::set<std::string> avoid;
  std::map<std::string, std::string> names, vars;

  std::string alloc(const char* stem, int& counter) {
    std::string cand;
    do {
      cand = stem + std::to_string(counter++);
    } while (avoid.count(cand));
    return cand;
  }

  TypePtr canonType(const TypePtr& t) {
    TypeCanon tc;
    tc.freeVars = freeTypeVars(t);
    return tc.run(t);
  }

  TermPtr run(const TermPtr& t) {
    if (!t) return t;
    switch (t->kind) {
      case TermKind::UnitVal:
      case TermKind::Nil:
      case TermKind::TriggerCall: return t;
      case TermKind::Name: {
        auto it = names.find(t->id);
        return it == names.end() ? t : mkName(it->second);
      }
      case TermKind::Var: {
        auto it = vars.find(t->id);
        return it == vars.end() ? t : mkVar(it->second);
      }
      case TermKind::Lambda: {
        std::string f = alloc("x", nextVar);
        auto saved = vars;
        vars[t->id] = f;
        TermPtr body = run(t->t0);
        vars = saved;
        return mkLambda(f, canonType(t->ty), body);
      }
      case TermKind::Input: {
        TermPtr subj = run(t->t0);
        std::string f = alloc("x", nextVar);
        auto saved = vars;
        vars[t->id] = f;
        TermPtr body = run(t->t1);
        vars = saved;
        return mkInput(subj, f, canonType(t->ty), body);
      }
      case TermKind::New: {
        std::string f = alloc("c", nextChan);
        auto saved = names;
        names[t->id] = f;
        TermPtr body = run(t->t0);
        names = saved;
        return mkNew(f, canonType(t->ty), body);
      }
      case TermKind::App: return mkApp(run(t->t0), run(t->t1));
      case TermKind::Output: return mkOutput(run(t->t0), run(t->t1), run(t->t2));
      case TermKind::Match:
        return mkMatch(run(t->t0), run(t->t1), run(t->t2), run(t->t3));
      case TermKind::Par: return mkPar(run(t->t0), run(t->t1));
      case TermKind::Repl: return mkRepl(run(t->t0));
      case TermKind::Resource: return mkResource(t->id, run(t->t0));
    }
    return t;
  }
};

}  // namespace

TermPtr alphaCanonical(const TermPtr& t, const std::set<std::string>& avoid) {
  TermCanon c;
  c.avoid = avoid;
  for (const auto& n : freeNames(t)) c.avoid.insert(n);
  for (const auto& v : freeVars(t)) c.avoid.insert(v);
  for (const auto& k : triggerIdents(t)) c.avoid.insert(k);
  return c.run(t);
}

TypePtr alphaCanonicalType(const TypePtr& t) {
  TypeCanon tc;
  tc.freeVars = freeTypeVars(t);
  return tc.run(t);
}

}  // namespace hopi
