// types.cpp - guardedness, head normalization, coinductive iso-equivalence
// and the typing judgement.
#include "hopi/types.hpp"

#include <set>
#include <utility>

#include "hopi/printer.hpp"
#include "hopi/subst.hpp"

namespace hopi {

namespace {

// Does z occur free and not beneath a ch<>/abs<> constructor?
bool occursUnguarded(const std::string& z, const TypePtr& t) {
  if (!t) return false;
  switch (t->kind) {
    case TypeKind::Unit: return false;
    case TypeKind::TypeVar: return t->name == z;
    case TypeKind::Chan:
    case TypeKind::Abs: return false;  // guarded from here down
    case TypeKind::Rec:
      return t->name == z ? false : occursUnguarded(z, t->inner);
  }
  return false;
}

}  // namespace

bool checkGuardedType(const TypePtr& t) {
  if (!t) return false;
  switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::TypeVar: return true;
    case TypeKind::Chan:
    case TypeKind::Abs: return checkGuardedType(t->inner);
    case TypeKind::Rec:
      return !occursUnguarded(t->name, t->inner) && checkGuardedType(t->inner);
  }
  return false;
}

TypePtr unfoldRec(const TypePtr& t) {
  if (!t || t->kind != TypeKind::Rec)
    throw std::invalid_argument("unfoldRec: not a recursive type: " +
                                (t ? printType(t) : "<null>"));
  return substTypeVar(t->inner, t->name, t);
}

TypePtr headNormal(const TypePtr& t) {
  if (!checkGuardedType(t))
    throw TypeError("head-normal", printType(t), "type is not guarded");
  TypePtr cur = t;
  // guardedness strictly shrinks the leading rec spine per unfolding
  for (int i = 0; i < 100000 && cur->kind == TypeKind::Rec; ++i) cur = unfoldRec(cur);
  if (cur->kind == TypeKind::Rec)
    throw TypeError("head-normal", printType(t), "head normalization did not converge");
  return cur;
}

namespace {

bool isoRec(const TypePtr& a, const TypePtr& b,
            std::set<std::pair<std::string, std::string>>& seen) {
  TypePtr ha = headNormal(a);
  TypePtr hb = headNormal(b);
  auto key = std::make_pair(printType(alphaCanonicalType(ha)),
                            printType(alphaCanonicalType(hb)));
  if (key.first == key.second) return true;
  if (!seen.insert(key).second) return true;  // coinductive closure
  if (ha->kind != hb->kind) return false;
  switch (ha->kind) {
    case TypeKind::Unit: return true;
    case TypeKind::TypeVar: return ha->name == hb->name;
    case TypeKind::Chan:
    case TypeKind::Abs: return isoRec(ha->inner, hb->inner, seen);
    case TypeKind::Rec: return false;  // unreachable after head normalization
  }
  return false;
}

}  // namespace

bool typeIso(const TypePtr& a, const TypePtr& b) {
  std::set<std::pair<std::string, std::string>> seen;
  return isoRec(a, b, seen);
}

bool isBaseType(const TypePtr& t) {
  TypePtr h = headNormal(t);
  return h->kind == TypeKind::Unit || h->kind == TypeKind::Chan;
}

void requireWellFormedType(const TypePtr& t, const std::string& where) {
  if (!t) throw TypeError("type-wf", where, "missing type annotation");
  if (!checkGuardedType(t))
    throw TypeError("type-wf", printType(t), "unguarded recursion" +
                                                 (where.empty() ? "" : " in " + where));
  if (!freeTypeVars(t).empty())
    throw TypeError("type-wf", printType(t),
                    "free type variable" + (where.empty() ? "" : " in " + where));
}

TypePtr inferValueType(const Env& env, const TermPtr& v) {
  if (!v) throw TypeError("value", "<null>", "missing term");
  switch (v->kind) {
    case TermKind::UnitVal: return tyUnit();
    case TermKind::Name: {
      auto it = env.channels.find(v->id);
      if (it == env.channels.end())
        throw TypeError("name", v->id, "channel not in environment");
      return it->second;
    }
    case TermKind::Var: {
      auto it = env.vars.find(v->id);
      if (it == env.vars.end())
        throw TypeError("var", v->id, "variable not in environment");
      return it->second;
    }
    case TermKind::TriggerCall: {
      auto it = env.triggers.find(v->id);
      if (it == env.triggers.end())
        throw TypeError("trigger", v->id, "trigger not in environment");
      return tyAbs(it->second);
    }
    case TermKind::Lambda: {
      requireWellFormedType(v->ty, "abstraction parameter");
      Env inner = env;
      inner.vars[v->id] = v->ty;
      checkProcess(inner, v->t0);
      return tyAbs(v->ty);
    }
    default:
      throw TypeError("value", print(v), "not a value");
  }
}

void checkProcess(const Env& env, const TermPtr& p) {
  if (!p) throw TypeError("process", "<null>", "missing term");
  switch (p->kind) {
    case TermKind::Nil: return;
    case TermKind::App: {
      TypePtr tf = inferValueType(env, p->t0);
      TypePtr hf = headNormal(tf);
      if (hf->kind != TypeKind::Abs)
        throw TypeError("app", print(p), "function has type " + printType(tf) +
                                             ", expected an abstraction type");
      TypePtr ta = inferValueType(env, p->t1);
      if (!typeIso(ta, hf->inner))
        throw TypeError("app", print(p), "argument has type " + printType(ta) +
                                             ", expected " + printType(hf->inner));
      return;
    }
    case TermKind::Input: {
      requireWellFormedType(p->ty, "input parameter");
      TypePtr ts = inferValueType(env, p->t0);
      TypePtr hs = headNormal(ts);
      if (hs->kind != TypeKind::Chan)
        throw TypeError("input", print(p), "subject has type " + printType(ts) +
                                               ", expected a channel type");
      if (!typeIso(hs->inner, p->ty))
        throw TypeError("input", print(p),
                        "parameter annotated " + printType(p->ty) +
                            " but the channel carries " + printType(hs->inner));
      Env inner = env;
      inner.vars[p->id] = p->ty;
      checkProcess(inner, p->t1);
      return;
    }
    case TermKind::Output: {
      TypePtr ts = inferValueType(env, p->t0);
      TypePtr hs = headNormal(ts);
      if (hs->kind != TypeKind::Chan)
        throw TypeError("output", print(p), "subject has type " + printType(ts) +
                                                ", expected a channel type");
      TypePtr tw = inferValueType(env, p->t1);
      if (!typeIso(tw, hs->inner))
        throw TypeError("output", print(p), "payload has type " + printType(tw) +
                                                ", expected " + printType(hs->inner));
      checkProcess(env, p->t2);
      return;
    }
    case TermKind::Match: {
      TypePtr tl = inferValueType(env, p->t0);
      TypePtr tr = inferValueType(env, p->t1);
      if (headNormal(tl)->kind != TypeKind::Chan ||
          headNormal(tr)->kind != TypeKind::Chan)
        throw TypeError("match", print(p), "matching is only defined at channel types");
      if (!typeIso(tl, tr))
        throw TypeError("match", print(p), "operands have types " + printType(tl) +
                                               " and " + printType(tr) +
                                               ", which are not the same channel type");
      checkProcess(env, p->t2);
      checkProcess(env, p->t3);
      return;
    }
    case TermKind::New: {
      requireWellFormedType(p->ty, "restriction");
      if (headNormal(p->ty)->kind != TypeKind::Chan)
        throw TypeError("new", print(p), "restriction must bind a channel type, got " +
                                             printType(p->ty));
      Env inner = env;
      inner.channels[p->id] = p->ty;
      checkProcess(inner, p->t0);
      return;
    }
    case TermKind::Par:
      checkProcess(env, p->t0);
      checkProcess(env, p->t1);
      return;
    case TermKind::Repl: checkProcess(env, p->t0); return;
    case TermKind::Resource: {
      auto it = env.triggers.find(p->id);
      if (it == env.triggers.end())
        throw TypeError("resource", p->id, "trigger not in environment");
      TypePtr tv = inferValueType(env, p->t0);
      if (!typeIso(tv, tyAbs(it->second)))
        throw TypeError("resource", print(p),
                        "stored value has type " + printType(tv) + ", expected " +
                            printType(tyAbs(it->second)));
      return;
    }
    default:
      throw TypeError("process", print(p), "a bare value is not a process");
  }
}

void checkConfig(const Env& env, const TermPtr& c) {
  for (const auto& [a, ty] : env.channels) {
    requireWellFormedType(ty, "channel " + a);
    if (headNormal(ty)->kind != TypeKind::Chan)
      throw TypeError("env", a, "channel bound to non-channel type " + printType(ty));
  }
  for (const auto& [k, ty] : env.triggers) requireWellFormedType(ty, "trigger " + k);
  for (const auto& [x, ty] : env.vars) requireWellFormedType(ty, "variable " + x);
  std::string problem = validateTerm(c);
  if (!problem.empty()) throw TypeError("structure", print(c), problem);
  checkProcess(env, c);
}

}  // namespace hopi
