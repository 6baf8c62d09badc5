// reduction.cpp - prenex decomposition, canonical structural forms, the
// reduction relation and its bounded closure, housekeeping steps, barbs.
#include "hopi/reduction.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

#include "hopi/printer.hpp"
#include "hopi/subst.hpp"
#include "hopi/types.hpp"

namespace hopi {

// ------------------------------------------------------------------ prenex ---

namespace {

void prenexWalk(const TermPtr& t, std::set<std::string>& used, Prenex& out) {
  if (!t) return;
  switch (t->kind) {
    case TermKind::Nil: return;
    case TermKind::Par:
      prenexWalk(t->t0, used, out);
      prenexWalk(t->t1, used, out);
      return;
    case TermKind::New: {
      std::string n = t->id;
      TermPtr body = t->t0;
      if (used.count(n)) {
        std::string fresh = freshIdent("c", used);
        body = renameFreeName(body, n, fresh);
        n = fresh;
      }
      used.insert(n);
      out.binders.emplace_back(n, t->ty);
      prenexWalk(body, used, out);
      return;
    }
    default: out.comps.push_back(t); return;
  }
}

Prenex toPrenexAvoid(const TermPtr& c, std::set<std::string> used) {
  Prenex out;
  prenexWalk(c, used, out);
  return out;
}

}  // namespace

Prenex toPrenex(const TermPtr& c) { return toPrenexAvoid(c, freeNames(c)); }

TermPtr fromPrenex(const Prenex& p) {
  TermPtr body;
  if (p.comps.empty()) {
    body = mkNil();
  } else {
    body = p.comps.back();
    for (size_t i = p.comps.size() - 1; i-- > 0;) body = mkPar(p.comps[i], body);
  }
  for (size_t i = p.binders.size(); i-- > 0;)
    body = mkNew(p.binders[i].first, p.binders[i].second, body);
  return body;
}

// ------------------------------------------------------------ normal forms ---

namespace {

std::string sortKey(const TermPtr& comp) { return print(alphaCanonical(comp)); }

TermPtr rebuildSorted(std::vector<TermPtr> comps) {
  if (comps.empty()) return mkNil();
  std::stable_sort(comps.begin(), comps.end(), [](const TermPtr& a, const TermPtr& b) {
    return sortKey(a) < sortKey(b);
  });
  TermPtr body = comps.back();
  for (size_t i = comps.size() - 1; i-- > 0;) body = mkPar(comps[i], body);
  return body;
}

std::vector<TermPtr> normComponents(const TermPtr& t) {
  if (!t) return {};
  switch (t->kind) {
    case TermKind::Nil: return {};
    case TermKind::Par: {
      std::vector<TermPtr> out = normComponents(t->t0);
      std::vector<TermPtr> rhs = normComponents(t->t1);
      out.insert(out.end(), rhs.begin(), rhs.end());
      return out;
    }
    case TermKind::New: {
      std::vector<TermPtr> inner = normComponents(t->t0);
      std::vector<TermPtr> users, rest;
      for (const auto& c : inner)
        (freeNames(c).count(t->id) ? users : rest).push_back(c);
      if (!users.empty())
        rest.push_back(mkNew(t->id, t->ty, rebuildSorted(std::move(users))));
      return rest;  // unused restrictions are garbage-collected
    }
    default: return {t};
  }
}

}  // namespace

TermPtr structNormal(const TermPtr& c) { return rebuildSorted(normComponents(c)); }

TermPtr canonicalTerm(const TermPtr& c, const std::set<std::string>& avoid) {
  return alphaCanonical(structNormal(c), avoid);
}

namespace {

// All terms obtained from t by unfolding exactly one replication once at an
// evaluation position (!P becomes !P | P).
std::vector<TermPtr> oneUnfoldVariants(const TermPtr& t) {
  if (!t) return {};
  std::vector<TermPtr> out;
  switch (t->kind) {
    case TermKind::Par:
      for (const auto& v : oneUnfoldVariants(t->t0)) out.push_back(mkPar(v, t->t1));
      for (const auto& v : oneUnfoldVariants(t->t1)) out.push_back(mkPar(t->t0, v));
      return out;
    case TermKind::New:
      for (const auto& v : oneUnfoldVariants(t->t0))
        out.push_back(mkNew(t->id, t->ty, v));
      return out;
    case TermKind::Repl: out.push_back(mkPar(t, t->t0)); return out;
    default: return out;
  }
}

}  // namespace

bool structEquiv(const TermPtr& a, const TermPtr& b) {
  std::set<std::string> ka, kb;
  ka.insert(print(canonicalTerm(a)));
  for (const auto& v : oneUnfoldVariants(a)) ka.insert(print(canonicalTerm(v)));
  kb.insert(print(canonicalTerm(b)));
  for (const auto& v : oneUnfoldVariants(b)) kb.insert(print(canonicalTerm(v)));
  for (const auto& k : ka)
    if (kb.count(k)) return true;
  return false;
}

// --------------------------------------------------------------- reduction ---

std::string Soup::pathOf(size_t e) const {
  return std::to_string(entries[e].owner) + (entries[e].isCopy ? "!" : "");
}

std::set<std::string> Soup::boundNames() const {
  std::set<std::string> out;
  for (const auto& b : px.binders) out.insert(b.first);
  for (const auto& bs : copyBinders)
    for (const auto& b : bs) out.insert(b.first);
  return out;
}

Soup buildSoup(const TermPtr& c) {
  Soup s;
  std::set<std::string> used = freeNames(c);
  s.px = toPrenexAvoid(c, used);
  for (const auto& b : s.px.binders) used.insert(b.first);
  s.copyBinders.resize(s.px.comps.size());
  for (size_t i = 0; i < s.px.comps.size(); ++i) {
    s.entries.push_back(SoupEntry{s.px.comps[i], i, false});
    if (s.px.comps[i]->kind == TermKind::Repl) {
      Prenex copy = toPrenexAvoid(s.px.comps[i]->t0, used);
      for (const auto& b : copy.binders) used.insert(b.first);
      s.copyBinders[i] = copy.binders;
      for (const auto& cc : copy.comps)
        s.entries.push_back(SoupEntry{cc, i, true});
    }
  }
  return s;
}

TermPtr rebuildSoup(const Soup& s, const std::map<size_t, std::vector<TermPtr>>& replaced,
                    const std::set<std::string>& dropBinders) {
  std::set<size_t> materialize;
  for (const auto& [e, t] : replaced)
    if (s.entries[e].isCopy) materialize.insert(s.entries[e].owner);

  Prenex out;
  for (const auto& b : s.px.binders)
    if (!dropBinders.count(b.first)) out.binders.push_back(b);
  for (size_t owner : materialize)
    for (const auto& b : s.copyBinders[owner])
      if (!dropBinders.count(b.first)) out.binders.push_back(b);
  for (size_t e = 0; e < s.entries.size(); ++e) {
    const SoupEntry& en = s.entries[e];
    if (en.isCopy && !materialize.count(en.owner)) continue;
    auto it = replaced.find(e);
    if (it == replaced.end()) {
      out.comps.push_back(en.t);
    } else {
      for (const auto& t : it->second) out.comps.push_back(t);
    }
  }
  // drop nils introduced by replacements
  std::vector<TermPtr> keep;
  for (const auto& t : out.comps)
    if (t->kind != TermKind::Nil) keep.push_back(t);
  out.comps = std::move(keep);
  return fromPrenex(out);
}

namespace {

bool isBetaRedex(const TermPtr& t) {
  return t->kind == TermKind::App && t->t0->kind == TermKind::Lambda &&
         isValue(t->t1);
}

}  // namespace

std::vector<ReductionStep> reduceStep(const TermPtr& c) {
  Soup s = buildSoup(c);
  std::vector<ReductionStep> out;

  for (size_t e = 0; e < s.entries.size(); ++e) {
    const TermPtr& t = s.entries[e].t;
    if (isBetaRedex(t)) {
      TermPtr red = substValue(t->t0->t0, t->t0->id, t->t1);
      out.push_back({"beta", s.pathOf(e), rebuildSoup(s, {{e, {red}}})});
    } else if (t->kind == TermKind::Match && t->t0->kind == TermKind::Name &&
               t->t1->kind == TermKind::Name) {
      bool same = t->t0->id == t->t1->id;
      out.push_back({same ? "cond-tt" : "cond-ff", s.pathOf(e),
                     rebuildSoup(s, {{e, {same ? t->t2 : t->t3}}})});
    }
  }

  for (size_t e1 = 0; e1 < s.entries.size(); ++e1) {
    for (size_t e2 = 0; e2 < s.entries.size(); ++e2) {
      if (e1 == e2) continue;
      const TermPtr& o = s.entries[e1].t;
      const TermPtr& i = s.entries[e2].t;
      if (o->kind != TermKind::Output || i->kind != TermKind::Input) continue;
      if (o->t0->kind != TermKind::Name || i->t0->kind != TermKind::Name) continue;
      if (o->t0->id != i->t0->id) continue;
      // a!<v>.P | a?(x:T).Q  ->  P | (\x:T -> Q)(v)
      TermPtr app = mkApp(mkLambda(i->id, i->ty, i->t1), o->t1);
      out.push_back({"comm", s.pathOf(e1) + "+" + s.pathOf(e2),
                     rebuildSoup(s, {{e1, {o->t2}}, {e2, {app}}})});
    }
  }
  return out;
}

ReachResult reduceMulti(const TermPtr& c, int maxSteps, int maxStates) {
  ReachResult out;
  TermPtr root = canonicalTerm(c);
  std::set<std::string> seen{print(root)};
  out.states.push_back(root);
  std::deque<std::pair<TermPtr, int>> queue{{root, 0}};
  while (!queue.empty()) {
    auto [t, d] = queue.front();
    queue.pop_front();
    std::vector<ReductionStep> steps = reduceStep(t);
    if (d >= maxSteps) {
      if (!steps.empty()) out.truncated = true;
      continue;
    }
    for (const auto& st : steps) {
      TermPtr ct = canonicalTerm(st.target);
      std::string key = print(ct);
      if (!seen.insert(key).second) continue;
      if (static_cast<int>(out.states.size()) >= maxStates) {
        out.truncated = true;
        continue;
      }
      out.states.push_back(ct);
      queue.emplace_back(ct, d + 1);
    }
  }
  return out;
}

// ------------------------------------------------------------ housekeeping ---

namespace {

// (\x:T -> k!<x>.0) v with k a channel name: the shape produced by the
// encoding of trigger calls.
bool isHousekeepingRedex(const TermPtr& t) {
  if (!isBetaRedex(t)) return false;
  const TermPtr& lam = t->t0;
  const TermPtr& body = lam->t0;
  return body->kind == TermKind::Output && body->t0->kind == TermKind::Name &&
         body->t1->kind == TermKind::Var && body->t1->id == lam->id &&
         body->t2->kind == TermKind::Nil;
}

}  // namespace

std::vector<TermPtr> housekeepingStep(const TermPtr& p) {
  std::set<std::string> used = freeNames(p);
  Prenex px = toPrenexAvoid(p, used);
  std::vector<TermPtr> out;
  for (size_t i = 0; i < px.comps.size(); ++i) {
    const TermPtr& t = px.comps[i];
    if (!isHousekeepingRedex(t)) continue;
    Prenex next = px;
    next.comps[i] = mkOutput(t->t0->t0->t0, t->t1, mkNil());
    out.push_back(fromPrenex(next));
  }
  return out;
}

std::vector<TermPtr> hClosure(const TermPtr& p) {
  std::vector<TermPtr> out;
  std::set<std::string> seen;
  std::deque<TermPtr> queue;
  TermPtr root = canonicalTerm(p);
  out.push_back(root);
  seen.insert(print(root));
  queue.push_back(root);
  while (!queue.empty()) {
    TermPtr t = queue.front();
    queue.pop_front();
    for (const auto& n : housekeepingStep(t)) {
      TermPtr cn = canonicalTerm(n);
      if (seen.insert(print(cn)).second) {
        out.push_back(cn);
        queue.push_back(cn);
      }
    }
  }
  return out;
}

// ------------------------------------------------------------------- barbs ---

std::set<std::string> immediateBarbs(const TermPtr& c) {
  Soup s = buildSoup(c);
  std::set<std::string> bound = s.boundNames();
  std::set<std::string> out;
  for (const auto& e : s.entries) {
    const TermPtr& t = e.t;
    if (t->kind == TermKind::Output && t->t0->kind == TermKind::Name &&
        t->t1->kind == TermKind::UnitVal && !bound.count(t->t0->id))
      out.insert(t->t0->id);
  }
  return out;
}

std::set<std::string> barbs(const TermPtr& c, int maxSteps, int maxStates) {
  std::set<std::string> out;
  for (const auto& st : reduceMulti(c, maxSteps, maxStates).states)
    for (const auto& b : immediateBarbs(st)) out.insert(b);
  return out;
}

// -------------------------------------------------- subject reduction check ---

SubjectReductionReport checkSubjectReduction(const Env& env, const TermPtr& c,
                                             int steps) {
  SubjectReductionReport rep;
  TermPtr root = canonicalTerm(c);
  auto fail = [&](const std::vector<std::string>& path, const std::string& msg) {
    rep.ok = false;
    rep.trace = path;
    rep.message = msg;
  };
  try {
    checkConfig(env, root);
  } catch (const TypeError& e) {
    fail({print(root)}, e.what());
    return rep;
  }
  struct Item {
    TermPtr t;
    int depth;
    std::vector<std::string> path;
  };
  std::set<std::string> seen{print(root)};
  std::deque<Item> queue{{root, 0, {print(root)}}};
  const size_t stateCap = 20000;
  while (!queue.empty()) {
    Item it = queue.front();
    queue.pop_front();
    if (it.depth >= steps) continue;
    for (const auto& st : reduceStep(it.t)) {
      TermPtr ct = canonicalTerm(st.target);
      std::string key = print(ct);
      if (!seen.insert(key).second) continue;
      std::vector<std::string> path = it.path;
      path.push_back(key);
      try {
        checkConfig(env, ct);
      } catch (const TypeError& e) {
        fail(path, e.what());
        return rep;
      }
      if (seen.size() < stateCap) queue.push_back({ct, it.depth + 1, path});
    }
  }
  return rep;
}

}  // namespace hopi
