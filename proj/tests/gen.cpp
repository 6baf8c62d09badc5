// gen.cpp - deterministic random generators for the test suites.
#include "gen.hpp"

#include <cstdlib>
#include <stdexcept>

#include "hopi/printer.hpp"
#include "hopi/reduction.hpp"
#include "hopi/subst.hpp"
#include "hopi/types.hpp"

namespace hopi::gen {

uint64_t seedFromEnv(uint64_t fallback) {
  const char* s = std::getenv("HOPI_SEED");
  if (!s || !*s) return fallback;
  return std::strtoull(s, nullptr, 0);
}

int Rng::upto(int n) {
  if (n <= 0) return 0;
  return static_cast<int>(eng() % static_cast<uint64_t>(n));
}

bool Rng::coin() { return (eng() & 1) != 0; }

Env standardEnv() {
  Env env;
  env.channels["a"] = tyChan(tyUnit());
  env.channels["b"] = tyChan(tyUnit());
  env.channels["c"] = tyChan(tyChan(tyUnit()));
  env.channels["d"] = tyChan(tyAbs(tyUnit()));
  return env;
}

TypePtr randomType(Rng& rng, int depth) {
  if (depth <= 0) return tyUnit();
  switch (rng.upto(6)) {
    case 0:
    case 1: return tyUnit();
    case 2: return tyChan(randomType(rng, depth - 1));
    case 3: return tyAbs(randomType(rng, depth - 1));
    case 4: return tyRec("Z", tyChan(tyVar("Z")));
    default: return tyChan(tyUnit());
  }
}

TermPtr randomValue(Rng& rng, const Env& env, const TypePtr& ty, int depth) {
  TypePtr hn = headNormal(ty);
  switch (hn->kind) {
    case TypeKind::Unit: return mkUnit();
    case TypeKind::Chan: {
      std::vector<TermPtr> candidates;
      for (const auto& [n, t] : env.channels)
        if (typeIso(t, ty)) candidates.push_back(mkName(n));
      for (const auto& [x, t] : env.vars)
        if (typeIso(t, ty)) candidates.push_back(mkVar(x));
      if (candidates.empty())
        throw std::logic_error("generator: no name of type " + printType(ty));
      return rng.pick(candidates);
    }
    case TypeKind::Abs: {
      std::set<std::string> used;
      for (const auto& [x, t] : env.vars) used.insert(x);
      std::string z = freshIdent("z", used);
      TermPtr body;
      if (depth <= 0 || rng.coin()) {
        body = mkNil();
      } else {
        Env inner = env;
        inner.vars[z] = hn->inner;
        body = randomProcess(rng, inner, depth - 1);
      }
      return mkLambda(z, hn->inner, body);
    }
    default:
      throw std::logic_error("generator: unexpected head " + printType(hn));
  }
}

namespace {

// A channel-typed subject drawn from the environment, with its payload type.
struct Subject {
  std::string name;
  TypePtr payload;
};

std::vector<Subject> subjects(const Env& env) {
  std::vector<Subject> out;
  for (const auto& [n, t] : env.channels) {
    TypePtr h = headNormal(t);
    if (h->kind == TypeKind::Chan) out.push_back({n, h->inner});
  }
  return out;
}

}  // namespace

TermPtr randomProcess(Rng& rng, const Env& env, int depth) {
  if (depth <= 0) return mkNil();
  std::vector<Subject> subs = subjects(env);
  switch (rng.upto(12)) {
    case 0: return mkNil();
    case 1:
      return mkPar(randomProcess(rng, env, depth - 1),
                   randomProcess(rng, env, depth - 1));
    case 2:
    case 3: {
      const Subject& s = rng.pick(subs);
      return mkOutput(mkName(s.name), randomValue(rng, env, s.payload, depth - 1),
                      randomProcess(rng, env, depth - 1));
    }
    case 4:
    case 5: {
      const Subject& s = rng.pick(subs);
      std::set<std::string> used;
      for (const auto& [x, t] : env.vars) used.insert(x);
      std::string z = freshIdent("z", used);
      Env inner = env;
      inner.vars[z] = s.payload;
      return mkInput(mkName(s.name), z, s.payload,
                     randomProcess(rng, inner, depth - 1));
    }
    case 6: {
      // a communication that actually fires
      const Subject& s = rng.pick(subs);
      std::set<std::string> used;
      for (const auto& [x, t] : env.vars) used.insert(x);
      std::string z = freshIdent("z", used);
      Env inner = env;
      inner.vars[z] = s.payload;
      return mkPar(mkOutput(mkName(s.name), randomValue(rng, env, s.payload, 1),
                            randomProcess(rng, env, depth - 2)),
                   mkInput(mkName(s.name), z, s.payload,
                           randomProcess(rng, inner, depth - 2)));
    }
    case 7: {
      std::set<std::string> used;
      for (const auto& [n, t] : env.channels) used.insert(n);
      std::string n = freshIdent("n", used);
      Env inner = env;
      inner.channels[n] = tyChan(tyUnit());
      return mkNew(n, tyChan(tyUnit()), randomProcess(rng, inner, depth - 1));
    }
    case 8: {
      const Subject& s = rng.pick(subs);
      std::set<std::string> used;
      for (const auto& [x, t] : env.vars) used.insert(x);
      std::string z = freshIdent("z", used);
      return mkRepl(mkInput(mkName(s.name), z, s.payload, mkNil()));
    }
    case 9: {
      // comparison of two names of matching type
      const Subject& s1 = rng.pick(subs);
      std::vector<std::string> peers;
      for (const auto& [n, t] : env.channels)
        if (typeIso(t, env.channels.at(s1.name))) peers.push_back(n);
      return mkMatch(mkName(s1.name), mkName(rng.pick(peers)),
                     randomProcess(rng, env, depth - 1),
                     randomProcess(rng, env, depth - 1));
    }
    case 10: {
      // immediate application of an abstraction
      std::set<std::string> used;
      for (const auto& [x, t] : env.vars) used.insert(x);
      std::string z = freshIdent("z", used);
      Env inner = env;
      inner.vars[z] = tyUnit();
      return mkApp(mkLambda(z, tyUnit(), randomProcess(rng, inner, depth - 1)),
                   mkUnit());
    }
    default: {
      // application of an abstraction-typed variable, if one is in scope
      std::vector<std::pair<std::string, TypePtr>> absVars;
      for (const auto& [x, t] : env.vars) {
        TypePtr h = headNormal(t);
        if (h->kind == TypeKind::Abs) absVars.emplace_back(x, h->inner);
      }
      if (absVars.empty()) return mkNil();
      const auto& [x, arg] = rng.pick(absVars);
      return mkApp(mkVar(x), randomValue(rng, env, arg, 1));
    }
  }
}

TermPtr congruentVariant(Rng& rng, const TermPtr& c) {
  Prenex px = toPrenex(c);
  // parallel composition commutes: shuffle the components
  for (size_t i = px.comps.size(); i > 1; --i)
    std::swap(px.comps[i - 1], px.comps[rng.upto(static_cast<int>(i))]);
  // pad with inert components
  if (rng.coin()) px.comps.insert(px.comps.begin() + rng.upto((int)px.comps.size() + 1), mkNil());
  // unfold one replication once
  std::vector<size_t> repls;
  for (size_t i = 0; i < px.comps.size(); ++i)
    if (px.comps[i]->kind == TermKind::Repl) repls.push_back(i);
  if (!repls.empty() && rng.coin())
    px.comps.push_back(px.comps[repls[rng.upto((int)repls.size())]]->t0);
  // restrict a name nothing uses
  if (rng.coin()) {
    std::set<std::string> used = freeNames(c);
    for (const auto& [b, t] : px.binders) used.insert(b);
    px.binders.emplace_back(freshIdent("u", used), tyChan(tyUnit()));
  }
  // rename one binder apart (alpha)
  if (!px.binders.empty() && rng.coin()) {
    size_t i = static_cast<size_t>(rng.upto((int)px.binders.size()));
    std::set<std::string> used = freeNames(c);
    for (const auto& [b, t] : px.binders) used.insert(b);
    std::string fresh = freshIdent("m", used);
    std::string old = px.binders[i].first;
    px.binders[i].first = fresh;
    for (auto& comp : px.comps) comp = renameFreeName(comp, old, fresh);
  }
  // rebuild with a random association of the parallel components
  std::vector<TermPtr> comps = px.comps;
  if (comps.empty()) comps.push_back(mkNil());
  while (comps.size() > 1) {
    size_t i = static_cast<size_t>(rng.upto((int)comps.size() - 1));
    TermPtr merged = rng.coin() ? mkPar(comps[i], comps[i + 1])
                                : mkPar(comps[i + 1], comps[i]);
    comps[i] = merged;
    comps.erase(comps.begin() + static_cast<long>(i) + 1);
  }
  TermPtr body = comps[0];
  for (size_t i = px.binders.size(); i-- > 0;)
    body = mkNew(px.binders[i].first, px.binders[i].second, body);
  return body;
}

std::vector<TermPtr> resourceValueAlphabet(const std::vector<std::string>& triggers) {
  auto callBody = [&](size_t i) -> TermPtr {
    const std::string& k = triggers[i % triggers.size()];
    return mkApp(mkTriggerCall(k), mkVar("x"));
  };
  std::vector<TermPtr> out;
  out.push_back(mkLambda("x", tyUnit(), mkNil()));
  out.push_back(mkLambda("x", tyUnit(), callBody(0)));
  out.push_back(mkLambda("x", tyUnit(), callBody(1)));
  out.push_back(mkLambda("x", tyUnit(), callBody(2)));
  out.push_back(mkLambda("x", tyUnit(), mkPar(callBody(0), callBody(1))));
  return out;
}

TermPtr randomResourceConfig(Rng& rng, const std::vector<std::string>& triggers,
                             int resources, bool withCaller) {
  std::vector<TermPtr> alphabet = resourceValueAlphabet(triggers);
  std::vector<std::string> pool = triggers;
  std::vector<TermPtr> comps;
  for (int i = 0; i < resources && !pool.empty(); ++i) {
    int pickIdx = rng.upto((int)pool.size());
    std::string k = pool[static_cast<size_t>(pickIdx)];
    pool.erase(pool.begin() + pickIdx);
    comps.push_back(mkResource(k, rng.pick(alphabet)));
  }
  if (withCaller)
    comps.push_back(mkApp(mkTriggerCall(rng.pick(triggers)), mkUnit()));
  if (comps.empty()) return mkNil();
  TermPtr body = comps.back();
  for (size_t i = comps.size() - 1; i-- > 0;) body = mkPar(comps[i], body);
  return body;
}

GuardedTriple randomGuardedTriple(Rng& rng) {
  GuardedTriple out;
  Env env = standardEnv();
  const std::string& y = out.y;
  std::vector<TermPtr> pool = {
      // y shipped as a payload
      mkOutput(mkName("d"), mkVar(y), mkNil()),
      mkOutput(mkName("d"), mkVar(y), mkOutput(mkName("a"), mkUnit(), mkNil())),
      // y applied, but only under an input prefix
      mkInput(mkName("a"), "z", tyUnit(), mkApp(mkVar(y), mkUnit())),
      mkInput(mkName("b"), "z", tyUnit(),
              mkPar(mkApp(mkVar(y), mkUnit()), mkOutput(mkName("a"), mkUnit(), mkNil()))),
      // active redexes around it
      mkOutput(mkName("a"), mkUnit(), mkOutput(mkName("d"), mkVar(y), mkNil())),
      mkApp(mkLambda("z", tyUnit(), mkOutput(mkName("d"), mkVar(y), mkNil())), mkUnit()),
      mkMatch(mkName("a"), mkName("a"), mkOutput(mkName("d"), mkVar(y), mkNil()), mkNil()),
      mkMatch(mkName("a"), mkName("b"), mkNil(), mkInput(mkName("a"), "z", tyUnit(), mkApp(mkVar(y), mkUnit()))),
      // plain noise
      mkOutput(mkName("b"), mkUnit(), mkNil()),
      mkInput(mkName("b"), "z", tyUnit(), mkNil()),
  };
  int n = 1 + rng.upto(3);
  TermPtr r = rng.pick(pool);
  for (int i = 1; i < n; ++i) r = mkPar(r, rng.pick(pool));
  out.r = r;
  TypePtr ty = tyAbs(tyUnit());
  out.v = randomValue(rng, env, ty, 2);
  out.w = randomValue(rng, env, ty, 2);
  return out;
}

}  // namespace hopi::gen
