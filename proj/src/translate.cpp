// translate.cpp - plain-calculus translation, testing contexts and probes.
#include "hopi/translate.hpp"

#include <functional>

#include "json.hpp"

#include "hopi/printer.hpp"
#include "hopi/reduction.hpp"
#include "hopi/subst.hpp"
#include "hopi/types.hpp"

namespace hopi {

Env translateEnv(const Env& env) {
  Env out;
  out.channels = env.channels;
  for (const auto& [k, u] : env.triggers) {
    if (out.channels.count(k))
      throw FreshnessViolation("identifier " + k +
                               " is both a channel and a trigger");
    out.channels[k] = tyChan(u);
  }
  return out;
}

TermPtr translateConfig(const Env& theta, const TermPtr& c) {
  if (!c) return c;
  switch (c->kind) {
    case TermKind::TriggerCall: {
      auto it = theta.triggers.find(c->id);
      if (it == theta.triggers.end())
        throw TypeError("translate", c->id, "trigger not declared");
      return mkLambda("x0", it->second,
                      mkOutput(mkName(c->id), mkVar("x0"), mkNil()));
    }
    case TermKind::Resource: {
      auto it = theta.triggers.find(c->id);
      if (it == theta.triggers.end())
        throw TypeError("translate", c->id, "trigger not declared");
      TermPtr v = translateConfig(theta, c->t0);
      std::string y = freshIdent("y", freeVars(v));
      return mkRepl(mkInput(mkName(c->id), y, it->second, mkApp(v, mkVar(y))));
    }
    case TermKind::Lambda:
      return mkLambda(c->id, c->ty, translateConfig(theta, c->t0));
    case TermKind::App:
      return mkApp(translateConfig(theta, c->t0), translateConfig(theta, c->t1));
    case TermKind::Input:
      return mkInput(translateConfig(theta, c->t0), c->id, c->ty,
                     translateConfig(theta, c->t1));
    case TermKind::Output:
      return mkOutput(translateConfig(theta, c->t0), translateConfig(theta, c->t1),
                      translateConfig(theta, c->t2));
    case TermKind::Match:
      return mkMatch(translateConfig(theta, c->t0), translateConfig(theta, c->t1),
                     translateConfig(theta, c->t2), translateConfig(theta, c->t3));
    case TermKind::New:
      return mkNew(c->id, c->ty, translateConfig(theta, c->t0));
    case TermKind::Par:
      return mkPar(translateConfig(theta, c->t0), translateConfig(theta, c->t1));
    case TermKind::Repl:
      return mkRepl(translateConfig(theta, c->t0));
    default:
      return c;  // unit, names, variables, nil
  }
}

TermPtr succProcess(const Env& deltaPrime, const std::string& succ) {
  if (deltaPrime.channels.size() > 1)
    throw std::invalid_argument("success shorthand takes at most one name");
  TermPtr payload = deltaPrime.channels.empty()
                        ? mkUnit()
                        : mkName(deltaPrime.channels.begin()->first);
  return mkOutput(mkName(succ), payload, mkNil());
}

TermPtr internalChoice(const TermPtr& p, const TermPtr& q) {
  std::set<std::string> names = freeNames(p);
  for (const auto& n : freeNames(q)) names.insert(n);
  std::string c = freshIdent("c", names);
  std::set<std::string> vars = freeVars(p);
  for (const auto& v : freeVars(q)) vars.insert(v);
  std::string x = freshIdent("x", vars);
  TermPtr race = mkPar(mkOutput(mkName(c), mkUnit(), mkNil()),
                       mkPar(mkInput(mkName(c), x, tyUnit(), p),
                             mkInput(mkName(c), x, tyUnit(), q)));
  return mkNew(c, tyChan(tyUnit()), race);
}

TermPtr notInTest(const std::string& x, const Env& delta, const TermPtr& thenP,
                  const TermPtr& elseP) {
  TermPtr out = thenP;
  // build inside-out so the cascade tests names in environment order
  for (auto it = delta.channels.rbegin(); it != delta.channels.rend(); ++it)
    out = mkMatch(mkVar(x), mkName(it->first), elseP, out);
  return out;
}

namespace {

// The payload type a label's subject carries, read off the environments.
TypePtr labelPayloadType(const Env& delta, const Env& theta, const Label& a) {
  auto ch = delta.channels.find(a.subject);
  if (ch != delta.channels.end()) {
    TypePtr h = headNormal(ch->second);
    if (h->kind != TypeKind::Chan)
      throw TypeError("testing-context", a.subject, "subject is not channel-typed");
    return h->inner;
  }
  auto tr = theta.triggers.find(a.subject);
  if (tr != theta.triggers.end()) return tr->second;
  throw TypeError("testing-context", a.subject, "unknown label subject");
}

void requireFresh(const Env& delta, const Env& theta, const std::string& id,
                  const char* what) {
  if (id.empty())
    throw FreshnessViolation(std::string(what) + " identifier is empty");
  if (delta.channels.count(id) || theta.triggers.count(id))
    throw FreshnessViolation(std::string(what) + " identifier " + id +
                             " is not fresh for the environments");
}

}  // namespace

TermPtr testingContext(const Env& delta, const Env& theta, const Label& a,
                       const std::string& succ, const std::string& dead) {
  if (a.kind == LabelKind::Tau)
    throw std::invalid_argument("testing contexts exist for visible labels only");
  requireFresh(delta, theta, succ, "success");
  requireFresh(delta, theta, dead, "dead");
  if (succ == dead)
    throw FreshnessViolation("success and dead channels must differ");

  TypePtr w = labelPayloadType(delta, theta, a);
  TypePtr hn = headNormal(w);
  TermPtr d = mkName(a.subject);
  TermPtr succUnit = mkOutput(mkName(succ), mkUnit(), mkNil());

  auto requireFirstOrder = [&]() {
    if (hn->kind != TypeKind::Unit && hn->kind != TypeKind::Chan)
      throw TypeError("testing-context", a.subject,
                      "first-order label at a higher-order payload type");
  };
  auto requireChannelPayload = [&]() {
    if (hn->kind != TypeKind::Chan)
      throw TypeError("testing-context", a.subject,
                      "bound-name label at a non-channel payload type");
  };

  switch (a.kind) {
    case LabelKind::In:
      // the partner inputs: offer the payload, then signal
      requireFirstOrder();
      return mkOutput(d, a.payload, succUnit);
    case LabelKind::Out: {
      requireFirstOrder();
      // the partner outputs: receive and compare; at unit the comparison
      // is vacuous (a single inhabitant) and the guard is omitted
      if (hn->kind == TypeKind::Unit)
        return mkInput(d, "x0", w, succUnit);
      return mkInput(d, "x0", w, mkMatch(mkVar("x0"), a.payload, succUnit, mkNil()));
    }
    case LabelKind::BoundIn: {
      requireFresh(delta, theta, a.bound, "bound");
      requireChannelPayload();
      // send a fresh name and hand it to the success channel
      TermPtr body = mkOutput(d, mkName(a.bound),
                              mkOutput(mkName(succ), mkName(a.bound), mkNil()));
      return mkNew(a.bound, hn, body);
    }
    case LabelKind::BoundOut: {
      requireFresh(delta, theta, a.bound, "bound");
      requireChannelPayload();
      // receive a name and require it to be new: compare against every
      // known name the payload type allows a comparison with
      Env candidates;
      for (const auto& [b, ty] : delta.channels)
        if (typeIso(ty, w)) candidates.channels[b] = ty;
      for (const auto& [k, u] : theta.triggers)
        if (typeIso(tyChan(u), w)) candidates.channels[k] = tyChan(u);
      TermPtr thenP = mkOutput(mkName(succ), mkVar("x0"), mkNil());
      return mkInput(d, "x0", w, notInTest("x0", candidates, thenP, mkNil()));
    }
    case LabelKind::TrigIn: {
      requireFresh(delta, theta, a.bound, "bound");
      if (hn->kind != TypeKind::Abs)
        throw TypeError("testing-context", a.subject,
                        "trigger input at a first-order payload type");
      // offer the forwarder abstraction for the fresh trigger
      TermPtr fwd = mkLambda("x0", hn->inner,
                             mkOutput(mkName(a.bound), mkVar("x0"), mkNil()));
      return mkOutput(d, fwd, succUnit);
    }
    case LabelKind::TrigOut: {
      requireFresh(delta, theta, a.bound, "bound");
      if (hn->kind != TypeKind::Abs)
        throw TypeError("testing-context", a.subject,
                        "trigger output at a first-order payload type");
      // receive the abstraction and install its serving replication
      TermPtr serve = mkRepl(
          mkInput(mkName(a.bound), "y0", hn->inner, mkApp(mkVar("x0"), mkVar("y0"))));
      return mkInput(d, "x0", w, mkPar(serve, succUnit));
    }
    case LabelKind::Tau: break;
  }
  throw std::invalid_argument("unreachable label class");
}

namespace {

// A success component succ!<w>.0 inside a prenex state, if present.
struct SuccShape {
  bool found = false;
  size_t comp = 0;
  TermPtr payload;
};

SuccShape findSucc(const Prenex& px, const std::string& succ) {
  SuccShape s;
  for (size_t i = 0; i < px.comps.size(); ++i) {
    const TermPtr& t = px.comps[i];
    if (t->kind == TermKind::Output && t->t0->kind == TermKind::Name &&
        t->t0->id == succ && t->t2 && t->t2->kind == TermKind::Nil) {
      s.found = true;
      s.comp = i;
      s.payload = t->t1;
      return s;
    }
  }
  return s;
}

// Remove the success component; if its payload was a restricted name, drop
// that binder and rename the name to the label's bound identifier.
TermPtr extractResidue(const Prenex& px, const SuccShape& s, const Label& a) {
  Prenex out;
  std::string boundPayload;
  if (s.payload->kind == TermKind::Name) {
    for (const auto& [b, ty] : px.binders)
      if (b == s.payload->id) boundPayload = b;
  }
  for (const auto& [b, ty] : px.binders)
    if (b != boundPayload) out.binders.emplace_back(b, ty);
  for (size_t i = 0; i < px.comps.size(); ++i)
    if (i != s.comp) out.comps.push_back(px.comps[i]);
  if (out.comps.empty()) out.comps.push_back(mkNil());
  TermPtr res = fromPrenex(out);
  if (!boundPayload.empty() && !a.bound.empty() && boundPayload != a.bound)
    res = renameFreeName(res, boundPayload, a.bound);
  return structNormal(res);
}

}  // namespace

ProbeResult probeLabel(const Env& delta, const Env& theta, const TermPtr& d,
                       const Label& a, const ProbeBudgets& budgets) {
  Env base;
  base.channels = delta.channels;
  base.triggers = theta.triggers;
  checkConfig(base, d);
  if (!isBalanced(d))
    throw TypeError("probe", print(d), "configuration is not balanced");

  Env plain = translateEnv(base);
  std::set<std::string> used;
  for (const auto& [n, ty] : plain.channels) used.insert(n);
  if (!a.bound.empty()) used.insert(a.bound);
  ProbeResult res;
  res.succChannel = freshIdent("succ", used);
  used.insert(res.succChannel);
  res.deadChannel = freshIdent("dead", used);

  TermPtr test = testingContext(delta, theta, a, res.succChannel, res.deadChannel);
  TypePtr w = labelPayloadType(delta, theta, a);
  TypePtr hn = headNormal(w);

  Env sys = plain;
  TypePtr succPayload =
      (a.kind == LabelKind::BoundIn || a.kind == LabelKind::BoundOut) ? w : tyUnit();
  sys.channels[res.succChannel] = tyChan(succPayload);
  sys.channels[res.deadChannel] = tyChan(tyUnit());
  if (a.kind == LabelKind::TrigIn || a.kind == LabelKind::TrigOut)
    sys.channels[a.bound] = tyChan(hn->inner);

  TermPtr composed = mkPar(test, translateConfig(base, d));
  checkConfig(sys, composed);

  ReachResult reach = reduceMulti(composed, budgets.reduceSteps, budgets.reduceStates);
  res.truncated = reach.truncated;

  // reference answer: the weak derivatives of the label in the source world
  bool weakComputed = false;
  WeakResult derivatives;
  auto weakDerivatives = [&]() -> const WeakResult& {
    if (!weakComputed) {
      derivatives = weakAfter(makeNode(base, d), a, budgets.weak);
      weakComputed = true;
      res.truncated = res.truncated || derivatives.truncated;
    }
    return derivatives;
  };

  for (const TermPtr& state : reach.states) {
    if (immediateBarbs(state).count(res.deadChannel)) res.deadBarb = true;
    Prenex px = toPrenex(state);
    SuccShape s = findSucc(px, res.succChannel);
    if (!s.found) continue;
    TermPtr residue = extractResidue(px, s, a);
    if (!res.reached) {
      res.reached = true;
      res.residue = print(residue);
    }
    if (!res.factorizationFound) {
      for (const TypedNode& node : weakDerivatives().nodes) {
        TermPtr image = translateConfig(node.env, node.config);
        for (const TermPtr& h : hClosure(image))
          if (structEquiv(h, residue)) {
            res.factorizationFound = true;
            break;
          }
        if (res.factorizationFound) break;
      }
    }
    if (res.reached && res.factorizationFound && res.deadBarb) break;
  }
  return res;
}

std::string probeToJson(const ProbeResult& r) {
  nlohmann::json j;
  j["reached"] = r.reached;
  j["residue"] = r.residue;
  j["factorizationFound"] = r.factorizationFound;
  j["truncated"] = r.truncated;
  j["deadBarb"] = r.deadBarb;
  j["succ"] = r.succChannel;
  j["dead"] = r.deadChannel;
  return j.dump(2);
}

}  // namespace hopi
