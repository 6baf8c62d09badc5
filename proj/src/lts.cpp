// lts.cpp - labels, typed nodes and the labelled transition relation.
#include "hopi/lts.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <stdexcept>

#include "json.hpp"

#include "hopi/printer.hpp"
#include "hopi/reduction.hpp"
#include "hopi/subst.hpp"
#include "hopi/types.hpp"

namespace hopi {

// ------------------------------------------------------------------ labels ---

std::string printLabel(const Label& l) {
  switch (l.kind) {
    case LabelKind::Tau: return "tau";
    case LabelKind::In: return l.subject + "?" + print(l.payload);
    case LabelKind::Out: return l.subject + "!" + print(l.payload);
    case LabelKind::BoundIn:
      return "(" + l.bound + ")" + l.subject + "?" + l.bound;
    case LabelKind::BoundOut:
      return "(" + l.bound + ")" + l.subject + "!" + l.bound;
    case LabelKind::TrigIn: return l.subject + "?(" + l.bound + ")";
    case LabelKind::TrigOut: return l.subject + "!(" + l.bound + ")";
  }
  return "?";
}

Label parseLabel(const std::string& text) {
  auto fail = [&]() -> void {
    throw std::invalid_argument("unreadable label: " + text);
  };
  auto ident = [&](size_t& i) {
    size_t start = i;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                               text[i] == '_' || text[i] == '\''))
      ++i;
    if (i == start) fail();
    return text.substr(start, i - start);
  };
  if (text == "tau") return Label{};
  Label l;
  size_t i = 0;
  std::string binder;
  if (text[0] == '(') {
    i = 1;
    binder = ident(i);
    if (i >= text.size() || text[i] != ')') fail();
    ++i;
  }
  l.subject = ident(i);
  if (i >= text.size() || (text[i] != '?' && text[i] != '!')) fail();
  bool in = text[i] == '?';
  ++i;
  if (!binder.empty()) {
    // (b)d?b / (b)d!b
    if (ident(i) != binder || i != text.size()) fail();
    l.kind = in ? LabelKind::BoundIn : LabelKind::BoundOut;
    l.bound = binder;
    return l;
  }
  if (i < text.size() && text[i] == '(') {
    size_t j = i + 1;
    if (j < text.size() && text[j] == ')') {
      // unit payload
      if (j + 1 != text.size()) fail();
      l.kind = in ? LabelKind::In : LabelKind::Out;
      l.payload = mkUnit();
      return l;
    }
    std::string k = ident(++i);
    if (i >= text.size() || text[i] != ')' || i + 1 != text.size()) fail();
    l.kind = in ? LabelKind::TrigIn : LabelKind::TrigOut;
    l.bound = k;
    return l;
  }
  std::string b = ident(i);
  if (i != text.size()) fail();
  l.kind = in ? LabelKind::In : LabelKind::Out;
  l.payload = mkName(b);
  return l;
}

bool labelEq(const Label& a, const Label& b) {
  return a.kind == b.kind && a.subject == b.subject && a.bound == b.bound &&
         termEq(a.payload, b.payload);
}

Label complement(const Label& l) {
  Label out = l;
  switch (l.kind) {
    case LabelKind::Tau:
      throw std::invalid_argument("tau has no complement");
    case LabelKind::In: out.kind = LabelKind::Out; break;
    case LabelKind::Out: out.kind = LabelKind::In; break;
    case LabelKind::BoundIn: out.kind = LabelKind::BoundOut; break;
    case LabelKind::BoundOut: out.kind = LabelKind::BoundIn; break;
    case LabelKind::TrigIn: out.kind = LabelKind::TrigOut; break;
    case LabelKind::TrigOut: out.kind = LabelKind::TrigIn; break;
  }
  return out;
}

// ------------------------------------------------------------------- nodes ---

TypedNode makeNode(const Env& env, const TermPtr& config) {
  TypedNode n;
  n.env.channels = env.channels;
  n.env.triggers = env.triggers;
  for (auto& [a, ty] : n.env.channels) ty = alphaCanonicalType(ty);
  for (auto& [k, ty] : n.env.triggers) ty = alphaCanonicalType(ty);
  std::set<std::string> avoid;
  for (const auto& [a, ty] : n.env.channels) avoid.insert(a);
  for (const auto& [k, ty] : n.env.triggers) avoid.insert(k);
  n.config = canonicalTerm(config, avoid);
  n.key = printEnvHeader(n.env) + print(n.config);
  return n;
}

std::string freshLabelChannel(const Env& env) {
  std::set<std::string> used;
  for (const auto& [a, ty] : env.channels) used.insert(a);
  return freshIdent("b", used);
}

std::string freshLabelTrigger(const Env& env) {
  std::set<std::string> used;
  for (const auto& [k, ty] : env.triggers) used.insert(k);
  return freshIdent("k", used);
}

// ------------------------------------------------------------- transitions ---

namespace {

// Payload values a first-order input can receive from the observer: the
// unit value, every known name of the right type, and one fresh channel.
struct FirstOrderPayloads {
  std::vector<TermPtr> known;
  bool freshChannel = false;  // payload type is a channel type
  TypePtr freshType;          // head-normalized channel type for the binder
};

FirstOrderPayloads enumeratePayloads(const Env& env, const TypePtr& payloadTy) {
  FirstOrderPayloads out;
  TypePtr h = headNormal(payloadTy);
  if (h->kind == TypeKind::Unit) {
    out.known.push_back(mkUnit());
    return out;
  }
  if (h->kind == TypeKind::Chan) {
    for (const auto& [b, ty] : env.channels)
      if (typeIso(ty, payloadTy)) out.known.push_back(mkName(b));
    out.freshChannel = true;
    out.freshType = h;
    return out;
  }
  throw TypeError("lts", printType(payloadTy), "payload type is not first-order");
}

struct TransitionBuilder {
  const TypedNode& node;
  Soup soup;
  std::set<std::string> bound;
  std::vector<Transition> out;

  explicit TransitionBuilder(const TypedNode& n)
      : node(n), soup(buildSoup(n.config)), bound(soup.boundNames()) {}

  // The binder annotation for an extruded restricted name.
  TypePtr binderType(const std::string& b) const {
    for (const auto& [n, ty] : soup.px.binders)
      if (n == b) return ty;
    for (const auto& bs : soup.copyBinders)
      for (const auto& [n, ty] : bs)
        if (n == b) return ty;
    throw std::logic_error("extruded name has no binder: " + b);
  }

  void emit(const Label& label, const Env& env, const TermPtr& config) {
    TypedNode target = makeNode(env, config);
    checkConfig(target.env, target.config);  // every edge stays well-typed
    out.push_back(Transition{label, target});
  }

  // input prefix or resource interrogation at a first-order payload type
  void firstOrderReceive(size_t e, const std::string& subject, const TypePtr& payloadTy,
                         const std::function<TermPtr(const TermPtr&)>& instantiate,
                         bool keepEntry) {
    FirstOrderPayloads ps = enumeratePayloads(node.env, payloadTy);
    for (const auto& v : ps.known) {
      Label l;
      l.kind = LabelKind::In;
      l.subject = subject;
      l.payload = v;
      std::vector<TermPtr> repl{instantiate(v)};
      if (keepEntry) repl.push_back(soup.entries[e].t);
      emit(l, node.env, rebuildSoup(soup, {{e, repl}}));
    }
    if (ps.freshChannel) {
      std::string b = freshLabelChannel(node.env);
      Label l;
      l.kind = LabelKind::BoundIn;
      l.subject = subject;
      l.bound = b;
      Env env2 = node.env;
      env2.channels[b] = ps.freshType;
      std::vector<TermPtr> repl{instantiate(mkName(b))};
      if (keepEntry) repl.push_back(soup.entries[e].t);
      emit(l, env2, rebuildSoup(soup, {{e, repl}}));
    }
  }

  // first-order emission: free payload or extrusion of a restricted name
  void firstOrderSend(size_t e, const std::string& subject, const TermPtr& v,
                      const std::vector<TermPtr>& remainder) {
    if (v->kind == TermKind::UnitVal ||
        (v->kind == TermKind::Name && !bound.count(v->id))) {
      Label l;
      l.kind = LabelKind::Out;
      l.subject = subject;
      l.payload = v;
      emit(l, node.env, rebuildSoup(soup, {{e, remainder}}));
      return;
    }
    if (v->kind == TermKind::Name) {
      // bound output: extrude the restriction under a canonical fresh name
      std::string fresh = freshLabelChannel(node.env);
      Label l;
      l.kind = LabelKind::BoundOut;
      l.subject = subject;
      l.bound = fresh;
      Env env2 = node.env;
      env2.channels[fresh] = alphaCanonicalType(binderType(v->id));
      TermPtr raw = rebuildSoup(soup, {{e, remainder}}, {v->id});
      emit(l, env2, renameFreeName(raw, v->id, fresh));
      return;
    }
    throw TypeError("lts", print(v), "first-order payload is neither unit nor a name");
  }

  void run() {
    // tau: exactly the reduction steps
    for (const auto& st : reduceStep(node.config)) {
      Label l;
      emit(l, node.env, st.target);
    }

    for (size_t e = 0; e < soup.entries.size(); ++e) {
      const TermPtr& t = soup.entries[e].t;
      switch (t->kind) {
        case TermKind::Input: {
          if (t->t0->kind != TermKind::Name || bound.count(t->t0->id)) break;
          const std::string& a = t->t0->id;
          TypePtr chTy = node.env.channels.at(a);
          TypePtr payloadTy = headNormal(chTy)->inner;
          TypePtr h = headNormal(payloadTy);
          if (h->kind == TypeKind::Abs) {
            // receive a fresh trigger in place of an abstraction
            std::string k = freshLabelTrigger(node.env);
            Label l;
            l.kind = LabelKind::TrigIn;
            l.subject = a;
            l.bound = k;
            Env env2 = node.env;
            env2.triggers[k] = alphaCanonicalType(h->inner);
            TermPtr app =
                mkApp(mkLambda(t->id, t->ty, t->t1), mkTriggerCall(k));
            emit(l, env2, rebuildSoup(soup, {{e, {app}}}));
          } else {
            TermPtr lam = mkLambda(t->id, t->ty, t->t1);
            firstOrderReceive(
                e, a, payloadTy,
                [&](const TermPtr& v) { return mkApp(lam, v); }, false);
          }
          break;
        }
        case TermKind::Output: {
          if (t->t0->kind != TermKind::Name || bound.count(t->t0->id)) break;
          const std::string& a = t->t0->id;
          TypePtr payloadTy = headNormal(node.env.channels.at(a))->inner;
          TypePtr h = headNormal(payloadTy);
          if (h->kind == TypeKind::Abs) {
            // ship the abstraction into a fresh resource
            std::string k = freshLabelTrigger(node.env);
            Label l;
            l.kind = LabelKind::TrigOut;
            l.subject = a;
            l.bound = k;
            Env env2 = node.env;
            env2.triggers[k] = alphaCanonicalType(h->inner);
            emit(l, env2,
                 rebuildSoup(soup, {{e, {mkResource(k, t->t1), t->t2}}}));
          } else {
            firstOrderSend(e, a, t->t1, {t->t2});
          }
          break;
        }
        case TermKind::Resource: {
          const std::string& k = t->id;
          TypePtr u = node.env.triggers.at(k);
          TypePtr h = headNormal(u);
          if (h->kind == TypeKind::Abs) {
            // interrogate with a fresh trigger
            std::string l2 = freshLabelTrigger(node.env);
            Label l;
            l.kind = LabelKind::TrigIn;
            l.subject = k;
            l.bound = l2;
            Env env2 = node.env;
            env2.triggers[l2] = alphaCanonicalType(h->inner);
            TermPtr app = mkApp(t->t0, mkTriggerCall(l2));
            emit(l, env2, rebuildSoup(soup, {{e, {app, t}}}));
          } else {
            TermPtr stored = t->t0;
            firstOrderReceive(
                e, k, u, [&](const TermPtr& v) { return mkApp(stored, v); },
                true);
          }
          break;
        }
        case TermKind::App: {
          if (t->t0->kind != TermKind::TriggerCall) break;
          const std::string& k = t->t0->id;
          TypePtr u = node.env.triggers.at(k);
          TypePtr h = headNormal(u);
          if (h->kind == TypeKind::Abs) {
            std::string l2 = freshLabelTrigger(node.env);
            Label l;
            l.kind = LabelKind::TrigOut;
            l.subject = k;
            l.bound = l2;
            Env env2 = node.env;
            env2.triggers[l2] = alphaCanonicalType(h->inner);
            emit(l, env2, rebuildSoup(soup, {{e, {mkResource(l2, t->t1)}}}));
          } else {
            firstOrderSend(e, k, t->t1, {});
          }
          break;
        }
        default: break;
      }
    }

    std::stable_sort(out.begin(), out.end(), [](const Transition& a, const Transition& b) {
      std::string la = printLabel(a.label), lb = printLabel(b.label);
      return la != lb ? la < lb : a.target.key < b.target.key;
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Transition& a, const Transition& b) {
                            return labelEq(a.label, b.label) &&
                                   a.target.key == b.target.key;
                          }),
              out.end());
  }
};

}  // namespace

std::vector<Transition> deriveTransitions(const TypedNode& node) {
  TransitionBuilder b(node);
  b.run();
  return b.out;
}

// ------------------------------------------------------------ weak closure ---

WeakResult tauClosure(const TypedNode& node, const WeakBudget& budget) {
  WeakResult out;
  std::set<std::string> seen{node.key};
  out.nodes.push_back(node);
  std::deque<std::pair<TypedNode, int>> queue{{node, 0}};
  while (!queue.empty()) {
    auto [n, d] = queue.front();
    queue.pop_front();
    if (d >= budget.tauSteps) {
      for (const auto& tr : deriveTransitions(n))
        if (tr.label.kind == LabelKind::Tau && !seen.count(tr.target.key)) {
          out.truncated = true;
          break;
        }
      continue;
    }
    for (const auto& tr : deriveTransitions(n)) {
      if (tr.label.kind != LabelKind::Tau) continue;
      if (!seen.insert(tr.target.key).second) continue;
      if (static_cast<int>(out.nodes.size()) >= budget.maxStates) {
        out.truncated = true;
        continue;
      }
      out.nodes.push_back(tr.target);
      queue.emplace_back(tr.target, d + 1);
    }
  }
  return out;
}

WeakResult weakAfter(const TypedNode& node, const Label& label, const WeakBudget& budget) {
  WeakResult pre = tauClosure(node, budget);
  if (label.kind == LabelKind::Tau) return pre;
  WeakResult out;
  out.truncated = pre.truncated;
  std::set<std::string> seen;
  for (const auto& n : pre.nodes) {
    for (const auto& tr : deriveTransitions(n)) {
      if (!labelEq(tr.label, label)) continue;
      WeakResult post = tauClosure(tr.target, budget);
      out.truncated = out.truncated || post.truncated;
      for (const auto& m : post.nodes)
        if (seen.insert(m.key).second) out.nodes.push_back(m);
    }
  }
  return out;
}

// ------------------------------------------------------------------- graph ---

LtsGraph buildLts(const TypedNode& root, int maxDepth, int maxNodes) {
  LtsGraph g;
  std::map<std::string, int> index;
  g.nodes.push_back(root);
  index[root.key] = 0;
  std::deque<std::pair<int, int>> queue{{0, 0}};
  while (!queue.empty()) {
    auto [i, d] = queue.front();
    queue.pop_front();
    if (d >= maxDepth) {
      if (!deriveTransitions(g.nodes[i]).empty()) g.truncated = true;
      continue;
    }
    for (const auto& tr : deriveTransitions(g.nodes[i])) {
      auto it = index.find(tr.target.key);
      int j;
      if (it != index.end()) {
        j = it->second;
      } else if (static_cast<int>(g.nodes.size()) >= maxNodes) {
        g.truncated = true;
        continue;
      } else {
        j = static_cast<int>(g.nodes.size());
        g.nodes.push_back(tr.target);
        index[tr.target.key] = j;
        queue.emplace_back(j, d + 1);
      }
      g.edges.push_back(LtsEdge{i, j, tr.label});
    }
  }
  return g;
}

std::string ltsToJson(const LtsGraph& g) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    nlohmann::json n;
    n["id"] = i;
    nlohmann::json delta = nlohmann::json::object();
    for (const auto& [a, ty] : g.nodes[i].env.channels) delta[a] = printType(ty);
    nlohmann::json theta = nlohmann::json::object();
    for (const auto& [k, ty] : g.nodes[i].env.triggers) theta[k] = printType(ty);
    n["delta"] = delta;
    n["theta"] = theta;
    n["term"] = print(g.nodes[i].config);
    j["nodes"].push_back(n);
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges) {
    nlohmann::json ej;
    ej["src"] = e.src;
    ej["label"] = printLabel(e.label);
    ej["dst"] = e.dst;
    j["edges"].push_back(ej);
  }
  j["root"] = g.root;
  j["truncated"] = g.truncated;
  return j.dump(2);
}

}  // namespace hopi
