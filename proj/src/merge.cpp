// merge.cpp - reference graphs and resource elimination.
#include "hopi/merge.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "hopi/printer.hpp"
#include "hopi/reduction.hpp"
#include "hopi/subst.hpp"

namespace hopi {

RefGraph refGraph(const TermPtr& c) {
  RefGraph g;
  std::function<void(const TermPtr&)> walk = [&](const TermPtr& t) {
    if (!t) return;
    if (t->kind == TermKind::Resource) {
      g.vertices.insert(t->id);
      for (const auto& l : triggerIdents(t->t0))
        if (containsCall(t->t0, l)) g.edges.emplace(t->id, l);
    }
    walk(t->t0);
    walk(t->t1);
    walk(t->t2);
    walk(t->t3);
  };
  walk(c);
  return g;
}

std::vector<std::string> findCycle(const RefGraph& g) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [k, l] : g.edges) adj[k].push_back(l);
  std::map<std::string, int> mark;  // 0 unseen, 1 on stack, 2 finished
  std::vector<std::string> stack, cycle;
  std::function<bool(const std::string&)> dfs = [&](const std::string& v) {
    mark[v] = 1;
    stack.push_back(v);
    for (const auto& w : adj[v]) {
      if (mark[w] == 1) {
        auto it = std::find(stack.begin(), stack.end(), w);
        cycle.assign(it, stack.end());
        cycle.push_back(w);
        return true;
      }
      if (mark[w] == 0 && dfs(w)) return true;
    }
    stack.pop_back();
    mark[v] = 2;
    return false;
  };
  for (const auto& v : g.vertices)
    if (mark[v] == 0 && dfs(v)) return cycle;
  return {};
}

bool isAcyclic(const RefGraph& g) { return findCycle(g).empty(); }

namespace {

// Identifier order used for the canonical elimination choice: shorter ids
// first, ties lexicographic — so k2 precedes k10.
bool identLess(const std::string& a, const std::string& b) {
  return a.size() != b.size() ? a.size() < b.size() : a < b;
}

struct Candidates {
  std::vector<size_t> resourceComps;  // indices into prenex comps
  std::vector<size_t> eligible;       // those without a self-reference
};

Candidates scanResources(const Prenex& px) {
  Candidates c;
  for (size_t i = 0; i < px.comps.size(); ++i) {
    const TermPtr& t = px.comps[i];
    if (t->kind != TermKind::Resource) continue;
    c.resourceComps.push_back(i);
    if (!containsCall(t->t0, t->id)) c.eligible.push_back(i);
  }
  return c;
}

// Eliminate the resource at comp index e: drop it, substitute its value for
// its calls in every other component, renormalize.
TermPtr eliminate(const Prenex& px, size_t e) {
  const std::string& k = px.comps[e]->id;
  const TermPtr& v = px.comps[e]->t0;
  Prenex out;
  out.binders = px.binders;
  for (size_t i = 0; i < px.comps.size(); ++i) {
    if (i == e) continue;
    out.comps.push_back(substTrigger(px.comps[i], k, v));
  }
  if (out.comps.empty()) out.comps.push_back(mkNil());
  return structNormal(fromPrenex(out));
}

}  // namespace

MergeStepResult mergeStep(const TermPtr& c) {
  Prenex px = toPrenex(structNormal(c));
  Candidates cand = scanResources(px);
  MergeStepResult r;
  if (cand.resourceComps.empty()) {
    r.kind = MergeStepKind::Done;
    return r;
  }
  if (cand.eligible.empty()) {
    r.kind = MergeStepKind::Stuck;
    return r;
  }
  size_t pick = cand.eligible[0];
  for (size_t i : cand.eligible)
    if (identLess(px.comps[i]->id, px.comps[pick]->id)) pick = i;
  r.kind = MergeStepKind::Next;
  r.eliminated = px.comps[pick]->id;
  r.next = eliminate(px, pick);
  return r;
}

MergeResult merge(const TermPtr& c) {
  MergeResult out;
  TermPtr cur = structNormal(c);
  // each step removes one resource, so this terminates
  for (;;) {
    MergeStepResult s = mergeStep(cur);
    if (s.kind == MergeStepKind::Next) {
      cur = s.next;
      continue;
    }
    if (s.kind == MergeStepKind::Done) {
      out.defined = true;
      out.residue = cur;
      return out;
    }
    // stuck: report a cycle of the *input's* reference graph
    out.defined = false;
    out.cycle = findCycle(refGraph(c));
    if (out.cycle.empty()) out.cycle = findCycle(refGraph(cur));
    return out;
  }
}

std::vector<TermPtr> mergeAllOrders(const TermPtr& c, size_t maxResidues) {
  std::vector<TermPtr> out;
  std::set<std::string> seenStates, residueKeys;
  std::function<void(const TermPtr&)> explore = [&](const TermPtr& cur) {
    if (out.size() >= maxResidues) return;
    if (!seenStates.insert(print(canonicalTerm(cur))).second) return;
    Prenex px = toPrenex(structNormal(cur));
    Candidates cand = scanResources(px);
    if (cand.resourceComps.empty()) {
      TermPtr residue = structNormal(cur);
      if (residueKeys.insert(print(canonicalTerm(residue))).second)
        out.push_back(residue);
      return;
    }
    for (size_t i : cand.eligible) explore(eliminate(px, i));
  };
  explore(structNormal(c));
  return out;
}

}  // namespace hopi
