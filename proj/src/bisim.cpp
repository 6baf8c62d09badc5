// bisim.cpp - the bounded weak-bisimulation game with memoized pairs,
// iterative deepening and witness construction.
#include "hopi/bisim.hpp"

#include <climits>
#include <deque>
#include <map>
#include <set>

#include "json.hpp"

#include "hopi/printer.hpp"
#include "hopi/types.hpp"

namespace hopi {

namespace {

struct Attack {
  bool valid = false;
  int side = 0;
  Label label;
  TypedNode succ;
};

// What the game has established about one ordered pair: safe up to eqDepth
// attacker moves (with a flag when a budget cut makes that unconfirmed) and
// distinguished from distDepth on, by the stored attack.
struct PairInfo {
  int eqDepth = 0;
  bool eqTruncated = false;
  int distDepth = INT_MAX;
  Attack attack;
};

struct Game {
  WeakBudget budget;
  std::map<std::string, PairInfo> memo;
  std::map<std::string, std::vector<Transition>> transCache;

  explicit Game(const WeakBudget& b) : budget(b) {}

  const std::vector<Transition>& trans(const TypedNode& n) {
    auto it = transCache.find(n.key);
    if (it == transCache.end())
      it = transCache.emplace(n.key, deriveTransitions(n)).first;
    return it->second;
  }

  // tau closure / weak transition sharing this game's transition cache
  WeakResult closure(const TypedNode& node) {
    WeakResult out;
    std::set<std::string> seen{node.key};
    out.nodes.push_back(node);
    std::deque<std::pair<TypedNode, int>> queue{{node, 0}};
    while (!queue.empty()) {
      auto [n, d] = queue.front();
      queue.pop_front();
      for (const auto& tr : trans(n)) {
        if (tr.label.kind != LabelKind::Tau) continue;
        if (seen.count(tr.target.key)) continue;
        if (d >= budget.tauSteps ||
            static_cast<int>(out.nodes.size()) >= budget.maxStates) {
          out.truncated = true;
          continue;
        }
        seen.insert(tr.target.key);
        out.nodes.push_back(tr.target);
        queue.emplace_back(tr.target, d + 1);
      }
    }
    return out;
  }

  WeakResult weak(const TypedNode& node, const Label& label) {
    WeakResult pre = closure(node);
    if (label.kind == LabelKind::Tau) return pre;
    WeakResult out;
    out.truncated = pre.truncated;
    std::set<std::string> seen;
    for (const auto& n : pre.nodes)
      for (const auto& tr : trans(n)) {
        if (!labelEq(tr.label, label)) continue;
        WeakResult post = closure(tr.target);
        out.truncated = out.truncated || post.truncated;
        for (const auto& m : post.nodes)
          if (seen.insert(m.key).second) out.nodes.push_back(m);
      }
    return out;
  }

  static std::string pairKey(const TypedNode& a, const TypedNode& b) {
    return a.key + "\x01" + b.key;
  }

  // True when the attacker wins within d moves.  `trunc` reports that a
  // budget cut may have hidden a winning attack, so "false" is unconfirmed.
  bool play(const TypedNode& L, const TypedNode& R, int d, bool& trunc) {
    if (L.key == R.key) return false;  // identical nodes answer in lockstep
    if (d <= 0) return false;
    PairInfo& info = memo[pairKey(L, R)];
    if (info.distDepth <= d) return true;
    if (d <= info.eqDepth) {
      trunc = trunc || info.eqTruncated;
      return false;
    }
    bool sawCut = false;
    for (int side = 0; side < 2; ++side) {
      const TypedNode& mover = side == 0 ? L : R;
      const TypedNode& other = side == 0 ? R : L;
      for (const auto& tr : trans(mover)) {
        WeakResult matches = weak(other, tr.label);
        if (matches.truncated) {
          // an unexplored defender answer may exist: never a win
          sawCut = true;
          continue;
        }
        bool allDistinguished = true;
        for (const auto& m : matches.nodes) {
          const TypedNode& L2 = side == 0 ? tr.target : m;
          const TypedNode& R2 = side == 0 ? m : tr.target;
          bool subTrunc = false;
          if (!play(L2, R2, d - 1, subTrunc)) {
            allDistinguished = false;
            sawCut = sawCut || subTrunc;
            break;
          }
        }
        if (allDistinguished) {
          PairInfo& cur = memo[pairKey(L, R)];  // recursion may rehash
          if (d < cur.distDepth) {
            cur.distDepth = d;
            cur.attack = Attack{true, side, tr.label, tr.target};
          }
          return true;
        }
      }
    }
    PairInfo& cur = memo[pairKey(L, R)];
    if (d > cur.eqDepth) {
      cur.eqDepth = d;
      cur.eqTruncated = sawCut;
    }
    trunc = trunc || sawCut;
    return false;
  }

  // Follow stored attacks, picking the first defender answer each time; the
  // trace ends at a pair whose attack has no defender answer at all.
  void buildWitness(const TypedNode& L, const TypedNode& R, int d,
                    std::vector<WitnessStep>& steps) {
    const PairInfo& info = memo.at(pairKey(L, R));
    const Attack& a = info.attack;
    steps.push_back(WitnessStep{L, R, a.side, a.label});
    const TypedNode& other = a.side == 0 ? R : L;
    WeakResult matches = weak(other, a.label);
    for (const auto& m : matches.nodes) {
      const TypedNode& L2 = a.side == 0 ? a.succ : m;
      const TypedNode& R2 = a.side == 0 ? m : a.succ;
      bool subTrunc = false;
      if (play(L2, R2, d - 1, subTrunc)) {
        buildWitness(L2, R2, d - 1, steps);
        return;
      }
    }
    // no defender answer: the trace is complete
  }
};

std::string envDiff(const Env& a, const Env& b) {
  auto describe = [](const char* what, const std::map<std::string, TypePtr>& m,
                     const std::map<std::string, TypePtr>& n) -> std::string {
    for (const auto& [k, ty] : m) {
      auto it = n.find(k);
      if (it == n.end()) return std::string(what) + " " + k + " only on one side";
      if (!typeEq(ty, it->second))
        return std::string(what) + " " + k + " typed " + printType(ty) + " vs " +
               printType(it->second);
    }
    for (const auto& [k, ty] : n)
      if (!m.count(k)) return std::string(what) + " " + k + " only on one side";
    return "";
  };
  std::string d = describe("channel", a.channels, b.channels);
  if (d.empty()) d = describe("trigger", a.triggers, b.triggers);
  return d;
}

}  // namespace

BisimVerdict bisimCheck(const TypedNode& n, const TypedNode& m, int depth,
                        const WeakBudget& budget) {
  BisimVerdict v;
  if (!envEq(n.env, m.env)) {
    v.kind = VerdictKind::MismatchedEnvironments;
    v.detail = envDiff(n.env, m.env);
    return v;
  }
  Game g(budget);
  bool lastTrunc = false;
  for (int d = 1; d <= depth; ++d) {
    bool trunc = false;
    if (g.play(n, m, d, trunc)) {
      v.kind = VerdictKind::Distinguished;
      g.buildWitness(n, m, d, v.witness);
      v.depth = static_cast<int>(v.witness.size());
      return v;
    }
    lastTrunc = trunc;
  }
  v.kind = VerdictKind::EquivalentToDepth;
  v.depth = depth;
  v.truncated = lastTrunc;
  return v;
}

BisimVerdict bisimClosedHOpi(const Env& delta, const TermPtr& p, const TermPtr& q,
                             int depth, const WeakBudget& budget) {
  Env env;
  env.channels = delta.channels;
  checkConfig(env, p);
  checkConfig(env, q);
  return bisimCheck(makeNode(env, p), makeNode(env, q), depth, budget);
}

bool validateWitness(const TypedNode& n, const TypedNode& m, const BisimVerdict& v,
                     const WeakBudget& budget) {
  if (v.kind != VerdictKind::Distinguished || v.witness.empty()) return false;
  if (v.witness[0].left.key != n.key || v.witness[0].right.key != m.key)
    return false;
  for (size_t i = 0; i < v.witness.size(); ++i) {
    const WitnessStep& s = v.witness[i];
    const TypedNode& mover = s.side == 0 ? s.left : s.right;
    const TypedNode& other = s.side == 0 ? s.right : s.left;
    // the label must be a strong move of the recorded side
    bool enabled = false;
    std::set<std::string> succKeys;
    for (const auto& tr : deriveTransitions(mover))
      if (labelEq(tr.label, s.label)) {
        enabled = true;
        succKeys.insert(tr.target.key);
      }
    if (!enabled) return false;
    WeakResult matches = weakAfter(other, s.label, budget);
    if (i + 1 == v.witness.size()) {
      // final step: unanswerable within budget, and the search was complete
      if (!matches.nodes.empty() || matches.truncated) return false;
    } else {
      const WitnessStep& next = v.witness[i + 1];
      const TypedNode& moverNext = s.side == 0 ? next.left : next.right;
      const TypedNode& otherNext = s.side == 0 ? next.right : next.left;
      if (!succKeys.count(moverNext.key)) return false;
      bool found = false;
      for (const auto& mm : matches.nodes)
        if (mm.key == otherNext.key) found = true;
      if (!found) return false;
    }
  }
  return true;
}

std::string explainWitness(const BisimVerdict& v, const WeakBudget& budget) {
  if (v.kind != VerdictKind::Distinguished) return "no witness: verdict is not Distinguished\n";
  std::string out;
  for (size_t i = 0; i < v.witness.size(); ++i) {
    const WitnessStep& s = v.witness[i];
    const char* who = s.side == 0 ? "left" : "right";
    const char* opp = s.side == 0 ? "right" : "left";
    out += "step " + std::to_string(i + 1) + ": " + who + " plays " +
           printLabel(s.label) + "\n";
    out += "  left:  " + print(s.left.config) + "\n";
    out += "  right: " + print(s.right.config) + "\n";
    if (i + 1 == v.witness.size()) {
      const TypedNode& other = s.side == 0 ? s.right : s.left;
      WeakResult matches = weakAfter(other, s.label, budget);
      out += "  " + std::string(opp) + " has no weak " + printLabel(s.label) +
             " answer (" + std::to_string(matches.nodes.size()) +
             " candidates searched, tau budget " + std::to_string(budget.tauSteps) +
             ")\n";
    } else {
      out += "  every " + std::string(opp) +
             " answer stays distinguished; continuing\n";
    }
  }
  return out;
}

std::string verdictToJson(const BisimVerdict& v) {
  nlohmann::json j;
  switch (v.kind) {
    case VerdictKind::EquivalentToDepth: j["verdict"] = "equivalent-to-depth"; break;
    case VerdictKind::Distinguished: j["verdict"] = "distinguished"; break;
    case VerdictKind::MismatchedEnvironments:
      j["verdict"] = "mismatched-environments";
      j["detail"] = v.detail;
      break;
  }
  j["depth"] = v.depth;
  j["truncated"] = v.truncated;
  j["witness"] = nlohmann::json::array();
  for (const auto& s : v.witness) {
    nlohmann::json sj;
    sj["label"] = printLabel(s.label);
    sj["side"] = s.side == 0 ? "left" : "right";
    sj["pair"] = {{"left", print(s.left.config)}, {"right", print(s.right.config)}};
    j["witness"].push_back(sj);
  }
  return j.dump(2);
}

}  // namespace hopi
