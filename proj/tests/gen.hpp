// gen.hpp - deterministic random generators shared by the test suites.
// The seed comes from HOPI_SEED when set, so failures replay exactly.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hopi/syntax.hpp"

namespace hopi::gen {

uint64_t seedFromEnv(uint64_t fallback = 0x9e3779b97f4a7c15ull);

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(uint64_t seed) : eng(seed) {}
  int upto(int n);  // uniform in [0, n)
  bool coin();
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[upto(static_cast<int>(v.size()))];
  }
};

// A small closed environment every generator draws channel names from:
// a,b : ch<unit>; c : ch<ch<unit>>; d : ch<abs<unit>>.
Env standardEnv();

// Guarded closed type of bounded constructor depth.
TypePtr randomType(Rng& rng, int depth);

// Closed value of the given type under env (unit / known name / abstraction).
TermPtr randomValue(Rng& rng, const Env& env, const TypePtr& ty, int depth);

// Well-typed process under env (channels and vars namespaces respected).
TermPtr randomProcess(Rng& rng, const Env& env, int depth);

// A structurally congruent shuffle of c: component permutation and
// re-association, nil padding, unused restrictions, one replication unfold,
// alpha-renamed binders.
TermPtr congruentVariant(Rng& rng, const TermPtr& c);

// A configuration whose resources hold values from a fixed alphabet of
// abstractions over the given trigger identifiers (for merge suites).
// `withCaller` adds a component applying one trigger.
TermPtr randomResourceConfig(Rng& rng, const std::vector<std::string>& triggers,
                             int resources, bool withCaller);

// The fixed 5-value alphabet over up to three trigger identifiers: no call,
// call of k0 / k1 / k2, and a two-call body.
std::vector<TermPtr> resourceValueAlphabet(const std::vector<std::string>& triggers);

// (R, v, w): R a process over standardEnv() with the free variable y of
// type abs<unit> occurring guarded only; v, w closed values of that type.
struct GuardedTriple {
  TermPtr r, v, w;
  std::string y = "y";
};
GuardedTriple randomGuardedTriple(Rng& rng);

}  // namespace hopi::gen
