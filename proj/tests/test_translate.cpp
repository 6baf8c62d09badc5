// test_translate.cpp - trigger translation into the plain calculus, success
// signals, internal choice, freshness cascades, testing contexts, probes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <string>
#include <vector>

#include "gen.hpp"
#include "hopi/lts.hpp"
#include "hopi/parser.hpp"
#include "hopi/printer.hpp"
#include "hopi/reduction.hpp"
#include "hopi/translate.hpp"
#include "hopi/types.hpp"
#include "json.hpp"

using namespace hopi;

TEST_CASE("environment translation turns triggers into channels") {
  CHECK(translateEnv(Env{}).channels.empty());

  Env theta;
  theta.triggers["k"] = tyUnit();
  Env out = translateEnv(theta);
  CHECK(out.triggers.empty());
  REQUIRE(out.channels.count("k") == 1);
  CHECK(typeEq(out.channels.at("k"), tyChan(tyUnit())));

  Env hi;
  hi.triggers["k"] = tyAbs(tyUnit());
  CHECK(typeEq(translateEnv(hi).channels.at("k"), tyChan(tyAbs(tyUnit()))));

  // Channel bindings pass through beside the converted triggers.
  Env mixed;
  mixed.channels["a"] = tyChan(tyUnit());
  mixed.triggers["k"] = tyUnit();
  Env mo = translateEnv(mixed);
  CHECK(mo.channels.size() == 2);

  Env clash;
  clash.channels["k"] = tyChan(tyUnit());
  clash.triggers["k"] = tyUnit();
  CHECK_THROWS_AS(translateEnv(clash), FreshnessViolation);
}

TEST_CASE("trigger calls become forwarder abstractions") {
  Env theta;
  theta.triggers["k"] = tyUnit();
  TermPtr got = translateConfig(theta, mkTriggerCall("k"));
  CHECK(termEq(got, mkLambda("x0", tyUnit(),
                             mkOutput(mkName("k"), mkVar("x0"), mkNil()))));

  // Applied occurrences translate inside the application.
  TermPtr app = translateConfig(theta, mkApp(mkTriggerCall("k"), mkUnit()));
  CHECK(termEq(app, parse("(\\x0:unit -> k!<x0>.0)(())")));

  CHECK_THROWS_AS(translateConfig(Env{}, mkTriggerCall("k")), TypeError);
}

TEST_CASE("resources become replicated servers") {
  Env theta;
  theta.triggers["k"] = tyUnit();
  TermPtr v = mkLambda("x", tyUnit(), mkNil());
  TermPtr got = translateConfig(theta, mkResource("k", v));
  CHECK(termEq(got, parse("!(k?(y0:unit).((\\x:unit -> 0)(y0)))")));

  // The served value is itself translated.
  Env theta2;
  theta2.triggers["k"] = tyUnit();
  theta2.triggers["l"] = tyUnit();
  TermPtr w = mkLambda("x", tyUnit(), mkApp(mkTriggerCall("l"), mkVar("x")));
  TermPtr got2 = translateConfig(theta2, mkResource("k", w));
  CHECK(containsCall(got2, "l") == false);
  CHECK(freeNames(got2).count("l") == 1);  // l now a channel name
}

TEST_CASE("translation is homomorphic on plain processes") {
  gen::Rng rng(gen::seedFromEnv());
  Env env = gen::standardEnv();
  for (int i = 0; i < 100; ++i) {
    TermPtr p = gen::randomProcess(rng, env, 4);
    CHECK(termEq(translateConfig(Env{}, p), p));
  }
}

TEST_CASE("translated configurations type-check under translated environments") {
  gen::Rng rng(gen::seedFromEnv());
  std::vector<std::string> ks = {"k0", "k1", "k2"};
  for (int i = 0; i < 100; ++i) {
    TermPtr c = gen::randomResourceConfig(rng, ks, 1 + rng.upto(3), rng.coin());
    if (!isBalanced(c)) continue;
    Env env;
    for (const auto& k : ks) env.triggers[k] = tyUnit();
    checkConfig(env, c);
    TermPtr t = translateConfig(env, c);
    CHECK_NOTHROW(checkConfig(translateEnv(env), t));
    CHECK(triggerIdents(t).empty());
  }
}

TEST_CASE("success signals") {
  CHECK(termEq(succProcess(Env{}, "succ"), parse("succ!<()>.0")));

  Env one;
  one.channels["b"] = tyChan(tyUnit());
  CHECK(termEq(succProcess(one, "succ"), parse("succ!<b>.0")));

  Env two;
  two.channels["b"] = tyChan(tyUnit());
  two.channels["c"] = tyChan(tyUnit());
  CHECK_THROWS_AS(succProcess(two, "succ"), std::invalid_argument);
}

TEST_CASE("internal choice commits to exactly one branch") {
  TermPtr p = parse("a!<()>.0"), q = parse("b!<()>.0");
  TermPtr choice = internalChoice(p, q);
  Env env;
  env.channels["a"] = tyChan(tyUnit());
  env.channels["b"] = tyChan(tyUnit());
  CHECK_NOTHROW(checkConfig(env, choice));

  std::vector<ReductionStep> steps = reduceStep(choice);
  REQUIRE(steps.size() == 2);  // the two receivers race for the token
  std::set<std::string> branchBarbs;
  for (const auto& st : steps) {
    std::set<std::string> bs = barbs(st.target, 4, 200);
    REQUIRE(bs.size() == 1);
    branchBarbs.insert(*bs.begin());
  }
  CHECK(branchBarbs == std::set<std::string>{"a", "b"});

  // Same branch twice: both residues behave like p.
  for (const auto& st : reduceStep(internalChoice(p, p)))
    CHECK(barbs(st.target, 4, 200) == std::set<std::string>{"a"});

  // The coordination channel avoids captures.
  TermPtr pc = parse("c0!<()>.0");
  TermPtr cc = internalChoice(pc, pc);
  CHECK(barbs(cc, 4, 200) == std::set<std::string>{"c0"});
}

TEST_CASE("known-name exclusion cascade") {
  TermPtr thenP = parse("succ!<()>.0"), elseP = mkNil();
  CHECK(termEq(notInTest("x0", Env{}, thenP, elseP), thenP));

  Env one;
  one.channels["a"] = tyChan(tyUnit());
  TermPtr got = notInTest("x0", one, thenP, elseP);
  CHECK(termEq(got, mkMatch(mkVar("x0"), mkName("a"), elseP, thenP)));

  Env three;
  three.channels["a"] = tyChan(tyUnit());
  three.channels["b"] = tyChan(tyUnit());
  three.channels["c"] = tyChan(tyUnit());
  TermPtr cascade = notInTest("x0", three, thenP, elseP);
  int matches = 0;
  for (TermPtr t = cascade; t->kind == TermKind::Match; t = t->t3) ++matches;
  CHECK(matches == 3);
}

namespace {

Env firstOrderDelta() {
  Env env;
  env.channels["a"] = tyChan(tyUnit());
  env.channels["b"] = tyChan(tyUnit());
  env.channels["c"] = tyChan(tyChan(tyUnit()));
  env.channels["d"] = tyChan(tyAbs(tyUnit()));
  return env;
}

}  // namespace

TEST_CASE("testing contexts, one per label class") {
  Env delta = firstOrderDelta();
  Env theta;

  // partner inputs unit: offer it, then signal
  CHECK(termEq(testingContext(delta, theta, parseLabel("a?()"), "succ", "dead"),
               parse("a!<()>.succ!<()>.0")));

  // partner outputs unit: the comparison degenerates
  CHECK(termEq(testingContext(delta, theta, parseLabel("a!()"), "succ", "dead"),
               parse("a?(x0:unit).succ!<()>.0")));

  // partner outputs a known name: guard on it
  CHECK(termEq(testingContext(delta, theta, parseLabel("c!a"), "succ", "dead"),
               parse("c?(x0:ch<unit>).if x0 = a then succ!<()>.0 else 0")));

  // partner inputs a fresh name: create and reveal it
  CHECK(termEq(testingContext(delta, theta, parseLabel("(b0)c?b0"), "succ", "dead"),
               parse("nu b0:ch<unit>.(c!<b0>.succ!<b0>.0)")));

  // partner extrudes: demand a name unlike every known one
  TermPtr bo = testingContext(delta, theta, parseLabel("(b0)c!b0"), "succ", "dead");
  CHECK(termEq(bo, parse("c?(x0:ch<unit>).if x0 = a then 0 else "
                         "if x0 = b then 0 else succ!<x0>.0")));

  // partner inputs an abstraction: send the forwarder for a fresh trigger
  CHECK(termEq(testingContext(delta, theta, parseLabel("d?(k0)"), "succ", "dead"),
               parse("d!<\\x0:unit -> k0!<x0>.0>.succ!<()>.0")));

  // partner outputs an abstraction: serve it under the fresh trigger name
  CHECK(termEq(
      testingContext(delta, theta, parseLabel("d!(k0)"), "succ", "dead"),
      parse("d?(x0:abs<unit>).(!(k0?(y0:unit).x0(y0)) | succ!<()>.0)")));
}

TEST_CASE("testing contexts at trigger subjects") {
  Env delta;
  Env theta;
  theta.triggers["k"] = tyUnit();
  // interrogating a first-order resource
  CHECK(termEq(testingContext(delta, theta, parseLabel("k?()"), "succ", "dead"),
               parse("k!<()>.succ!<()>.0")));
  // observing a trigger-call emission
  CHECK(termEq(testingContext(delta, theta, parseLabel("k!()"), "succ", "dead"),
               parse("k?(x0:unit).succ!<()>.0")));

  Env hi;
  hi.triggers["k"] = tyAbs(tyUnit());
  CHECK(termEq(testingContext(delta, hi, parseLabel("k?(l0)"), "succ", "dead"),
               parse("k!<\\x0:unit -> l0!<x0>.0>.succ!<()>.0")));
}

TEST_CASE("testing contexts reject bad inputs") {
  Env delta = firstOrderDelta();
  CHECK_THROWS_AS(testingContext(delta, Env{}, Label{}, "succ", "dead"),
                  std::invalid_argument);
  // stale channels
  CHECK_THROWS_AS(testingContext(delta, Env{}, parseLabel("a?()"), "a", "dead"),
                  FreshnessViolation);
  CHECK_THROWS_AS(testingContext(delta, Env{}, parseLabel("a?()"), "succ", "succ"),
                  FreshnessViolation);
  // unknown subject
  CHECK_THROWS_AS(testingContext(delta, Env{}, parseLabel("zz?()"), "succ", "dead"),
                  TypeError);
  // label class at the wrong payload type
  CHECK_THROWS_AS(testingContext(delta, Env{}, parseLabel("d?()"), "succ", "dead"),
                  TypeError);
  CHECK_THROWS_AS(testingContext(delta, Env{}, parseLabel("a?(k0)"), "succ", "dead"),
                  TypeError);
  CHECK_THROWS_AS(
      testingContext(delta, Env{}, parseLabel("(b0)a?b0"), "succ", "dead"),
      TypeError);
}

TEST_CASE("the composed probe confirms enabled labels") {
  Env delta;
  delta.channels["a"] = tyChan(tyAbs(tyUnit()));
  Env theta;
  TermPtr d = parse("a!<\\x:unit -> 0>.0");
  ProbeResult r = probeLabel(delta, theta, d, parseLabel("a!(k0)"));
  CHECK(r.reached);
  CHECK(r.factorizationFound);
  CHECK_FALSE(r.deadBarb);
  CHECK(!r.residue.empty());
}

TEST_CASE("the probe fails on disabled labels") {
  Env delta;
  delta.channels["a"] = tyChan(tyUnit());
  ProbeResult r = probeLabel(delta, Env{}, mkNil(), parseLabel("a!()"));
  CHECK_FALSE(r.reached);
  CHECK_FALSE(r.factorizationFound);
  CHECK_FALSE(r.deadBarb);

  // enabled on input but probed for output
  ProbeResult r2 =
      probeLabel(delta, Env{}, parse("a?(x:unit).0"), parseLabel("a!()"));
  CHECK_FALSE(r2.reached);
}

TEST_CASE("the probe interrogates resources") {
  Env theta;
  theta.triggers["k"] = tyAbs(tyUnit());
  TermPtr d = parse("res k <= \\x:abs<unit> -> x(())", {"k"});
  ProbeResult r = probeLabel(Env{}, theta, d, parseLabel("k?(k0)"));
  CHECK(r.reached);
  CHECK(r.factorizationFound);
  CHECK_FALSE(r.deadBarb);
}

TEST_CASE("the probe sees labels behind internal steps") {
  Env delta;
  delta.channels["a"] = tyChan(tyUnit());
  TermPtr d = parse("nu n:ch<unit>.(n!<()>.0 | n?(x:unit).a!<()>.0)");
  ProbeResult r = probeLabel(delta, Env{}, d, parseLabel("a!()"));
  CHECK(r.reached);
  CHECK(r.factorizationFound);
}

TEST_CASE("probe reports serialize to json") {
  Env delta;
  delta.channels["a"] = tyChan(tyUnit());
  ProbeResult r = probeLabel(delta, Env{}, parse("a!<()>.0"), parseLabel("a!()"));
  nlohmann::json j = nlohmann::json::parse(probeToJson(r));
  CHECK(j["reached"] == true);
  CHECK(j.contains("residue"));
  CHECK(j.contains("factorizationFound"));
  CHECK(j.contains("truncated"));
}

TEST_CASE("translation matches reduction behaviour on balanced configurations") {
  // one-sided knowledge: a caller without its resource
  Env env;
  env.channels["a"] = tyChan(tyUnit());
  env.triggers["k"] = tyUnit();
  TermPtr c = parse("(call k)(()) | a!<()>.0", {"k"});
  checkConfig(env, c);
  TermPtr t = translateConfig(env, c);
  CHECK_NOTHROW(checkConfig(translateEnv(env), t));
  // the call side translates to an h-redex; firing it exposes the k-barb
  std::set<std::string> bs = barbs(t, 3, 100);
  CHECK(bs.count("a") == 1);
  CHECK(bs.count("k") == 1);
}
