// test_syntax.cpp - term construction, parsing/printing, free identifiers,
// substitution, canonical renaming, balance and guardedness classification.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "gen.hpp"
#include "hopi/parser.hpp"
#include "hopi/printer.hpp"
#include "hopi/subst.hpp"
#include "hopi/syntax.hpp"

using namespace hopi;

TEST_CASE("parse terminals and composite processes") {
  CHECK(parse("0")->kind == TermKind::Nil);

  TermPtr t = parse("a!<()>.0 | a?(x:unit).0");
  REQUIRE(t->kind == TermKind::Par);
  CHECK(t->t0->kind == TermKind::Output);
  CHECK(t->t0->t0->kind == TermKind::Name);
  CHECK(t->t0->t0->id == "a");
  CHECK(t->t0->t1->kind == TermKind::UnitVal);
  CHECK(t->t0->t2->kind == TermKind::Nil);
  CHECK(t->t1->kind == TermKind::Input);
  CHECK(t->t1->id == "x");
  CHECK(t->t1->ty->kind == TypeKind::Unit);
  CHECK(t->t1->t1->kind == TermKind::Nil);
}

TEST_CASE("res/call require a declared trigger identifier") {
  CHECK_THROWS_AS(parse("res k <= \\x:unit -> 0"), ParseError);
  CHECK_THROWS_AS(parse("(call k)(())"), ParseError);

  TermPtr r = parse("res k <= \\x:unit -> 0", {"k"});
  REQUIRE(r->kind == TermKind::Resource);
  CHECK(r->id == "k");
  CHECK(r->t0->kind == TermKind::Lambda);

  TermPtr c = parse("(call k)(())", {"k"});
  REQUIRE(c->kind == TermKind::App);
  CHECK(c->t0->kind == TermKind::TriggerCall);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse("a!<()>");
    FAIL("missing continuation must not parse");
  } catch (const ParseError& e) {
    CHECK(e.line >= 1);
    CHECK(e.col >= 1);
  }
  CHECK_THROWS_AS(parse("if a = then 0 else 0"), ParseError);
  CHECK_THROWS_AS(parseTypeText("ch<"), ParseError);
}

TEST_CASE("print renders the surface syntax") {
  CHECK(print(mkNil()) == "0");
  TermPtr app = mkApp(mkLambda("x", tyUnit(), mkNil()), mkUnit());
  CHECK(print(app) == "(\\x:unit -> 0)(())");
  TermPtr call = mkApp(mkTriggerCall("k"), mkUnit());
  CHECK(print(call) == "(call k)(())");
}

TEST_CASE("free names: binders and occurrences") {
  CHECK(freeNames(mkNil()).empty());
  TermPtr bound = mkNew("a", tyChan(tyUnit()), mkOutput(mkName("a"), mkUnit(), mkNil()));
  CHECK(freeNames(bound).empty());
  TermPtr two = mkOutput(mkName("a"), mkName("b"), mkNil());
  CHECK(freeNames(two) == std::set<std::string>{"a", "b"});
}

TEST_CASE("value substitution") {
  CHECK(termEq(substValue(mkNil(), "x", mkUnit()), mkNil()));

  TermPtr body = mkOutput(mkVar("x"), mkUnit(), mkNil());
  TermPtr got = substValue(body, "x", mkName("a"));
  CHECK(termEq(got, mkOutput(mkName("a"), mkUnit(), mkNil())));

  // A binder for the same variable shadows: the body stays as written.
  TermPtr lam = mkLambda("x", tyUnit(), mkApp(mkVar("x"), mkUnit()));
  CHECK(termEq(substValue(lam, "x", mkName("a")), lam));

  CHECK_THROWS_AS(substValue(body, "x", mkOutput(mkName("a"), mkUnit(), mkNil())),
                  std::invalid_argument);
}

TEST_CASE("value substitution avoids capture") {
  // (nu a. x!<a>.0)[a/x] must not let the bound a swallow the payload.
  TermPtr t = mkNew("a", tyChan(tyUnit()), mkOutput(mkVar("x"), mkName("a"), mkNil()));
  TermPtr got = substValue(t, "x", mkName("a"));
  REQUIRE(got->kind == TermKind::New);
  CHECK(got->id != "a");
  CHECK(got->t0->t0->kind == TermKind::Name);
  CHECK(got->t0->t0->id == "a");  // the substituted subject stays free
  CHECK(freeNames(got) == std::set<std::string>{"a"});
}

TEST_CASE("trigger substitution hits calls, not resource values") {
  TermPtr v = mkLambda("x", tyUnit(), mkNil());
  TermPtr callApp = mkApp(mkTriggerCall("k"), mkUnit());
  CHECK(termEq(substTrigger(callApp, "k", v), mkApp(v, mkUnit())));

  CHECK(termEq(substTrigger(mkNil(), "k", v), mkNil()));

  TermPtr w = mkLambda("x", tyUnit(), mkApp(mkTriggerCall("k"), mkVar("x")));
  TermPtr res = mkResource("k", w);
  CHECK(termEq(substTrigger(res, "k", v), res));

  // Other resources' values are ordinary positions.
  TermPtr other = mkResource("l", w);
  TermPtr got = substTrigger(other, "k", v);
  CHECK(containsCall(got, "k") == false);
}

TEST_CASE("canonical renaming identifies alpha-variants") {
  TypePtr t = tyChan(tyUnit());
  CHECK(termEq(alphaCanonical(mkNew("a", t, mkNil())),
               alphaCanonical(mkNew("b", t, mkNil()))));

  CHECK(termEq(alphaCanonical(mkLambda("x", tyUnit(), mkNil())),
               alphaCanonical(mkLambda("y", tyUnit(), mkNil()))));

  gen::Rng rng(gen::seedFromEnv());
  Env env = gen::standardEnv();
  for (int i = 0; i < 200; ++i) {
    TermPtr p = gen::randomProcess(rng, env, 4);
    TermPtr c1 = alphaCanonical(p);
    CHECK(termEq(alphaCanonical(c1), c1));  // idempotent
  }
}

TEST_CASE("balance detects call/resource clashes per trigger") {
  TermPtr v = mkLambda("x", tyUnit(), mkNil());
  TermPtr clash = mkPar(mkResource("k", v), mkApp(mkTriggerCall("k"), mkUnit()));
  CHECK_FALSE(isBalanced(clash));
  CHECK(isBalanced(mkNil()));
  TermPtr ok = mkPar(mkResource("k", v), mkApp(mkTriggerCall("l"), mkUnit()));
  CHECK(isBalanced(ok));
}

TEST_CASE("structural validation") {
  CHECK(validateTerm(mkNil()).empty());
  // Payload position must hold a value.
  TermPtr bad = mkOutput(mkName("a"), mkPar(mkNil(), mkNil()), mkNil());
  CHECK_FALSE(validateTerm(bad).empty());
  // Two resources for the same trigger.
  TermPtr v = mkLambda("x", tyUnit(), mkNil());
  TermPtr dup = mkPar(mkResource("k", v), mkResource("k", v));
  CHECK_FALSE(validateTerm(dup).empty());
  // Resources live at configuration level, not under prefixes.
  TermPtr nested = mkInput(mkName("a"), "x", tyUnit(), mkResource("k", v));
  CHECK_FALSE(validateTerm(nested).empty());
  // Under restriction and parallel they are fine.
  TermPtr okc = mkNew("a", tyChan(tyUnit()), mkPar(mkResource("k", v), mkNil()));
  CHECK(validateTerm(okc).empty());
}

TEST_CASE("identifier namespaces") {
  CHECK(classifyIdent("x") == IdentClass::Variable);
  CHECK(classifyIdent("y1") == IdentClass::Variable);
  CHECK(classifyIdent("z0") == IdentClass::Variable);
  CHECK(classifyIdent("Z") == IdentClass::TypeVariable);
  CHECK(classifyIdent("a") == IdentClass::ChannelName);
  CHECK(classifyIdent("succ") == IdentClass::ChannelName);
}

TEST_CASE("guardedness classification: specimen cases") {
  TermPtr absent = mkOutput(mkName("a"), mkUnit(), mkNil());
  CHECK(guardedOccurrence("x", absent) == Guardedness::Absent);

  TermPtr unguarded = mkApp(mkVar("x"), mkUnit());
  CHECK(guardedOccurrence("x", unguarded) == Guardedness::Unguarded);

  TermPtr guarded = mkInput(mkName("a"), "y", tyUnit(), mkApp(mkVar("x"), mkUnit()));
  CHECK(guardedOccurrence("x", guarded) == Guardedness::Guarded);

  TermPtr mixed = mkPar(unguarded, guarded);
  CHECK(guardedOccurrence("x", mixed) == Guardedness::Mixed);

  // Unguarded survives New/Par/Repl wrappers.
  TermPtr wrapped = mkNew("a", tyChan(tyUnit()), mkRepl(mkPar(unguarded, mkNil())));
  CHECK(guardedOccurrence("x", wrapped) == Guardedness::Unguarded);

  // Payload position (not function position) is a guarded occurrence.
  TermPtr payload = mkOutput(mkName("a"), mkVar("x"), mkNil());
  CHECK(guardedOccurrence("x", payload) == Guardedness::Guarded);

  // Shadowed occurrences do not count.
  TermPtr shadow = mkLambda("x", tyUnit(), mkApp(mkVar("x"), mkUnit()));
  CHECK(guardedOccurrence("x", shadow) == Guardedness::Absent);
}

namespace {

// Brute-force reference classifier: walk every occurrence of x, track
// whether the path from the root crossed anything beyond New/Par/Repl
// (or sat anywhere except function position of an application).
void walkOccurrences(const std::string& x, const TermPtr& t, bool transparent,
                     int& unguarded, int& guarded) {
  if (!t) return;
  switch (t->kind) {
    case TermKind::Var:
      if (t->id == x) ++guarded;  // bare value occurrence, not applied
      return;
    case TermKind::App:
      if (t->t0->kind == TermKind::Var && t->t0->id == x) {
        (transparent ? unguarded : guarded)++;
      } else {
        walkOccurrences(x, t->t0, false, unguarded, guarded);
      }
      walkOccurrences(x, t->t1, false, unguarded, guarded);
      return;
    case TermKind::Lambda:
      if (t->id == x) return;  // shadowed
      walkOccurrences(x, t->t0, false, unguarded, guarded);
      return;
    case TermKind::Input:
      walkOccurrences(x, t->t0, false, unguarded, guarded);
      if (t->id != x) walkOccurrences(x, t->t1, false, unguarded, guarded);
      return;
    case TermKind::Output:
      walkOccurrences(x, t->t0, false, unguarded, guarded);
      walkOccurrences(x, t->t1, false, unguarded, guarded);
      walkOccurrences(x, t->t2, false, unguarded, guarded);
      return;
    case TermKind::Match:
      walkOccurrences(x, t->t0, false, unguarded, guarded);
      walkOccurrences(x, t->t1, false, unguarded, guarded);
      walkOccurrences(x, t->t2, false, unguarded, guarded);
      walkOccurrences(x, t->t3, false, unguarded, guarded);
      return;
    case TermKind::New:
      walkOccurrences(x, t->t0, transparent, unguarded, guarded);
      return;
    case TermKind::Par:
      walkOccurrences(x, t->t0, transparent, unguarded, guarded);
      walkOccurrences(x, t->t1, transparent, unguarded, guarded);
      return;
    case TermKind::Repl:
      walkOccurrences(x, t->t0, transparent, unguarded, guarded);
      return;
    case TermKind::Resource:
      walkOccurrences(x, t->t0, false, unguarded, guarded);
      return;
    default:
      return;
  }
}

Guardedness bruteForceClassify(const std::string& x, const TermPtr& t) {
  int unguarded = 0, guarded = 0;
  walkOccurrences(x, t, true, unguarded, guarded);
  if (unguarded == 0 && guarded == 0) return Guardedness::Absent;
  if (unguarded > 0 && guarded > 0) return Guardedness::Mixed;
  return unguarded > 0 ? Guardedness::Unguarded : Guardedness::Guarded;
}

// Exhaustive term enumeration over a tiny alphabet: names {a,b}, variables
// {x,y}, payload type unit.  Depth counts constructors.
std::vector<TermPtr> enumerateTerms(int depth) {
  if (depth == 0) {
    return {mkNil(), mkApp(mkVar("x"), mkUnit()), mkApp(mkVar("y"), mkUnit()),
            mkOutput(mkName("a"), mkVar("x"), mkNil())};
  }
  std::vector<TermPtr> smaller = enumerateTerms(depth - 1);
  std::vector<TermPtr> out = smaller;
  for (const TermPtr& p : smaller) {
    out.push_back(mkPar(p, mkApp(mkVar("x"), mkUnit())));
    out.push_back(mkRepl(p));
    out.push_back(mkNew("a", tyChan(tyUnit()), p));
    out.push_back(mkInput(mkName("b"), "y", tyUnit(), p));
    out.push_back(mkInput(mkName("b"), "x", tyUnit(), p));
    out.push_back(mkOutput(mkName("a"), mkUnit(), p));
    out.push_back(mkLambda("x", tyUnit(), p));
  }
  return out;
}

}  // namespace

TEST_CASE("guardedness agrees with the brute-force classifier") {
  for (const TermPtr& t : enumerateTerms(2)) {
    for (const char* x : {"x", "y"}) {
      CAPTURE(print(t));
      CHECK(guardedOccurrence(x, t) == bruteForceClassify(x, t));
    }
  }
}

TEST_CASE("round trip: parse after print") {
  gen::Rng rng(gen::seedFromEnv());
  Env env = gen::standardEnv();
  for (int i = 0; i < 300; ++i) {
    TermPtr p = gen::randomProcess(rng, env, 4);
    std::string s = print(p);
    CAPTURE(s);
    TermPtr back = parse(s);
    CHECK(termEq(alphaCanonical(back), alphaCanonical(p)));
  }
}

TEST_CASE("substitution safety: free names only shrink or import from v") {
  gen::Rng rng(gen::seedFromEnv());
  Env env = gen::standardEnv();
  for (int i = 0; i < 200; ++i) {
    TermPtr p = gen::randomProcess(rng, env, 4);
    TermPtr v = gen::randomValue(rng, env, tyChan(tyUnit()), 2);
    TermPtr got = substValue(p, "x", v);
    std::set<std::string> bound;
    std::set<std::string> fnP = freeNames(p), fnV = freeNames(v);
    for (const std::string& n : freeNames(got)) {
      CHECK((fnP.count(n) || fnV.count(n)));
    }
  }
}

TEST_CASE("trigger substitution removes every call when v has none") {
  gen::Rng rng(gen::seedFromEnv());
  std::vector<std::string> ks = {"k0", "k1"};
  for (int i = 0; i < 100; ++i) {
    TermPtr c = gen::randomResourceConfig(rng, ks, 2, true);
    TermPtr v = mkLambda("x", tyUnit(), mkNil());  // no calls inside
    TermPtr got = substTrigger(c, "k0", v);
    // Only the untouched resource value for k0 itself may keep a call.
    if (!containsResource(got, "k0")) CHECK_FALSE(containsCall(got, "k0"));
  }
}

TEST_CASE("environment printing is deterministic and ordered") {
  Env env;
  env.channels["b"] = tyChan(tyUnit());
  env.channels["a"] = tyChan(tyChan(tyUnit()));
  env.triggers["k"] = tyUnit();
  std::string header = printEnvHeader(env);
  CHECK(header == "chan a : ch<ch<unit>>\nchan b : ch<unit>\ntrigger k : unit\n");

  ParsedFile f = parseFile(header + "a!<b>.0 | (call k)(())");
  CHECK(envEq(f.env, env));
  CHECK(f.config->kind == TermKind::Par);
}
